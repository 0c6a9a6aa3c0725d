"""Exception types shared across the package."""

from __future__ import annotations


class FieldSuggestError(Exception):
    """Base class for all errors raised by this package."""


class DuplicateField(FieldSuggestError):
    """Two field-value pairs in one instance or context share a field identity."""

    def __init__(self, field_label: str):
        super().__init__(f"duplicate field: {field_label!r}")
        self.field_label = field_label


class MalformedRecord(FieldSuggestError):
    """A mapping record is not a list of at least two IRI strings."""


class UnknownTemplate(FieldSuggestError):
    """No instance in the repository matches the requested template id."""

    def __init__(self, template_id: str):
        super().__init__(f"no instances for template {template_id!r}")
        self.template_id = template_id


class InvalidCount(FieldSuggestError):
    """A training-instance count is smaller than a rule's support."""


class MissingTrainCount(FieldSuggestError):
    """An empty-context recommendation needs a per-template training count."""

    def __init__(self, template_id: str):
        super().__init__(
            f"no training-instance count for template {template_id!r}; "
            "empty-context scores are support / train count"
        )
        self.template_id = template_id


class TargetInContext(FieldSuggestError):
    """The target field also appears in the context."""

    def __init__(self, field_label: str):
        super().__init__(f"target field {field_label!r} is already in the context")
        self.field_label = field_label


class TargetMissing(FieldSuggestError):
    """A test instance has no value for the requested target field."""


class EmptyRepository(FieldSuggestError):
    """An operation that needs at least one instance got an empty repository."""


class ParseError(FieldSuggestError):
    """A line of an input file could not be parsed."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason
