"""Domain types: templates, instances, field-value pairs, contexts.

All types are immutable after construction and safe to share between
threads. Labels are compared after :func:`normalize_label`; term URIs are
compared verbatim (whitespace-trimmed only).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import DuplicateField


def normalize_label(label: str) -> str:
    """Trim, collapse internal whitespace runs to one space, case-fold."""
    return " ".join(label.split()).casefold()


@dataclass(frozen=True, slots=True)
class TermRef:
    """Reference to an ontology term by its URI.

    The URI must be non-empty and contain a scheme separator. No IRI
    normalization is applied beyond trimming whitespace; two TermRefs are
    equal iff their trimmed URIs are equal.
    """

    uri: str

    def __post_init__(self) -> None:
        trimmed = self.uri.strip()
        if not trimmed or ":" not in trimmed:
            raise ValueError(f"not an IRI: {self.uri!r}")
        object.__setattr__(self, "uri", trimmed)


@dataclass(frozen=True, slots=True)
class FieldSlot:
    """A form field: human-readable label plus optional ontology annotation."""

    field_label: str
    field_type: TermRef | None = None

    def __post_init__(self) -> None:
        if not self.field_label.strip():
            raise ValueError("empty field label")


@dataclass(frozen=True, slots=True)
class ValueAtom:
    """A field value: display label plus optional ontology annotation.

    An empty label is representable here so that raw parsed data can pass
    through; :func:`validate_instance` drops such pairs.
    """

    value_label: str
    value_type: TermRef | None = None


@dataclass(frozen=True, slots=True)
class FieldValuePair:
    field: FieldSlot
    value: ValueAtom


# Intrinsic identity of a field (no mapping repository involved): the
# annotation URI when present, the normalized label otherwise.
def _intrinsic_field_identity(slot: FieldSlot) -> tuple[str, str]:
    if slot.field_type is not None:
        return ("uri", slot.field_type.uri)
    return ("label", normalize_label(slot.field_label))


@dataclass(frozen=True, slots=True)
class TemplateInstance:
    """One filled-in record: a template id plus a set of field-value pairs.

    Pair order is preserved for lossless round-trips through the JSON-lines
    format; all comparisons treat ``pairs`` as a set.
    """

    template_id: str
    pairs: tuple[FieldValuePair, ...] = ()


def validate_instance(raw: TemplateInstance) -> TemplateInstance:
    """Drop pairs with empty value labels, then reject duplicate fields.

    Idempotent. Duplicates are detected by intrinsic field identity
    (annotation URI if present, normalized label otherwise).
    """
    kept = tuple(
        p for p in raw.pairs if normalize_label(p.value.value_label) != ""
    )
    seen: set[tuple[str, str]] = set()
    for pair in kept:
        ident = _intrinsic_field_identity(pair.field)
        if ident in seen:
            raise DuplicateField(pair.field.field_label)
        seen.add(ident)
    if kept == raw.pairs:
        return raw
    return TemplateInstance(raw.template_id, kept)


@dataclass(frozen=True, slots=True)
class InstanceRepository:
    """Ordered collection of template instances."""

    instances: tuple[TemplateInstance, ...] = ()

    def __len__(self) -> int:
        return len(self.instances)

    def __iter__(self) -> Iterator[TemplateInstance]:
        return iter(self.instances)

    def template_ids(self) -> tuple[str, ...]:
        """Distinct template ids in first-seen order."""
        seen: dict[str, None] = {}
        for inst in self.instances:
            seen.setdefault(inst.template_id, None)
        return tuple(seen)

    def for_template(self, template_id: str) -> tuple[TemplateInstance, ...]:
        return tuple(i for i in self.instances if i.template_id == template_id)

    def counts_by_template(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for inst in self.instances:
            counts[inst.template_id] = counts.get(inst.template_id, 0) + 1
        return counts


@dataclass(frozen=True, slots=True)
class Context:
    """Field-value pairs the user has already entered. May be empty."""

    pairs: tuple[FieldValuePair, ...] = ()

    def __len__(self) -> int:
        return len(self.pairs)


def make_context(pairs: Iterable[FieldValuePair]) -> Context:
    """Build a context, rejecting duplicate field identities."""
    collected = tuple(pairs)
    seen: set[tuple[str, str]] = set()
    for pair in collected:
        ident = _intrinsic_field_identity(pair.field)
        if ident in seen:
            raise DuplicateField(pair.field.field_label)
        seen.add(ident)
    return Context(collected)
