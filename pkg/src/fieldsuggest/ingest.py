"""Reading and writing instance files.

One JSON object per line: {"templateId": "...", "fields": [{"fieldLabel":
..., "fieldType": <uri or null>, "valueLabel": ..., "valueType": <uri or
null>}, ...]}. Pairs with empty value labels are dropped silently (with a
count); records with duplicate fields are dropped whole.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .errors import DuplicateField, ParseError
from .model import (
    FieldSlot,
    FieldValuePair,
    InstanceRepository,
    TemplateInstance,
    TermRef,
    ValueAtom,
    normalize_label,
    validate_instance,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class IngestReport:
    repository: InstanceRepository
    dropped_pairs: int
    dropped_records: int


def _pair_from_json(obj: dict, line_no: int) -> FieldValuePair | None:
    """None when the pair has an empty value and should be dropped."""
    if not isinstance(obj, dict):
        raise ParseError(line_no, f"field entry must be an object, got {type(obj).__name__}")
    try:
        field_label = obj["fieldLabel"]
        value_label = obj.get("valueLabel", "")
    except (KeyError, TypeError) as exc:
        raise ParseError(line_no, f"missing key in field entry: {exc}") from exc
    if not isinstance(field_label, str) or not field_label.strip():
        raise ParseError(line_no, "fieldLabel must be a non-empty string")
    if not isinstance(value_label, str):
        raise ParseError(line_no, "valueLabel must be a string")
    if normalize_label(value_label) == "":
        return None
    try:
        field_type = obj.get("fieldType")
        value_type = obj.get("valueType")
        return FieldValuePair(
            field=FieldSlot(field_label, TermRef(field_type) if field_type else None),
            value=ValueAtom(value_label, TermRef(value_type) if value_type else None),
        )
    except (ValueError, TypeError, AttributeError) as exc:
        raise ParseError(line_no, str(exc)) from exc


def ingest_instances(path: str | Path) -> IngestReport:
    """Parse and validate an instance file."""
    instances: list[TemplateInstance] = []
    dropped_pairs = 0
    dropped_records = 0
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(line_no, f"invalid JSON: {exc.msg}") from exc
            if not isinstance(obj, dict):
                raise ParseError(line_no, "expected a JSON object")
            template_id = obj.get("templateId")
            if not isinstance(template_id, str) or not template_id:
                raise ParseError(line_no, "templateId must be a non-empty string")
            fields = obj.get("fields", [])
            if not isinstance(fields, list):
                raise ParseError(line_no, "fields must be a list")
            pairs = []
            for entry in fields:
                pair = _pair_from_json(entry, line_no)
                if pair is None:
                    dropped_pairs += 1
                else:
                    pairs.append(pair)
            try:
                instances.append(
                    validate_instance(TemplateInstance(template_id, tuple(pairs)))
                )
            except DuplicateField as exc:
                dropped_records += 1
                log.warning("line %d: dropped record: %s", line_no, exc)
    if dropped_pairs:
        log.warning("dropped %d pairs with empty values", dropped_pairs)
    return IngestReport(
        repository=InstanceRepository(tuple(instances)),
        dropped_pairs=dropped_pairs,
        dropped_records=dropped_records,
    )


def instance_to_json(inst: TemplateInstance) -> dict:
    return {
        "templateId": inst.template_id,
        "fields": [
            {
                "fieldLabel": p.field.field_label,
                "fieldType": p.field.field_type.uri if p.field.field_type else None,
                "valueLabel": p.value.value_label,
                "valueType": p.value.value_type.uri if p.value.value_type else None,
            }
            for p in inst.pairs
        ],
    }


def write_instances(repo: InstanceRepository, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for inst in repo.instances:
            fh.write(json.dumps(instance_to_json(inst), ensure_ascii=False) + "\n")
