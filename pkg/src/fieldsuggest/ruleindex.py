"""Rule storage and lookup: select by consequent field, score against context.

The index answers two questions. Which rules can produce values for a target
field (an inverted map from consequent field key to rules, the hard filter)?
And how well does each rule's antecedent match what the user has already
entered (Jaccard index over pair identities, the soft score)?

Rules persist as JSON lines, one rule object per line, with the keys
antecedent[], consequent[], support, confidence and templateId; each pair
entry carries fieldLabel, fieldType, fieldTypeMappings, fieldValueLabel,
fieldValueType and fieldValueMappings. The *Mappings arrays are written for
interoperability and ignored on load; equivalences always come from the
mapping repository.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import ParseError
from .mappings import MappingRepository, MatchKey, PairKey
from .mining import AssociationRule
from .model import Context, FieldSlot, FieldValuePair, TermRef, ValueAtom


@dataclass(frozen=True)
class RuleIndex:
    """Immutable lookup structure over a set of mined rules.

    ``antecedent_keys`` and ``consequent_value_keys`` are precomputed per
    rule (same order as ``rules``) so that scoring a request touches no
    mapping lookups. ``by_antecedent_pair`` lets context scoring visit only
    the rules that share at least one pair with the context; rules it skips
    have an empty intersection and would be discarded at score 0 anyway.
    """

    rules: tuple[AssociationRule, ...]
    by_consequent_field: Mapping[MatchKey, tuple[int, ...]]
    mappings_snapshot: MappingRepository
    antecedent_keys: tuple[frozenset[PairKey], ...]
    consequent_value_keys: tuple[MatchKey, ...]
    by_antecedent_pair: Mapping[PairKey, tuple[int, ...]]

    def __len__(self) -> int:
        return len(self.rules)


def build_index(
    rules: Iterable[AssociationRule], mappings: MappingRepository | None = None
) -> RuleIndex:
    """Index rules by the match key of their consequent field."""
    m = mappings if mappings is not None else MappingRepository.empty()
    rule_tuple = tuple(rules)
    by_field: dict[MatchKey, list[int]] = {}
    by_pair: dict[PairKey, list[int]] = {}
    antecedent_keys = []
    value_keys = []
    for pos, rule in enumerate(rule_tuple):
        by_field.setdefault(m.field_key(rule.consequent.field), []).append(pos)
        keys = frozenset(m.pair_key(p) for p in rule.antecedent)
        antecedent_keys.append(keys)
        for key in keys:
            by_pair.setdefault(key, []).append(pos)
        value_keys.append(m.value_key(rule.consequent.value))
    return RuleIndex(
        rules=rule_tuple,
        by_consequent_field={k: tuple(v) for k, v in by_field.items()},
        mappings_snapshot=m,
        antecedent_keys=tuple(antecedent_keys),
        consequent_value_keys=tuple(value_keys),
        by_antecedent_pair={k: tuple(v) for k, v in by_pair.items()},
    )


def select_rules(index: RuleIndex, target: FieldSlot) -> list[AssociationRule]:
    """All rules whose consequent field matches the target field."""
    positions = index.by_consequent_field.get(
        index.mappings_snapshot.field_key(target), ()
    )
    return [index.rules[i] for i in positions]


def context_matching_score(
    rule: AssociationRule, context: Context, mappings: MappingRepository | None = None
) -> Fraction:
    """Jaccard index between the rule antecedent and the context.

    Pair identities must match on both field and value to count in the
    intersection; a context pair with the right field but a different value
    contributes only to the union.
    """
    m = mappings if mappings is not None else MappingRepository.empty()
    antecedent = {m.pair_key(p) for p in rule.antecedent}
    ctx = {m.pair_key(p) for p in context.pairs}
    union = len(antecedent | ctx)
    if union == 0:
        return Fraction(0)
    return Fraction(len(antecedent & ctx), union)


# --- persistence (one JSON object per line) ---------------------------------


def _entry_to_json(pair: FieldValuePair, m: MappingRepository) -> dict:
    def equivalents(term: TermRef | None) -> list[str]:
        if term is None:
            return []
        return sorted(t.uri for t in m.equivalent_terms(term) if t.uri != term.uri)

    return {
        "fieldLabel": pair.field.field_label,
        "fieldType": pair.field.field_type.uri if pair.field.field_type else None,
        "fieldTypeMappings": equivalents(pair.field.field_type),
        "fieldValueLabel": pair.value.value_label,
        "fieldValueType": pair.value.value_type.uri if pair.value.value_type else None,
        "fieldValueMappings": equivalents(pair.value.value_type),
    }


def rule_to_json(rule: AssociationRule, mappings: MappingRepository | None = None) -> dict:
    m = mappings if mappings is not None else MappingRepository.empty()
    return {
        "antecedent": [_entry_to_json(p, m) for p in rule.antecedent],
        "consequent": [_entry_to_json(rule.consequent, m)],
        "support": rule.support,
        "confidence": float(rule.confidence),
        "templateId": rule.template_id,
    }


def _entry_from_json(obj: dict) -> FieldValuePair:
    field_type = obj.get("fieldType")
    value_type = obj.get("fieldValueType")
    return FieldValuePair(
        field=FieldSlot(
            field_label=obj["fieldLabel"],
            field_type=TermRef(field_type) if field_type else None,
        ),
        value=ValueAtom(
            value_label=obj["fieldValueLabel"],
            value_type=TermRef(value_type) if value_type else None,
        ),
    )


def _exact_confidence(support: int, confidence: float) -> Fraction:
    """Recover the exact rational confidence from the stored decimal.

    Confidence was written as float(support / antecedent_support); for any
    antecedent support below 2**52 the rounding error is far smaller than
    one count, so the denominator is recovered exactly. Stores whose support
    and confidence are mutually inconsistent keep the decimal as written.
    """
    if confidence == 1.0:
        return Fraction(1)
    if 0 < confidence < 1:
        denominator = round(support / confidence)
        if denominator > 0:
            recovered = Fraction(support, denominator)
            if float(recovered) == confidence:
                return recovered
    return Fraction(confidence)


def rule_from_json(obj: dict) -> AssociationRule:
    antecedent = tuple(_entry_from_json(e) for e in obj["antecedent"])
    (consequent,) = [_entry_from_json(e) for e in obj["consequent"]]
    support = int(obj["support"])
    return AssociationRule(
        antecedent=antecedent,
        consequent=consequent,
        support=support,
        confidence=_exact_confidence(support, float(obj["confidence"])),
        template_id=obj["templateId"],
    )


def save_rules(
    rules: Iterable[AssociationRule],
    path: str | Path,
    mappings: MappingRepository | None = None,
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rule in rules:
            fh.write(json.dumps(rule_to_json(rule, mappings), ensure_ascii=False) + "\n")


def load_rules(path: str | Path) -> list[AssociationRule]:
    rules: list[AssociationRule] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(line_no, f"invalid JSON: {exc.msg}") from exc
            try:
                rules.append(rule_from_json(obj))
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(line_no, f"bad rule object: {exc}") from exc
    return rules
