"""Ranked value recommendations for a target field.

Every rule whose consequent matches the target field contributes a candidate
value. With a non-empty context the candidate's score is the rule's Jaccard
context match times its confidence; with an empty context it is the rule's
support divided by the number of training instances of the rule's source
template. Duplicate values keep the best-scoring rule, zero scores are
discarded, and the survivors are ranked by score, then support, then label.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import InvalidCount, MissingTrainCount, TargetInContext
from .mappings import MappingRepository
from .mining import AssociationRule
from .model import Context, FieldSlot, ValueAtom, normalize_label
from .ruleindex import RuleIndex, context_matching_score


@dataclass(frozen=True)
class RecommendOptions:
    score_cutoff: float | Fraction | None = None
    max_results: int | None = None

    def __post_init__(self) -> None:
        if self.score_cutoff is not None and not 0 <= self.score_cutoff <= 1:
            raise ValueError("score_cutoff must be in [0, 1]")
        if self.max_results is not None and self.max_results < 1:
            raise ValueError("max_results must be positive when set")


@dataclass(frozen=True)
class Recommendation:
    value: ValueAtom
    score: Fraction
    support: int
    rank: int


def recommendation_score(
    rule: AssociationRule, context: Context, mappings: MappingRepository | None = None
) -> Fraction:
    """Context-matching score times rule confidence."""
    return context_matching_score(rule, context, mappings) * rule.confidence


def no_context_score(rule: AssociationRule, train_count: int) -> Fraction:
    """Rule support as a fraction of its template's training instances."""
    if train_count < rule.support:
        raise InvalidCount(
            f"train count {train_count} is smaller than rule support {rule.support}"
        )
    return Fraction(rule.support, train_count)


def recommend(
    context: Context,
    target: FieldSlot,
    index: RuleIndex,
    mappings: MappingRepository | None = None,
    options: RecommendOptions | None = None,
    train_counts: Mapping[str, int] | None = None,
) -> list[Recommendation]:
    """Ranked values for the target field given the context.

    ``train_counts`` (template id -> training-instance count) is only needed
    when the context is empty. The target field must not occur in the
    context.
    """
    m = mappings if mappings is not None else index.mappings_snapshot
    opts = options if options is not None else RecommendOptions()

    target_key = m.field_key(target)
    for pair in context.pairs:
        if m.field_key(pair.field) == target_key:
            raise TargetInContext(target.field_label)

    positions = index.by_consequent_field.get(target_key, ())
    context_keys = frozenset(m.pair_key(p) for p in context.pairs)

    scored: list[tuple[Fraction, AssociationRule, int]] = []
    if context.pairs:
        # Rules sharing no pair with the context score 0 and are discarded,
        # so only visit rules reachable from some context pair.
        selected = set(positions)
        candidates: set[int] = set()
        for key in context_keys:
            candidates.update(
                pos for pos in index.by_antecedent_pair.get(key, ()) if pos in selected
            )
        n_ctx = len(context_keys)
        for pos in sorted(candidates):
            antecedent = index.antecedent_keys[pos]
            inter = len(antecedent & context_keys)
            rule = index.rules[pos]
            union = len(antecedent) + n_ctx - inter
            score = Fraction(inter, union) * rule.confidence
            scored.append((score, rule, pos))
    else:
        if train_counts is None:
            train_counts = {}
        for pos in positions:
            rule = index.rules[pos]
            count = train_counts.get(rule.template_id)
            if count is None:
                raise MissingTrainCount(rule.template_id)
            scored.append((no_context_score(rule, count), rule, pos))

    scored.sort(
        key=lambda item: (
            -item[0],
            -item[1].support,
            normalize_label(item[1].consequent.value.value_label),
            len(item[1].antecedent),
            item[2],
        )
    )

    results: list[Recommendation] = []
    seen_values = set()
    for score, rule, pos in scored:
        if score == 0:
            continue
        value_key = index.consequent_value_keys[pos]
        if value_key in seen_values:
            continue
        seen_values.add(value_key)
        if opts.score_cutoff is not None and score < opts.score_cutoff:
            continue
        results.append(
            Recommendation(
                value=rule.consequent.value,
                score=score,
                support=rule.support,
                rank=len(results) + 1,
            )
        )
        if opts.max_results is not None and len(results) >= opts.max_results:
            break
    return results
