"""Association-rule extraction from an instance repository.

Frequent itemsets are discovered level-wise (Apriori): candidates of size k
are joined from frequent (k-1)-itemsets and pruned using the property that
every subset of a frequent itemset is frequent. Items are field-value pair
identities, so two lexically different pairs count as the same item when
the mapping repository says they mean the same thing.

Rules have exactly one pair in the consequent. Support is an absolute
instance count; confidence is kept as an exact rational.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Mapping

from .errors import UnknownTemplate
from .mappings import MappingRepository, PairKey
from .model import FieldValuePair, InstanceRepository, normalize_label

Itemset = frozenset[PairKey]

DEFAULT_MIN_SUPPORT = 5
DEFAULT_MIN_CONFIDENCE = 0.3


@dataclass(frozen=True)
class MiningParams:
    min_support: int = DEFAULT_MIN_SUPPORT
    min_confidence: float | Fraction = DEFAULT_MIN_CONFIDENCE
    max_antecedent_size: int | None = None

    def __post_init__(self) -> None:
        if self.min_support < 1:
            raise ValueError("min_support must be a positive instance count")
        if not 0 < self.min_confidence <= 1:
            raise ValueError("min_confidence must be in (0, 1]")
        if self.max_antecedent_size is not None and self.max_antecedent_size < 1:
            raise ValueError("max_antecedent_size must be positive when set")


@dataclass(frozen=True)
class AssociationRule:
    """Implication from a set of field-value pairs to a single pair.

    ``antecedent`` is stored in canonical sorted order. ``confidence`` is
    exact: support(antecedent + consequent) / support(antecedent).
    """

    antecedent: tuple[FieldValuePair, ...]
    consequent: FieldValuePair
    support: int
    confidence: Fraction
    template_id: str

    def __post_init__(self) -> None:
        if not self.antecedent:
            raise ValueError("antecedent must be non-empty")
        if self.support < 1:
            raise ValueError("support must be >= 1")
        if not 0 < self.confidence <= 1:
            raise ValueError("confidence must be in (0, 1]")
        cons_field = _slot_identity(self.consequent)
        if any(_slot_identity(p) == cons_field for p in self.antecedent):
            raise ValueError("consequent field occurs in the antecedent")


def _slot_identity(pair: FieldValuePair) -> tuple[str, str]:
    slot = pair.field
    if slot.field_type is not None:
        return ("uri", slot.field_type.uri)
    return ("label", normalize_label(slot.field_label))


def _key_sort(key: PairKey) -> tuple[str, str, str, str]:
    f, v = key
    return (f.kind.value, f.key, v.kind.value, v.key)


def _pair_form_sort(pair: FieldValuePair) -> tuple[str, str, str, str]:
    return (
        pair.field.field_label,
        pair.field.field_type.uri if pair.field.field_type else "",
        pair.value.value_label,
        pair.value.value_type.uri if pair.value.value_type else "",
    )


@dataclass(frozen=True)
class FrequentItemsets(Mapping[Itemset, int]):
    """Frequent itemsets of one template, plus what is needed to emit rules.

    Behaves as a mapping from itemset (frozenset of pair identities) to its
    support count. ``representatives`` gives, for each item identity, the
    concrete field-value form observed most often in the data (ties broken
    lexicographically).
    """

    supports: Mapping[Itemset, int]
    representatives: Mapping[PairKey, FieldValuePair]
    template_id: str
    instance_count: int

    def __getitem__(self, itemset: Itemset) -> int:
        return self.supports[itemset]

    def __iter__(self) -> Iterator[Itemset]:
        return iter(self.supports)

    def __len__(self) -> int:
        return len(self.supports)


def frequent_itemsets(
    repo: InstanceRepository,
    template_id: str,
    min_support: int,
    mappings: MappingRepository | None = None,
    max_size: int | None = None,
) -> FrequentItemsets:
    """All itemsets with support >= min_support among the template's instances.

    Support of an itemset is the number of instances containing every one of
    its pair identities. Output is independent of instance order.
    """
    m = mappings if mappings is not None else MappingRepository.empty()
    instances = repo.for_template(template_id)
    if not instances:
        raise UnknownTemplate(template_id)

    form_counts: dict[PairKey, Counter[FieldValuePair]] = {}
    baskets_raw: list[set[PairKey]] = []
    for inst in instances:
        basket: set[PairKey] = set()
        for pair in inst.pairs:
            key = m.pair_key(pair)
            basket.add(key)
            form_counts.setdefault(key, Counter())[pair] += 1
        baskets_raw.append(basket)

    # Integer item ids in canonical key order make itemsets comparable and
    # the whole computation independent of instance order.
    all_keys = sorted(form_counts, key=_key_sort)
    key_of = dict(enumerate(all_keys))
    id_of = {key: i for i, key in key_of.items()}

    item_counts: Counter[int] = Counter()
    for basket in baskets_raw:
        item_counts.update(id_of[k] for k in basket)
    frequent_items = {i for i, c in item_counts.items() if c >= min_support}

    supports: dict[Itemset, int] = {
        frozenset({key_of[i]}): item_counts[i] for i in sorted(frequent_items)
    }
    baskets = [
        tuple(sorted(id_of[k] for k in basket if id_of[k] in frequent_items))
        for basket in baskets_raw
    ]

    level: set[tuple[int, ...]] = {(i,) for i in frequent_items}
    k = 2
    while level and (max_size is None or k <= max_size):
        if k == 2:
            # Counting co-occurring pairs directly is equivalent to joining
            # all frequent items and avoids a quadratic candidate set.
            counts: Counter[tuple[int, ...]] = Counter()
            for basket in baskets:
                counts.update(combinations(basket, 2))
        else:
            candidates = _join_and_prune(level, k)
            if not candidates:
                break
            counts = Counter()
            for basket in baskets:
                if len(basket) >= k:
                    for combo in combinations(basket, k):
                        if combo in candidates:
                            counts[combo] += 1
        level = {combo for combo, c in counts.items() if c >= min_support}
        for combo in sorted(level):
            supports[frozenset(key_of[i] for i in combo)] = counts[combo]
        k += 1

    representatives = {
        key: min(counter.items(), key=lambda kv: (-kv[1], _pair_form_sort(kv[0])))[0]
        for key, counter in form_counts.items()
    }
    return FrequentItemsets(
        supports=supports,
        representatives=representatives,
        template_id=template_id,
        instance_count=len(instances),
    )


def _join_and_prune(prev_level: set[tuple[int, ...]], k: int) -> set[tuple[int, ...]]:
    """Classic Apriori candidate generation over sorted id tuples."""
    by_prefix: dict[tuple[int, ...], list[int]] = {}
    for itemset in prev_level:
        by_prefix.setdefault(itemset[:-1], []).append(itemset[-1])
    candidates: set[tuple[int, ...]] = set()
    for prefix, lasts in by_prefix.items():
        lasts.sort()
        for a, b in combinations(lasts, 2):
            candidate = prefix + (a, b)
            if all(
                candidate[:i] + candidate[i + 1 :] in prev_level
                for i in range(k - 2)  # dropping either of the last two gives a known member
            ):
                candidates.add(candidate)
    return candidates


def generate_rules(
    itemsets: FrequentItemsets, min_confidence: float | Fraction
) -> list[AssociationRule]:
    """Emit every single-consequent rule meeting the confidence threshold.

    For each frequent itemset S with |S| >= 2 and each pair p in S, the rule
    (S minus p) -> p is produced iff support(S) / support(S minus p) >=
    min_confidence; the rule's support is support(S). Result is sorted
    canonically.
    """
    reps = itemsets.representatives
    rules: list[AssociationRule] = []
    for itemset, support in itemsets.items():
        if len(itemset) < 2:
            continue
        for consequent_key in sorted(itemset, key=_key_sort):
            antecedent_keys = itemset - {consequent_key}
            confidence = Fraction(support, itemsets.supports[antecedent_keys])
            if confidence < min_confidence:
                continue
            rules.append(
                AssociationRule(
                    antecedent=tuple(
                        reps[key] for key in sorted(antecedent_keys, key=_key_sort)
                    ),
                    consequent=reps[consequent_key],
                    support=support,
                    confidence=confidence,
                    template_id=itemsets.template_id,
                )
            )
    rules.sort(key=_rule_sort)
    return rules


def _rule_sort(rule: AssociationRule) -> tuple:
    return (
        _pair_form_sort(rule.consequent),
        len(rule.antecedent),
        tuple(_pair_form_sort(p) for p in rule.antecedent),
    )


def mine_rules(
    repo: InstanceRepository,
    template_id: str,
    params: MiningParams,
    mappings: MappingRepository | None = None,
) -> list[AssociationRule]:
    """Frequent-itemset mining followed by rule generation for one template."""
    max_size = None
    if params.max_antecedent_size is not None:
        max_size = params.max_antecedent_size + 1
    itemsets = frequent_itemsets(
        repo, template_id, params.min_support, mappings, max_size=max_size
    )
    return generate_rules(itemsets, params.min_confidence)
