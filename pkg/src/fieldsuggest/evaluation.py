"""Offline evaluation: split, majority baseline, reciprocal rank, context sweep.

For every test instance and every evaluation field it has a value for, the
harness runs one recommendation per subset of the remaining populated
evaluation fields (2^k executions for k non-target fields) and records the
reciprocal rank of the true value for both the rule-based recommender and a
context-blind majority baseline. Aggregates are reported by context size and
by target field.
"""

from __future__ import annotations

import csv
import json
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import EmptyRepository, TargetMissing
from .mappings import MappingRepository, MatchKey
from .mining import MiningParams, mine_rules
from .model import (
    Context,
    FieldSlot,
    FieldValuePair,
    InstanceRepository,
    TemplateInstance,
    ValueAtom,
    normalize_label,
)
from .recommender import RecommendOptions, Recommendation, recommend
from .ruleindex import build_index

# Field labels evaluated by default when the data contains them ("organism
# part" and "tissue" are alternate names for the same concept).
DEFAULT_EVAL_FIELD_LABELS = (
    "sex",
    "organism part",
    "tissue",
    "cell line",
    "cell type",
    "disease",
    "ethnicity",
)

RULES_METHOD = "rules"
BASELINE_METHOD = "baseline"


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.85
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0 < self.train_fraction < 1:
            raise ValueError("train_fraction must be in (0, 1)")


def split(
    repo: InstanceRepository, spec: SplitSpec
) -> tuple[InstanceRepository, InstanceRepository]:
    """Seeded uniform shuffle, cut at floor(n * train_fraction).

    The fraction is interpreted as the decimal it was written as, so e.g.
    0.85 of 135,187 cuts at exactly 114,908.
    """
    if not repo.instances:
        raise EmptyRepository("cannot split an empty repository")
    order = list(range(len(repo.instances)))
    random.Random(spec.seed).shuffle(order)
    cut = int(Fraction(str(spec.train_fraction)) * len(order))
    train = tuple(repo.instances[i] for i in order[:cut])
    test = tuple(repo.instances[i] for i in order[cut:])
    return InstanceRepository(train), InstanceRepository(test)


@dataclass(frozen=True)
class MajorityBaseline:
    """Context-blind per-field ranking of values by training frequency."""

    rankings: Mapping[MatchKey, tuple[ValueAtom, ...]]
    mappings: MappingRepository

    def ranking_for(self, field: FieldSlot) -> tuple[ValueAtom, ...]:
        return self.rankings.get(self.mappings.field_key(field), ())


def baseline_majority(
    train: InstanceRepository, mappings: MappingRepository | None = None
) -> MajorityBaseline:
    """Rank each field's values by frequency (desc), ties by label (asc)."""
    m = mappings if mappings is not None else MappingRepository.empty()
    counts: dict[MatchKey, Counter[MatchKey]] = {}
    forms: dict[tuple[MatchKey, MatchKey], Counter[ValueAtom]] = {}
    for inst in train.instances:
        for pair in inst.pairs:
            fkey = m.field_key(pair.field)
            vkey = m.value_key(pair.value)
            counts.setdefault(fkey, Counter())[vkey] += 1
            forms.setdefault((fkey, vkey), Counter())[pair.value] += 1

    def representative(fkey: MatchKey, vkey: MatchKey) -> ValueAtom:
        observed = forms[(fkey, vkey)]
        return min(
            observed.items(),
            key=lambda kv: (-kv[1], kv[0].value_label, kv[0].value_type.uri if kv[0].value_type else ""),
        )[0]

    rankings: dict[MatchKey, tuple[ValueAtom, ...]] = {}
    for fkey, value_counts in counts.items():
        ranked = sorted(
            value_counts.items(),
            key=lambda kv: (
                -kv[1],
                normalize_label(representative(fkey, kv[0]).value_label),
                kv[0],
            ),
        )
        rankings[fkey] = tuple(representative(fkey, vkey) for vkey, _ in ranked)
    return MajorityBaseline(rankings=rankings, mappings=m)


def reciprocal_rank(
    ranking: Sequence[ValueAtom | Recommendation],
    truth: ValueAtom,
    mappings: MappingRepository | None = None,
) -> Fraction:
    """1 / position of the first entry matching the truth's value key; 0 if absent."""
    m = mappings if mappings is not None else MappingRepository.empty()
    truth_key = m.value_key(truth)
    for position, entry in enumerate(ranking, start=1):
        atom = entry.value if isinstance(entry, Recommendation) else entry
        if m.value_key(atom) == truth_key:
            return Fraction(1, position)
    return Fraction(0)


def context_sweep(
    instance: TemplateInstance,
    target: FieldSlot,
    eval_fields: Iterable[FieldSlot],
    mappings: MappingRepository | None = None,
) -> list[tuple[Context, int]]:
    """One context per subset of the instance's non-target evaluation fields.

    For k usable fields this yields exactly 2^k contexts, from the empty
    context up to all k fields, in (size, field order) order.
    """
    m = mappings if mappings is not None else MappingRepository.empty()
    target_key = m.field_key(target)
    eval_keys = {m.field_key(f) for f in eval_fields}
    if not any(m.field_key(p.field) == target_key for p in instance.pairs):
        raise TargetMissing(f"instance has no value for {target.field_label!r}")
    usable: list[FieldValuePair] = sorted(
        (
            p
            for p in instance.pairs
            if m.field_key(p.field) in eval_keys and m.field_key(p.field) != target_key
        ),
        key=lambda p: m.field_key(p.field),
    )
    sweeps: list[tuple[Context, int]] = []
    for size in range(len(usable) + 1):
        for combo in combinations(usable, size):
            sweeps.append((Context(tuple(combo)), size))
    return sweeps


@dataclass(frozen=True)
class ExecutionRecord:
    """One recommendation run of one method against one test instance."""

    instance_index: int
    template_id: str
    target_label: str
    context_fields: tuple[str, ...]
    context_size: int
    method: str
    rank: int | None
    rr: Fraction


@dataclass(frozen=True)
class CellStat:
    mrr: float
    n: int


@dataclass(frozen=True)
class EvalReport:
    records: tuple[ExecutionRecord, ...]
    by_context_size: Mapping[tuple[str, int], CellStat]
    by_field: Mapping[tuple[str, str], CellStat]
    config: Mapping[str, object]

    @property
    def run_count(self) -> int:
        return len(self.records)


def _aggregate(
    records: Sequence[ExecutionRecord],
) -> tuple[dict[tuple[str, int], CellStat], dict[tuple[str, str], CellStat]]:
    size_sums: dict[tuple[str, int], list] = {}
    field_sums: dict[tuple[str, str], list] = {}
    for rec in records:
        s = size_sums.setdefault((rec.method, rec.context_size), [Fraction(0), 0])
        s[0] += rec.rr
        s[1] += 1
        f = field_sums.setdefault((rec.method, rec.target_label), [Fraction(0), 0])
        f[0] += rec.rr
        f[1] += 1
    by_size = {k: CellStat(mrr=float(v[0] / v[1]), n=v[1]) for k, v in size_sums.items()}
    by_field = {k: CellStat(mrr=float(v[0] / v[1]), n=v[1]) for k, v in field_sums.items()}
    return by_size, by_field


def default_eval_fields(*repos: InstanceRepository) -> list[FieldSlot]:
    """The six common sample-description fields when present, every
    observed field otherwise."""
    seen: dict[tuple, FieldSlot] = {}
    for repo in repos:
        for inst in repo.instances:
            for pair in inst.pairs:
                slot = pair.field
                ident = (
                    slot.field_type.uri
                    if slot.field_type
                    else normalize_label(slot.field_label)
                )
                seen.setdefault(("t" if slot.field_type else "l", ident), slot)
    slots = list(seen.values())
    preferred = [
        s for s in slots if normalize_label(s.field_label) in DEFAULT_EVAL_FIELD_LABELS
    ]
    return preferred if preferred else slots


def evaluate(
    train: InstanceRepository,
    test: InstanceRepository,
    params: MiningParams,
    mappings: MappingRepository | None = None,
    eval_fields: Iterable[FieldSlot] | None = None,
    options: RecommendOptions | None = None,
) -> EvalReport:
    """Mine rules from the training set and sweep the test set.

    Rules are mined per template over every template present in the training
    set; recommendations may still cross templates through the mapping
    repository at query time.
    """
    m = mappings if mappings is not None else MappingRepository.empty()
    fields = list(eval_fields) if eval_fields is not None else default_eval_fields(train, test)

    rules = []
    for template_id in train.template_ids():
        rules.extend(mine_rules(train, template_id, params, m))
    index = build_index(rules, m)
    train_counts = train.counts_by_template()
    baseline = baseline_majority(train, m)

    eval_keys = {m.field_key(f) for f in fields}
    field_labels: dict[MatchKey, str] = {}
    for slot in fields:
        field_labels.setdefault(m.field_key(slot), normalize_label(slot.field_label))

    records: list[ExecutionRecord] = []
    for idx, inst in enumerate(test.instances):
        targets = sorted(
            (p for p in inst.pairs if m.field_key(p.field) in eval_keys),
            key=lambda p: m.field_key(p.field),
        )
        for target_pair in targets:
            target = target_pair.field
            truth = target_pair.value
            target_label = field_labels[m.field_key(target)]
            baseline_rr = reciprocal_rank(baseline.ranking_for(target), truth, m)
            baseline_rank = (
                int(1 / baseline_rr) if baseline_rr else None
            )
            for ctx, size in context_sweep(inst, target, fields, m):
                ranking = recommend(ctx, target, index, m, options, train_counts)
                rules_rr = reciprocal_rank(ranking, truth, m)
                context_names = tuple(
                    field_labels[m.field_key(p.field)] for p in ctx.pairs
                )
                records.append(
                    ExecutionRecord(
                        instance_index=idx,
                        template_id=inst.template_id,
                        target_label=target_label,
                        context_fields=context_names,
                        context_size=size,
                        method=RULES_METHOD,
                        rank=int(1 / rules_rr) if rules_rr else None,
                        rr=rules_rr,
                    )
                )
                records.append(
                    ExecutionRecord(
                        instance_index=idx,
                        template_id=inst.template_id,
                        target_label=target_label,
                        context_fields=context_names,
                        context_size=size,
                        method=BASELINE_METHOD,
                        rank=baseline_rank,
                        rr=baseline_rr,
                    )
                )

    by_size, by_field = _aggregate(records)
    config = {
        "minSupport": params.min_support,
        "minConfidence": float(params.min_confidence),
        "maxAntecedentSize": params.max_antecedent_size,
        "trainInstances": len(train),
        "testInstances": len(test),
        "templates": list(train.template_ids()),
        "evalFields": sorted({field_labels[k] for k in eval_keys}),
        "ruleCount": len(rules),
    }
    return EvalReport(
        records=tuple(records),
        by_context_size=by_size,
        by_field=by_field,
        config=config,
    )


# --- report emission ---------------------------------------------------------


def _cells(records: Sequence[ExecutionRecord]) -> list[dict]:
    sums: dict[tuple[str, int, str], list] = {}
    for rec in records:
        cell = sums.setdefault((rec.method, rec.context_size, rec.target_label), [Fraction(0), 0])
        cell[0] += rec.rr
        cell[1] += 1
    return [
        {
            "method": method,
            "contextSize": size,
            "field": field,
            "mrr": float(total / n),
            "n": n,
        }
        for (method, size, field), (total, n) in sorted(sums.items())
    ]


def report_to_json(report: EvalReport) -> dict:
    return {
        "config": dict(report.config),
        "runCount": report.run_count,
        "byContextSize": [
            {"method": method, "contextSize": size, "mrr": stat.mrr, "n": stat.n}
            for (method, size), stat in sorted(report.by_context_size.items())
        ],
        "byField": [
            {"method": method, "field": field, "mrr": stat.mrr, "n": stat.n}
            for (method, field), stat in sorted(report.by_field.items())
        ],
        "cells": _cells(report.records),
    }


def write_report_json(report: EvalReport, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report_to_json(report), fh, indent=2)
        fh.write("\n")


def write_report_csv(report: EvalReport, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "contextSize", "field", "mrr", "n"])
        for cell in _cells(report.records):
            writer.writerow(
                [cell["method"], cell["contextSize"], cell["field"], cell["mrr"], cell["n"]]
            )


def write_log_jsonl(report: EvalReport, path: str | Path) -> None:
    """Per-execution log; every report cell is recomputable from it."""
    with open(path, "w", encoding="utf-8") as fh:
        for rec in report.records:
            fh.write(
                json.dumps(
                    {
                        "instance": rec.instance_index,
                        "templateId": rec.template_id,
                        "target": rec.target_label,
                        "contextFields": list(rec.context_fields),
                        "contextSize": rec.context_size,
                        "method": rec.method,
                        "rank": rec.rank,
                        "rr": float(rec.rr),
                    }
                )
                + "\n"
            )
