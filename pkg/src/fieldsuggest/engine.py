"""Engine state: a rule index, its mapping snapshot, and training counts.

Training writes the rule store (JSON lines) plus a sidecar manifest holding
the mining parameters, per-template rule and instance counts, and timing.
Loading rebuilds the index from those two files; the manifest supplies the
per-template training counts that empty-context scoring divides by.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .mappings import MappingRepository, load_mappings
from .mining import AssociationRule, MiningParams, frequent_itemsets, generate_rules
from .model import InstanceRepository
from .ruleindex import RuleIndex, build_index, load_rules, save_rules


@dataclass(frozen=True)
class EngineState:
    index: RuleIndex
    mappings: MappingRepository
    train_counts: Mapping[str, int]
    config: Mapping[str, object] = field(default_factory=dict)


class StateHolder:
    """Single-writer, many-reader holder with atomic swap."""

    def __init__(self, state: EngineState):
        self._state = state
        self._lock = threading.Lock()

    def get(self) -> EngineState:
        return self._state

    def set(self, state: EngineState) -> None:
        with self._lock:
            self._state = state


@dataclass(frozen=True)
class TemplateTrainStats:
    template_id: str
    instances: int
    itemsets: int
    rules_generated: int
    rules_kept: int
    seconds: float


@dataclass(frozen=True)
class TrainResult:
    rules: list[AssociationRule]
    stats: list[TemplateTrainStats]
    train_counts: dict[str, int]
    params: MiningParams


def train(
    repo: InstanceRepository,
    params: MiningParams,
    mappings: MappingRepository | None = None,
) -> TrainResult:
    """Mine every template present in the repository."""
    m = mappings if mappings is not None else MappingRepository.empty()
    max_size = None
    if params.max_antecedent_size is not None:
        max_size = params.max_antecedent_size + 1
    all_rules: list[AssociationRule] = []
    stats: list[TemplateTrainStats] = []
    for template_id in repo.template_ids():
        started = time.perf_counter()
        itemsets = frequent_itemsets(
            repo, template_id, params.min_support, m, max_size=max_size
        )
        generated = sum(len(s) for s in itemsets if len(s) >= 2)
        rules = generate_rules(itemsets, params.min_confidence)
        elapsed = time.perf_counter() - started
        stats.append(
            TemplateTrainStats(
                template_id=template_id,
                instances=itemsets.instance_count,
                itemsets=len(itemsets),
                rules_generated=generated,
                rules_kept=len(rules),
                seconds=elapsed,
            )
        )
        all_rules.extend(rules)
    return TrainResult(
        rules=all_rules,
        stats=stats,
        train_counts=repo.counts_by_template(),
        params=params,
    )


def manifest_path_for(rules_path: str | Path) -> Path:
    return Path(str(rules_path) + ".manifest.json")


def write_store(
    result: TrainResult,
    rules_path: str | Path,
    mappings: MappingRepository | None = None,
) -> None:
    save_rules(result.rules, rules_path, mappings)
    manifest = {
        "params": {
            "minSupport": result.params.min_support,
            "minConfidence": float(result.params.min_confidence),
            "maxAntecedentSize": result.params.max_antecedent_size,
        },
        "templates": [
            {
                "templateId": s.template_id,
                "trainInstances": s.instances,
                "frequentItemsets": s.itemsets,
                "rulesGenerated": s.rules_generated,
                "rulesKept": s.rules_kept,
                "seconds": round(s.seconds, 6),
            }
            for s in result.stats
        ],
        "trainCounts": result.train_counts,
    }
    with open(manifest_path_for(rules_path), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def load_engine(
    rules_path: str | Path,
    mappings_path: str | Path | None = None,
    manifest_path: str | Path | None = None,
) -> EngineState:
    """Rebuild an engine from a rule store, optional mappings and manifest.

    Without a manifest (or with one that lacks counts) empty-context
    recommendations for the affected templates raise MissingTrainCount.
    """
    mappings = load_mappings(mappings_path) if mappings_path else MappingRepository.empty()
    rules = load_rules(rules_path)
    manifest_file = Path(manifest_path) if manifest_path else manifest_path_for(rules_path)
    train_counts: dict[str, int] = {}
    config: dict[str, object] = {"rulesPath": str(rules_path)}
    if manifest_file.exists():
        with open(manifest_file, encoding="utf-8") as fh:
            manifest = json.load(fh)
        train_counts = {k: int(v) for k, v in manifest.get("trainCounts", {}).items()}
        config["params"] = manifest.get("params", {})
    if mappings_path:
        config["mappingsPath"] = str(mappings_path)
    return EngineState(
        index=build_index(rules, mappings),
        mappings=mappings,
        train_counts=train_counts,
        config=config,
    )
