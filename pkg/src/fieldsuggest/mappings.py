"""Equivalence classes of ontology terms and canonical match keys.

Structurally different templates are aligned by resolving every field and
value to a :class:`MatchKey`: the canonical representative of its term's
equivalence class when the item is annotated, its normalized label when it
is not. An annotated item never matches an unannotated one, even if the
labels agree.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import MalformedRecord
from .model import FieldSlot, FieldValuePair, TermRef, ValueAtom, normalize_label


class MatchKind(str, enum.Enum):
    TERM_CLASS = "term"
    LABEL = "label"


@dataclass(frozen=True, slots=True, order=True)
class MatchKey:
    """Canonical comparison identity for a field or value."""

    kind: MatchKind
    key: str


# (field key, value key): the identity of a field-value pair for all set
# operations (itemset support, Jaccard, dedup).
PairKey = tuple[MatchKey, MatchKey]


@dataclass(frozen=True)
class MappingRepository:
    """Disjoint equivalence classes of term URIs, immutable after load.

    ``canonical`` maps every mapped URI to its class representative (the
    lexicographically smallest URI of the class); ``members`` maps each
    representative to the full class.
    """

    canonical: Mapping[str, str]
    members: Mapping[str, frozenset[str]]

    @classmethod
    def empty(cls) -> "MappingRepository":
        return cls(canonical={}, members={})

    @classmethod
    def from_records(cls, records: Iterable[Sequence[str]]) -> "MappingRepository":
        """Union-find closure of the given records.

        Each record is a list of >= 2 URIs asserting that all of them denote
        the same concept; overlapping records merge into one class.
        """
        parent: dict[str, str] = {}

        def find(u: str) -> str:
            root = u
            while parent[root] != root:
                root = parent[root]
            while parent[u] != root:
                parent[u], u = root, parent[u]
            return root

        for record in records:
            uris = list(record)
            if len(uris) < 2:
                raise MalformedRecord(f"mapping record needs >= 2 URIs: {uris!r}")
            try:
                terms = [TermRef(u).uri for u in uris]
            except (ValueError, TypeError) as exc:
                raise MalformedRecord(f"bad URI in mapping record {uris!r}: {exc}") from exc
            for uri in terms:
                parent.setdefault(uri, uri)
            first = terms[0]
            for uri in terms[1:]:
                ra, rb = find(first), find(uri)
                if ra != rb:
                    parent[rb] = ra
        classes: dict[str, set[str]] = {}
        for uri in parent:
            classes.setdefault(find(uri), set()).add(uri)
        canonical: dict[str, str] = {}
        members: dict[str, frozenset[str]] = {}
        for group in classes.values():
            rep = min(group)
            members[rep] = frozenset(group)
            for uri in group:
                canonical[uri] = rep
        return cls(canonical=canonical, members=members)

    def canonical_uri(self, uri: str) -> str:
        return self.canonical.get(uri, uri)

    def equivalent_terms(self, t: TermRef) -> frozenset[TermRef]:
        """Full equivalence class of ``t``, including ``t``; {t} if unmapped."""
        rep = self.canonical.get(t.uri)
        if rep is None:
            return frozenset({t})
        return frozenset(TermRef(u) for u in self.members[rep])

    def field_key(self, slot: FieldSlot) -> MatchKey:
        if slot.field_type is not None:
            return MatchKey(MatchKind.TERM_CLASS, self.canonical_uri(slot.field_type.uri))
        return MatchKey(MatchKind.LABEL, normalize_label(slot.field_label))

    def value_key(self, atom: ValueAtom) -> MatchKey:
        if atom.value_type is not None:
            return MatchKey(MatchKind.TERM_CLASS, self.canonical_uri(atom.value_type.uri))
        return MatchKey(MatchKind.LABEL, normalize_label(atom.value_label))

    def pair_key(self, pair: FieldValuePair) -> PairKey:
        return (self.field_key(pair.field), self.value_key(pair.value))


def load_mappings(path: str | Path) -> MappingRepository:
    """Read a mapping file: one JSON object per line, {"terms": [uri, ...]}."""
    records: list[Sequence[str]] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(f"line {line_no}: invalid JSON: {exc}") from exc
            if not isinstance(obj, dict) or "terms" not in obj:
                raise MalformedRecord(f'line {line_no}: expected an object with a "terms" key')
            terms = obj["terms"]
            if not isinstance(terms, list):
                raise MalformedRecord(f"line {line_no}: terms must be a list")
            records.append(terms)
    return MappingRepository.from_records(records)


def save_mappings(repo: MappingRepository, path: str | Path) -> None:
    """Write one {"terms": [...]} line per equivalence class, sorted."""
    with open(path, "w", encoding="utf-8") as fh:
        for rep in sorted(repo.members):
            fh.write(json.dumps({"terms": sorted(repo.members[rep])}) + "\n")
