"""Seeded synthetic corpora with planted field-to-field dependencies.

Each instance draws a hidden group; every field's value is a deterministic
function of the group (its index modulo a per-field base) with a small
noise probability. Fields with small bases are individually ambiguous, so
knowing more of them narrows the group down further: recommendation quality
should rise with context size, which is the shape the trend checks assert.
"""

from __future__ import annotations

import random
from typing import Sequence

from .model import (
    FieldSlot,
    FieldValuePair,
    InstanceRepository,
    TemplateInstance,
    TermRef,
    ValueAtom,
)

FIELD_NAMES = ("sex", "tissue", "disease", "cell type", "ethnicity", "cell line")
_BASES = (2, 3, 4, 6)


def _field_names(n_fields: int) -> list[str]:
    names = list(FIELD_NAMES[:n_fields])
    names += [f"field {i}" for i in range(len(names), n_fields)]
    return names


def synthetic_corpus(
    n_instances: int,
    seed: int,
    n_fields: int = 5,
    n_groups: int = 12,
    noise: float = 0.1,
    noise_pool: int = 20,
    template_id: str = "synthetic",
    annotated: bool = False,
) -> InstanceRepository:
    """Generate a repository of fully populated instances.

    Field i takes value ``v(group % base_i)``; the last field's base is
    ``n_groups`` so it identifies the group outright. With probability
    ``noise`` a field instead takes one of ``noise_pool`` filler values.
    """
    rng = random.Random(seed)
    names = _field_names(n_fields)
    bases = [_BASES[i % len(_BASES)] for i in range(n_fields - 1)] + [n_groups]

    def slot(name: str) -> FieldSlot:
        term = TermRef(f"urn:syn:field:{name.replace(' ', '-')}") if annotated else None
        return FieldSlot(field_label=name, field_type=term)

    def atom(name: str, label: str) -> ValueAtom:
        term = (
            TermRef(f"urn:syn:value:{name.replace(' ', '-')}:{label.replace(' ', '-')}")
            if annotated
            else None
        )
        return ValueAtom(value_label=label, value_type=term)

    slots = [slot(name) for name in names]
    instances = []
    for _ in range(n_instances):
        group = rng.randrange(n_groups)
        pairs = []
        for i, name in enumerate(names):
            if rng.random() < noise:
                label = f"{name} x{rng.randrange(noise_pool)}"
            else:
                label = f"{name} v{group % bases[i]}"
            pairs.append(FieldValuePair(field=slots[i], value=atom(name, label)))
        instances.append(TemplateInstance(template_id, tuple(pairs)))
    return InstanceRepository(tuple(instances))


def relabeled_variant(
    repo: InstanceRepository,
    new_template_id: str,
    label_suffix: str = "(alt)",
    uri_suffix: str = "alt",
) -> tuple[InstanceRepository, list[list[str]]]:
    """Structurally different copy of an annotated corpus, plus the mapping
    records that align it with the original.

    Every field label is renamed and every term URI replaced by a distinct
    one; the returned records pair each original URI with its replacement.
    """
    uri_map: dict[str, str] = {}

    def swap(term: TermRef | None) -> TermRef | None:
        if term is None:
            return None
        if term.uri not in uri_map:
            uri_map[term.uri] = f"{term.uri}:{uri_suffix}"
        return TermRef(uri_map[term.uri])

    instances = []
    for inst in repo.instances:
        pairs = tuple(
            FieldValuePair(
                field=FieldSlot(
                    field_label=f"{p.field.field_label} {label_suffix}",
                    field_type=swap(p.field.field_type),
                ),
                value=ValueAtom(
                    value_label=p.value.value_label,
                    value_type=swap(p.value.value_type),
                ),
            )
            for p in inst.pairs
        )
        instances.append(TemplateInstance(new_template_id, pairs))
    records = [[old, new] for old, new in sorted(uri_map.items())]
    return InstanceRepository(tuple(instances)), records


def field_slots(repo: InstanceRepository) -> list[FieldSlot]:
    """Distinct field slots of a repository, in first-seen order."""
    seen: dict[Sequence, FieldSlot] = {}
    for inst in repo.instances:
        for pair in inst.pairs:
            ident = (
                pair.field.field_type.uri
                if pair.field.field_type
                else pair.field.field_label,
            )
            seen.setdefault(ident, pair.field)
    return list(seen.values())
