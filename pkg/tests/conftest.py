"""Shared fixtures: the six-instance worked example and its 17 rules."""

from __future__ import annotations

from fractions import Fraction

import pytest

from fieldsuggest import (
    AssociationRule,
    FieldSlot,
    FieldValuePair,
    InstanceRepository,
    MappingRepository,
    TemplateInstance,
    TermRef,
    ValueAtom,
)

EXPERIMENT = "experiment"


def pair(field: str, value: str, field_uri: str | None = None, value_uri: str | None = None) -> FieldValuePair:
    return FieldValuePair(
        field=FieldSlot(field, TermRef(field_uri) if field_uri else None),
        value=ValueAtom(value, TermRef(value_uri) if value_uri else None),
    )


def instance(template_id: str, *pairs: FieldValuePair) -> TemplateInstance:
    return TemplateInstance(template_id, tuple(pairs))


@pytest.fixture(scope="session")
def six_instance_repo() -> InstanceRepository:
    """Six instances of one template: the canonical worked example."""
    return InstanceRepository(
        (
            instance(EXPERIMENT, pair("sex", "male"), pair("tissue", "brain"), pair("disease", "meningitis")),
            instance(EXPERIMENT, pair("sex", "female"), pair("tissue", "brain"), pair("disease", "meningitis")),
            instance(EXPERIMENT, pair("tissue", "liver"), pair("disease", "cirrhosis")),
            instance(EXPERIMENT, pair("sex", "male"), pair("tissue", "liver"), pair("disease", "liver cancer")),
            instance(EXPERIMENT, pair("tissue", "liver"), pair("disease", "liver cancer")),
            instance(EXPERIMENT, pair("sex", "male"), pair("tissue", "brain"), pair("disease", "meningitis")),
        )
    )


def _rule(antecedent: list[tuple[str, str]], consequent: tuple[str, str], support: int, confidence: Fraction) -> AssociationRule:
    return AssociationRule(
        antecedent=tuple(pair(f, v) for f, v in sorted(antecedent)),
        consequent=pair(*consequent),
        support=support,
        confidence=confidence,
        template_id=EXPERIMENT,
    )


@pytest.fixture(scope="session")
def reference_rules() -> dict[str, AssociationRule]:
    """The 17 distinct rules extractable from the six instances at
    min support 1 / min confidence 0.6, keyed r1..r17.

    Mining also finds one more rule meeting these thresholds; the reference
    set deliberately stops at the classic seventeen (see the mining tests).
    """
    one = Fraction(1)
    two_thirds = Fraction(2, 3)
    return {
        "r1": _rule([("disease", "meningitis")], ("tissue", "brain"), 3, one),
        "r2": _rule([("tissue", "brain")], ("disease", "meningitis"), 3, one),
        "r3": _rule([("disease", "liver cancer")], ("tissue", "liver"), 2, one),
        "r4": _rule([("sex", "male"), ("disease", "meningitis")], ("tissue", "brain"), 2, one),
        "r5": _rule([("sex", "male"), ("tissue", "brain")], ("disease", "meningitis"), 2, one),
        "r6": _rule([("sex", "female")], ("tissue", "brain"), 1, one),
        "r7": _rule([("sex", "female")], ("disease", "meningitis"), 1, one),
        "r8": _rule([("disease", "cirrhosis")], ("tissue", "liver"), 1, one),
        "r9": _rule([("sex", "male"), ("disease", "liver cancer")], ("tissue", "liver"), 1, one),
        "r10": _rule([("sex", "male"), ("tissue", "liver")], ("disease", "liver cancer"), 1, one),
        "r11": _rule([("sex", "female"), ("disease", "meningitis")], ("tissue", "brain"), 1, one),
        "r12": _rule([("sex", "female"), ("tissue", "brain")], ("disease", "meningitis"), 1, one),
        "r13": _rule([("tissue", "brain")], ("sex", "male"), 2, two_thirds),
        "r14": _rule([("sex", "male")], ("tissue", "brain"), 2, two_thirds),
        "r15": _rule([("disease", "meningitis")], ("sex", "male"), 2, two_thirds),
        "r16": _rule([("sex", "male")], ("disease", "meningitis"), 2, two_thirds),
        "r17": _rule([("tissue", "liver")], ("disease", "liver cancer"), 2, two_thirds),
    }


# Cross-template scenario: an assay form is filled using rules mined from
# experiment records, aligned by four term equivalences.
EFO_CELL_TYPE = "http://www.ebi.ac.uk/efo/EFO_0000324"
OBO_CELL = "http://purl.obolibrary.org/obo/CL_0000000"
NCIT_TISSUE = "http://ncicb.nci.nih.gov/xml/owl/EVS/Thesaurus.owl#C12801"
OBO_TISSUE = "http://purl.obolibrary.org/obo/UBERON_0000479"
OBO_ALPHA_CELL = "http://purl.obolibrary.org/obo/CL_0000171"
BTO_ALPHA_CELL = "http://purl.obolibrary.org/obo/BTO_0000990"
OBO_PANCREAS = "http://purl.obolibrary.org/obo/UBERON_0001264"
BTO_PANCREAS = "http://purl.obolibrary.org/obo/BTO_0000998"

CROSS_TEMPLATE_MAPPING_RECORDS = [
    [EFO_CELL_TYPE, OBO_CELL],
    [NCIT_TISSUE, OBO_TISSUE],
    [OBO_ALPHA_CELL, BTO_ALPHA_CELL],
    [OBO_PANCREAS, BTO_PANCREAS],
]


@pytest.fixture(scope="session")
def cross_template_mappings() -> MappingRepository:
    return MappingRepository.from_records(CROSS_TEMPLATE_MAPPING_RECORDS)


@pytest.fixture(scope="session")
def experiment_cell_repo() -> InstanceRepository:
    """Experiment records: pancreatic A cells come from pancreas tissue."""
    alpha = pair("source cell", "pancreatic A cell", OBO_CELL, OBO_ALPHA_CELL)
    pancreas = pair("source tissue", "pancreas", OBO_TISSUE, OBO_PANCREAS)
    beta = pair("source cell", "hepatocyte", OBO_CELL, "http://purl.obolibrary.org/obo/CL_0000182")
    liver = pair("source tissue", "liver", OBO_TISSUE, "http://purl.obolibrary.org/obo/UBERON_0002107")
    return InstanceRepository(
        (
            instance(EXPERIMENT, alpha, pancreas),
            instance(EXPERIMENT, alpha, pancreas),
            instance(EXPERIMENT, alpha, pancreas),
            instance(EXPERIMENT, beta, liver),
            instance(EXPERIMENT, beta, liver),
        )
    )
