from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fieldsuggest import (
    DuplicateField,
    FieldSlot,
    FieldValuePair,
    TemplateInstance,
    TermRef,
    ValueAtom,
    make_context,
    normalize_label,
    validate_instance,
)

from .conftest import instance, pair


def test_normalize_label_trims_and_folds():
    assert normalize_label("  Male ") == "male"


def test_normalize_label_keeps_normal_forms():
    assert normalize_label("liver cancer") == "liver cancer"


def test_normalize_label_collapses_whitespace():
    assert normalize_label("Hepatitis  B") == "hepatitis b"


@given(st.text())
def test_normalize_label_idempotent(label):
    assert normalize_label(normalize_label(label)) == normalize_label(label)


def test_term_ref_requires_scheme():
    with pytest.raises(ValueError):
        TermRef("no-scheme-here")
    with pytest.raises(ValueError):
        TermRef("   ")
    assert TermRef("  urn:x ").uri == "urn:x"


def test_field_slot_rejects_blank_label():
    with pytest.raises(ValueError):
        FieldSlot("   ")


def test_validate_keeps_clean_instance():
    inst = instance("experiment", pair("sex", "male"), pair("tissue", "brain"), pair("disease", "meningitis"))
    assert validate_instance(inst) is inst


def test_validate_drops_empty_values():
    inst = instance("experiment", pair("sex", ""))
    cleaned = validate_instance(inst)
    assert cleaned.pairs == ()
    assert cleaned.template_id == "experiment"


def test_validate_rejects_duplicate_fields():
    inst = instance("experiment", pair("sex", "male"), pair("sex", "female"))
    with pytest.raises(DuplicateField) as err:
        validate_instance(inst)
    assert err.value.field_label == "sex"


def test_validate_duplicate_detection_is_case_insensitive():
    inst = instance("experiment", pair("Sex", "male"), pair("sex", "female"))
    with pytest.raises(DuplicateField):
        validate_instance(inst)


def test_validate_annotated_fields_compared_by_uri():
    # Same label, different annotation URIs: two distinct fields.
    inst = instance(
        "experiment",
        pair("tissue", "brain", field_uri="urn:a"),
        pair("tissue", "liver", field_uri="urn:b"),
    )
    assert len(validate_instance(inst).pairs) == 2


labels = st.text(
    alphabet=st.characters(whitelist_categories=("Lu", "Ll", "Nd", "Zs")), min_size=1, max_size=12
).filter(lambda s: s.strip())


@given(st.lists(st.tuples(labels, st.text(max_size=8)), max_size=6))
def test_validate_is_idempotent(raw_pairs):
    seen = set()
    pairs = []
    for field, value in raw_pairs:
        if normalize_label(field) in seen:
            continue
        seen.add(normalize_label(field))
        pairs.append(FieldValuePair(FieldSlot(field), ValueAtom(value)))
    inst = TemplateInstance("t", tuple(pairs))
    once = validate_instance(inst)
    assert validate_instance(once) == once


def test_make_context_rejects_duplicates():
    with pytest.raises(DuplicateField):
        make_context([pair("sex", "male"), pair("sex", "female")])
    assert len(make_context([pair("sex", "male")]).pairs) == 1
