"""Reuse rules across structurally different templates via term mappings.

Records were collected with an "experiment" template (fields: source cell,
source tissue). A user is now filling an "assay" template whose fields have
different names and different ontology annotations. Equivalence classes of
term URIs align the two, so the assay form still gets suggestions.
"""

from fieldsuggest import (
    Context,
    FieldSlot,
    FieldValuePair,
    InstanceRepository,
    MappingRepository,
    MiningParams,
    TemplateInstance,
    TermRef,
    ValueAtom,
    build_index,
    mine_rules,
    recommend,
)

EFO_CELL_TYPE = "http://www.ebi.ac.uk/efo/EFO_0000324"
OBO_CELL = "http://purl.obolibrary.org/obo/CL_0000000"
NCIT_TISSUE = "http://ncicb.nci.nih.gov/xml/owl/EVS/Thesaurus.owl#C12801"
OBO_TISSUE = "http://purl.obolibrary.org/obo/UBERON_0000479"
OBO_ALPHA_CELL = "http://purl.obolibrary.org/obo/CL_0000171"
BTO_ALPHA_CELL = "http://purl.obolibrary.org/obo/BTO_0000990"
OBO_PANCREAS = "http://purl.obolibrary.org/obo/UBERON_0001264"
BTO_PANCREAS = "http://purl.obolibrary.org/obo/BTO_0000998"


def annotated(field, field_uri, value, value_uri):
    return FieldValuePair(
        FieldSlot(field, TermRef(field_uri)), ValueAtom(value, TermRef(value_uri))
    )


alpha = annotated("source cell", OBO_CELL, "pancreatic A cell", OBO_ALPHA_CELL)
pancreas = annotated("source tissue", OBO_TISSUE, "pancreas", OBO_PANCREAS)
repo = InstanceRepository(
    tuple(TemplateInstance("experiment", (alpha, pancreas)) for _ in range(3))
)

# Each record says: same field (by URI class), same value (by URI class).
mappings = MappingRepository.from_records(
    [
        [EFO_CELL_TYPE, OBO_CELL],        # cell type == source cell
        [NCIT_TISSUE, OBO_TISSUE],        # tissue == source tissue
        [OBO_ALPHA_CELL, BTO_ALPHA_CELL], # pancreatic alpha cell synonyms
        [OBO_PANCREAS, BTO_PANCREAS],     # pancreas synonyms
    ]
)

rules = mine_rules(repo, "experiment", MiningParams(min_support=1, min_confidence=0.5), mappings)
index = build_index(rules, mappings)

# The assay form uses different labels AND different URIs for everything.
assay_context = Context(
    (annotated("cell type", EFO_CELL_TYPE, "pancreatic alpha cell", BTO_ALPHA_CELL),)
)
assay_target = FieldSlot("tissue", TermRef(NCIT_TISSUE))

print("suggestions for the assay form's tissue field:")
for rec in recommend(assay_context, assay_target, index, mappings):
    uri = rec.value.value_type.uri if rec.value.value_type else "-"
    print(f"  {rec.rank}. {rec.value.value_label}  score={float(rec.score):.2f}  ({uri})")

# Without the mappings nothing lines up and there are no suggestions.
bare = MappingRepository.empty()
bare_index = build_index(rules, bare)
print("\nsame query with an empty mapping repository:")
print(" ", recommend(assay_context, assay_target, bare_index, bare) or "no suggestions")
