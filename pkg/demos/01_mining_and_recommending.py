"""Mine rules from a tiny corpus and ask for value suggestions.

Walks the whole pipeline on six records of one template: frequent itemsets,
association rules, rule selection for a target field, context matching, and
the final ranked recommendation.
"""

from fieldsuggest import (
    Context,
    FieldSlot,
    FieldValuePair,
    InstanceRepository,
    MiningParams,
    TemplateInstance,
    ValueAtom,
    build_index,
    context_matching_score,
    mine_rules,
    recommend,
    select_rules,
)


def record(**values):
    pairs = tuple(
        FieldValuePair(FieldSlot(field), ValueAtom(value)) for field, value in values.items()
    )
    return TemplateInstance("experiment", pairs)


repo = InstanceRepository(
    (
        record(sex="male", tissue="brain", disease="meningitis"),
        record(sex="female", tissue="brain", disease="meningitis"),
        record(tissue="liver", disease="cirrhosis"),
        record(sex="male", tissue="liver", disease="liver cancer"),
        record(tissue="liver", disease="liver cancer"),
        record(sex="male", tissue="brain", disease="meningitis"),
    )
)

# Mine with a support floor of one record and a confidence floor of 0.6.
rules = mine_rules(repo, "experiment", MiningParams(min_support=1, min_confidence=0.6))
print(f"{len(rules)} rules mined:")
for rule in rules:
    antecedent = " AND ".join(
        f"{p.field.field_label}={p.value.value_label}" for p in rule.antecedent
    )
    print(
        f"  ({antecedent}) -> {rule.consequent.field.field_label}="
        f"{rule.consequent.value.value_label}   support={rule.support} "
        f"confidence={float(rule.confidence):.2f}"
    )

# The user filled in disease=meningitis and now focuses the tissue field.
index = build_index(rules)
context = Context((FieldValuePair(FieldSlot("disease"), ValueAtom("meningitis")),))
target = FieldSlot("tissue")

print("\nrules whose consequent is the tissue field, with context match:")
for rule in select_rules(index, target):
    jaccard = context_matching_score(rule, context)
    print(
        f"  value={rule.consequent.value.value_label:6} jaccard={float(jaccard):.2f} "
        f"confidence={float(rule.confidence):.2f}"
    )

print("\nranked suggestions for tissue given disease=meningitis:")
for rec in recommend(context, target, index):
    print(f"  {rec.rank}. {rec.value.value_label}  score={float(rec.score):.2f}")

# With nothing entered yet, scores fall back to support / training size.
print("\nranked suggestions for tissue with an empty form:")
for rec in recommend(Context(), target, index, train_counts={"experiment": len(repo)}):
    print(f"  {rec.rank}. {rec.value.value_label}  score={float(rec.score):.2f}")
