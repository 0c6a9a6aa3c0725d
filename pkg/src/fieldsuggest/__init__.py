"""Context-sensitive value recommendations mined from field-value records."""

from .engine import EngineState, StateHolder, load_engine, train, write_store
from .errors import (
    DuplicateField,
    EmptyRepository,
    FieldSuggestError,
    InvalidCount,
    MalformedRecord,
    MissingTrainCount,
    ParseError,
    TargetInContext,
    TargetMissing,
    UnknownTemplate,
)
from .evaluation import (
    EvalReport,
    MajorityBaseline,
    SplitSpec,
    baseline_majority,
    context_sweep,
    default_eval_fields,
    evaluate,
    reciprocal_rank,
    split,
)
from .ingest import IngestReport, ingest_instances, write_instances
from .mappings import (
    MappingRepository,
    MatchKey,
    MatchKind,
    load_mappings,
    save_mappings,
)
from .mining import (
    AssociationRule,
    FrequentItemsets,
    MiningParams,
    frequent_itemsets,
    generate_rules,
    mine_rules,
)
from .model import (
    Context,
    FieldSlot,
    FieldValuePair,
    InstanceRepository,
    TemplateInstance,
    TermRef,
    ValueAtom,
    make_context,
    normalize_label,
    validate_instance,
)
from .recommender import (
    Recommendation,
    RecommendOptions,
    no_context_score,
    recommend,
    recommendation_score,
)
from .ruleindex import (
    RuleIndex,
    build_index,
    context_matching_score,
    load_rules,
    save_rules,
    select_rules,
)

__all__ = [name for name in dir() if not name.startswith("_")]
