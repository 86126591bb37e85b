"""Event-knowledge graphs from parsed corpora and incremental composition.

The package mines labeled head-dependent pairs from dependency-parsed
text, weighs them into a queryable event graph, and composes structured
sentence representations that combine a plain additive vector with
role-indexed expectations activated from the graph.  Benchmark
protocols (definition ranking, typicality correlation) and additive
baselines are included for evaluation.
"""

__version__ = "0.1.0"

from .baselines import additive, smoothed_additive
from .composition import Composer, ComposerConfig, SemanticRepresentation, forward_rerank, trace
from .corpus import (
    CountTables,
    EventGroup,
    ParsedToken,
    RelationConfig,
    aggregate,
    emit_pairs,
    extract_events,
    read_conllu,
)
from .embeddings import (
    EmbeddingStore,
    OutOfVocabularyError,
    cosine,
    lexeme_key,
    load_word2vec_text,
    weighted_centroid,
)
from .evaluation import (
    AdditiveModel,
    EvalReport,
    SmoothedAdditiveModel,
    StructuredModel,
    average_precision,
    eval_dtfit,
    eval_relpron,
    load_dtfit,
    load_relpron,
    map_score,
    spearman,
)
from .graph import EventGraph, GraphConfig, GraphFormatError, lmi_alpha

__all__ = [
    "AdditiveModel",
    "Composer",
    "ComposerConfig",
    "CountTables",
    "EmbeddingStore",
    "EvalReport",
    "EventGraph",
    "EventGroup",
    "GraphConfig",
    "GraphFormatError",
    "OutOfVocabularyError",
    "ParsedToken",
    "RelationConfig",
    "SemanticRepresentation",
    "SmoothedAdditiveModel",
    "StructuredModel",
    "additive",
    "aggregate",
    "average_precision",
    "cosine",
    "emit_pairs",
    "eval_dtfit",
    "eval_relpron",
    "extract_events",
    "forward_rerank",
    "lexeme_key",
    "lmi_alpha",
    "load_dtfit",
    "load_relpron",
    "load_word2vec_text",
    "map_score",
    "read_conllu",
    "smoothed_additive",
    "spearman",
    "trace",
    "weighted_centroid",
]
