"""Argument-aware reranking of abstractive summary candidates for long legal
opinions: marker-annotated training inputs, multi-format candidate pooling,
argument-overlap scoring and argmax selection, plus ROUGE evaluation."""

__version__ = "0.1.0"

from .argscore import (
    ArgReference,
    RankedResult,
    RankingMetric,
    ScoredCandidate,
    build_arg_reference,
    rank_pool,
    score_candidate,
)
from .corpus import (
    ArgRole,
    CandidatePool,
    CandidateSummary,
    Document,
    FoldSpec,
    InputFormat,
    ReferenceSummary,
    RoleSource,
    Sentence,
    corpus_stats,
    load_corpus,
)
from .errors import CorpusError, DataError, MarkerError
from .marker import MarkerScheme, parse, render, strip_markers
from .pipeline import (
    PoolPolicy,
    SystemReport,
    assemble_pool,
    compare_systems,
    evaluate,
    run_reranking,
)
