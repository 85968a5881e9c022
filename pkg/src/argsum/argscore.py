"""Argument-alignment scoring: build the extractive argument reference for a
document, score each candidate's lexical overlap with it, and pick the argmax.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from . import marker, rouge
from .corpus import CandidatePool, CandidateSummary, Document
from .errors import DataError


class RankingMetric(enum.Enum):
    R1 = "R1"
    R2 = "R2"
    RL = "RL"


DEFAULT_METRIC = RankingMetric.R1


@dataclass(frozen=True)
class ArgReference:
    """Extractive pseudo-summary the candidates are scored against.

    ``is_fallback`` is set when the document had no argumentative sentences
    and the full text was used instead.
    """

    doc_id: str
    text: str
    is_fallback: bool


@dataclass(frozen=True)
class ScoredCandidate:
    candidate: CandidateSummary
    mu: float
    pool_index: int
    stripped_markers: int


@dataclass(frozen=True)
class RankedResult:
    """Candidates in descending mu order; ``selected`` indexes the argmax.

    Ties keep pool order (stable sort), so ``selected`` is always 0 but is
    kept explicit for serialization.
    """

    doc_id: str
    ranked: tuple[ScoredCandidate, ...]
    selected: int
    metric: RankingMetric
    used_fallback: bool

    @property
    def best(self) -> ScoredCandidate:
        return self.ranked[self.selected]


def build_arg_reference(doc: Document, separator: str = " ") -> ArgReference:
    """Concatenate the document's argumentative sentences in order.

    Falls back to the full document text (flagged) when no sentence carries
    an argument role, which keeps the score defined for documents where the
    classifier predicted nothing.
    """
    arg_sentences = doc.argumentative_sentences()
    if not arg_sentences:
        return ArgReference(doc_id=doc.doc_id, text=doc.text(separator), is_fallback=True)
    return ArgReference(
        doc_id=doc.doc_id,
        text=separator.join(s.text for s in arg_sentences),
        is_fallback=False,
    )


def _metric_score(cand_tokens: list, ref_tokens: list, metric: RankingMetric) -> float:
    if metric is RankingMetric.R1:
        return rouge.rouge_n(cand_tokens, ref_tokens, 1).f1
    if metric is RankingMetric.R2:
        return rouge.rouge_n(cand_tokens, ref_tokens, 2).f1
    return rouge.rouge_l(cand_tokens, ref_tokens).f1


def score_candidate(
    candidate_text: str,
    arg_reference: str,
    metric: RankingMetric = DEFAULT_METRIC,
    stem: bool = False,
) -> float:
    """ROUGE F1 of the chosen variant between candidate and argument reference.

    Literal marker tokens in the candidate (hallucinated vocabulary) are
    stripped before tokenization; empty candidate scores 0.
    """
    clean, _ = marker.strip_markers(candidate_text)
    return _metric_score(
        rouge.tokenize(clean, stem), rouge.tokenize(arg_reference, stem), metric
    )


def rank_pool(
    pool: CandidatePool,
    doc: Document,
    metric: RankingMetric = DEFAULT_METRIC,
    stem: bool = False,
) -> RankedResult:
    """Score every pool candidate against one shared argument reference and
    sort descending (stable on pool order).

    Raises:
        DataError: empty pool, or pool/document id mismatch.
    """
    if not pool.candidates:
        raise DataError(f"empty candidate pool for document {pool.doc_id!r}")
    if pool.doc_id != doc.doc_id:
        raise DataError(f"pool {pool.doc_id!r} ranked against document {doc.doc_id!r}")

    reference = build_arg_reference(doc)
    ref_tokens = rouge.tokenize(reference.text, stem)
    scored = []
    for i, cand in enumerate(pool.candidates):
        clean, n_stripped = marker.strip_markers(cand.text)
        mu = _metric_score(rouge.tokenize(clean, stem), ref_tokens, metric)
        scored.append(
            ScoredCandidate(candidate=cand, mu=mu, pool_index=i, stripped_markers=n_stripped)
        )
    scored.sort(key=lambda s: -s.mu)  # sort() is stable: ties keep pool order
    return RankedResult(
        doc_id=doc.doc_id,
        ranked=tuple(scored),
        selected=0,
        metric=metric,
        used_fallback=reference.is_fallback,
    )
