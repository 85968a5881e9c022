"""Pool assembly, per-document reranking, evaluation and system comparison.

Documents are independent work units; reranking may fan out over a thread
pool and results are keyed and sorted by doc_id before reporting, so job
count never changes output. The only randomness in the whole pipeline is the
bootstrap resampling in :func:`compare_systems`, driven by a single seed.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import rouge
from .argscore import RankedResult, RankingMetric, rank_pool
from .corpus import (
    FORMAT_ORDER,
    CandidatePool,
    CandidateSummary,
    Document,
    FoldSpec,
    InputFormat,
)
from .errors import DataError

SIGNIFICANCE_METHOD = "paired bootstrap over documents (one-sided, B better than A)"

EVAL_METRICS = (RankingMetric.R1, RankingMetric.R2, RankingMetric.RL)

_METRIC_LABEL = {RankingMetric.R1: "R-1", RankingMetric.R2: "R-2", RankingMetric.RL: "R-L"}


@dataclass(frozen=True)
class PoolPolicy:
    """Which (input format, beam width) cells enter a candidate pool."""

    formats: tuple[InputFormat, ...] = FORMAT_ORDER
    beam_widths: tuple[int, ...] = (1, 2, 3, 4, 5)
    dedupe: bool = False
    # Keep every decoded beam for a (format, width) cell instead of only the
    # top one; off by default to mirror one-summary-per-run pooling.
    all_beams: bool = False

    def __post_init__(self):
        if not self.formats:
            raise ValueError("PoolPolicy.formats must be non-empty")
        if not self.beam_widths:
            raise ValueError("PoolPolicy.beam_widths must be non-empty")
        if any(w < 1 for w in self.beam_widths):
            raise ValueError("beam widths must be >= 1")


def _normalize_ws(text: str) -> str:
    return " ".join(text.split())


def assemble_pool(
    candidates: Iterable[CandidateSummary],
    doc_id: str,
    policy: PoolPolicy,
) -> CandidatePool:
    """Build the ranking pool for one document.

    Keeps one top-decoded summary per (format, beam width) cell of the policy
    (all of them with ``policy.all_beams``), ordered raw < binary <
    finegrained then beams ascending. With ``policy.dedupe``, a candidate
    whose whitespace-normalized text equals an earlier one is dropped.

    Raises:
        DataError: no candidate matches the document and policy.
    """
    mine = [c for c in candidates if c.doc_id == doc_id]
    formats = [f for f in FORMAT_ORDER if f in policy.formats]
    widths = sorted(set(policy.beam_widths))

    picked: list[CandidateSummary] = []
    for fmt, width in product(formats, widths):
        cell = [c for c in mine if c.input_format is fmt and c.beam_width == width]
        if not cell:
            continue
        picked.extend(cell if policy.all_beams else cell[:1])

    if policy.dedupe:
        seen: set[str] = set()
        kept = []
        for cand in picked:
            key = _normalize_ws(cand.text)
            if key in seen:
                continue
            seen.add(key)
            kept.append(cand)
        picked = kept

    if not picked:
        raise DataError(f"no candidates match document {doc_id!r} under the pool policy")
    return CandidatePool(doc_id=doc_id, candidates=tuple(picked))


def run_reranking(
    docs: Sequence[Document],
    candidates: Sequence[CandidateSummary],
    policy: PoolPolicy,
    metric: RankingMetric = RankingMetric.R1,
    stem: bool = False,
    jobs: int = 1,
) -> list[RankedResult]:
    """Rerank every document's pool; results sorted by doc_id.

    Raises:
        DataError: propagated pool/ranking errors (for example a document
            with no candidates).
    """
    ordered = sorted(docs, key=lambda d: d.doc_id)

    def one(doc: Document) -> RankedResult:
        pool = assemble_pool(candidates, doc.doc_id, policy)
        return rank_pool(pool, doc, metric, stem)

    if jobs <= 1:
        return [one(doc) for doc in ordered]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(one, ordered))


@dataclass(frozen=True)
class DocScores:
    doc_id: str
    selected: str
    scores: dict[str, float]  # metric label -> value in [0, 1]


@dataclass(frozen=True)
class SystemReport:
    """Per-document scores plus fold and corpus aggregates for one system."""

    system_id: str
    metrics: tuple[str, ...]
    per_doc: tuple[DocScores, ...]
    fold_means: dict[int, dict[str, float]] | None
    corpus_means: dict[str, float]

    @property
    def n_documents(self) -> int:
        return len(self.per_doc)

    def to_json_dict(self) -> dict:
        # Header aggregates are rendered x100 / 2 decimals (table style);
        # per-doc scores keep full precision for downstream comparison.
        out: dict = {
            "system_id": self.system_id,
            "significance_method": SIGNIFICANCE_METHOD,
            "n_documents": self.n_documents,
            "metrics": list(self.metrics),
            "corpus": {m: render_score(v) for m, v in self.corpus_means.items()},
        }
        if self.fold_means is not None:
            out["fold_means"] = [
                {"fold_id": fold_id, **{m: render_score(v) for m, v in means.items()}}
                for fold_id, means in sorted(self.fold_means.items())
            ]
        out["per_doc"] = [
            {"doc_id": d.doc_id, "selected": d.selected, "scores": d.scores}
            for d in self.per_doc
        ]
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "SystemReport":
        metrics = tuple(data["metrics"])
        per_doc = tuple(
            DocScores(doc_id=d["doc_id"], selected=d.get("selected", ""), scores=d["scores"])
            for d in data["per_doc"]
        )
        fold_means = None
        if "fold_means" in data:
            fold_means = {
                row["fold_id"]: {m: row[m] / 100.0 for m in metrics}
                for row in data["fold_means"]
            }
        corpus = {m: data["corpus"][m] / 100.0 for m in metrics}
        return cls(
            system_id=data["system_id"],
            metrics=metrics,
            per_doc=per_doc,
            fold_means=fold_means,
            corpus_means=corpus,
        )


def render_score(value: float) -> float:
    """0-1 internal score -> 0-100 two-decimal report value."""
    return round(100.0 * value, 2)


def render_table(report: SystemReport) -> str:
    """Aligned-column text table: one row per fold plus the corpus mean."""
    headers = ["system"] + [_metric_label(m) for m in report.metrics]
    rows = []
    if report.fold_means:
        for fold_id, means in sorted(report.fold_means.items()):
            rows.append(
                [f"{report.system_id}/fold{fold_id}"]
                + [f"{render_score(means[m]):.2f}" for m in report.metrics]
            )
    rows.append(
        [report.system_id]
        + [f"{render_score(report.corpus_means[m]):.2f}" for m in report.metrics]
    )
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers))]
    for row in rows:
        lines.append("  ".join(row[i].rjust(widths[i]) if i else row[i].ljust(widths[i])
                               for i in range(len(row))))
    return "\n".join(lines) + "\n"


def _metric_label(name: str) -> str:
    try:
        return _METRIC_LABEL[RankingMetric(name)]
    except ValueError:
        return name


def _doc_metric_scores(
    selected: str,
    reference: str,
    metrics: Sequence[RankingMetric],
    stem: bool,
    extra_scorers: Mapping[str, Callable[[str, str], float]] | None,
) -> dict[str, float]:
    cand = rouge.tokenize(selected, stem)
    ref = rouge.tokenize(reference, stem)
    scores: dict[str, float] = {}
    for metric in metrics:
        if metric is RankingMetric.R1:
            scores[metric.value] = rouge.rouge_n(cand, ref, 1).f1
        elif metric is RankingMetric.R2:
            scores[metric.value] = rouge.rouge_n(cand, ref, 2).f1
        else:
            scores[metric.value] = rouge.rouge_l(cand, ref).f1
    for name, scorer in (extra_scorers or {}).items():
        scores[name] = float(scorer(selected, reference))
    return scores


def evaluate(
    selected: Mapping[str, str],
    references: Mapping[str, str],
    metrics: Sequence[RankingMetric] = EVAL_METRICS,
    folds: Sequence[FoldSpec] | None = None,
    extra_scorers: Mapping[str, Callable[[str, str], float]] | None = None,
    stem: bool = False,
    system_id: str = "system",
) -> SystemReport:
    """Score selected summaries against references and aggregate.

    With folds, every evaluated doc_id must sit in exactly one fold's test
    split and the corpus mean is the unweighted mean of fold means; without
    folds it is the mean over documents.

    Raises:
        DataError: missing reference, or fold coverage problems.
    """
    if not selected:
        raise DataError("no selected summaries to evaluate")
    doc_ids = sorted(selected)
    for doc_id in doc_ids:
        if doc_id not in references:
            raise DataError(f"no reference summary for document {doc_id!r}")

    metric_names = tuple(m.value for m in metrics) + tuple(extra_scorers or ())
    per_doc = tuple(
        DocScores(
            doc_id=doc_id,
            selected=selected[doc_id],
            scores=_doc_metric_scores(
                selected[doc_id], references[doc_id], metrics, stem, extra_scorers
            ),
        )
        for doc_id in doc_ids
    )

    fold_means: dict[int, dict[str, float]] | None = None
    if folds is not None:
        assignment: dict[str, int] = {}
        for fold in folds:
            for doc_id in fold.test:
                if doc_id in assignment:
                    raise DataError(
                        f"doc_id {doc_id!r} is in the test split of folds "
                        f"{assignment[doc_id]} and {fold.fold_id}"
                    )
                assignment[doc_id] = fold.fold_id
        missing = [d for d in doc_ids if d not in assignment]
        if missing:
            raise DataError(f"documents not in any fold's test split: {missing[:5]}")
        fold_means = {}
        for fold in folds:
            members = [d for d in per_doc if assignment[d.doc_id] == fold.fold_id]
            if not members:
                continue
            fold_means[fold.fold_id] = {
                m: sum(d.scores[m] for d in members) / len(members) for m in metric_names
            }
        groups = list(fold_means.values())
        corpus = {m: sum(g[m] for g in groups) / len(groups) for m in metric_names}
    else:
        corpus = {
            m: sum(d.scores[m] for d in per_doc) / len(per_doc) for m in metric_names
        }

    return SystemReport(
        system_id=system_id,
        metrics=metric_names,
        per_doc=per_doc,
        fold_means=fold_means,
        corpus_means=corpus,
    )


@dataclass(frozen=True)
class ComparisonResult:
    system_a: str
    system_b: str
    trials: int
    seed: int
    n_documents: int
    p_values: dict[str, float]
    mean_delta: dict[str, float]  # x100 scale, b minus a

    def to_json_dict(self) -> dict:
        return {
            "method": SIGNIFICANCE_METHOD,
            "system_a": self.system_a,
            "system_b": self.system_b,
            "trials": self.trials,
            "seed": self.seed,
            "n_documents": self.n_documents,
            "p_values": self.p_values,
            "mean_delta": self.mean_delta,
        }


def compare_systems(
    report_a: SystemReport,
    report_b: SystemReport,
    trials: int = 10_000,
    seed: int = 0,
) -> ComparisonResult:
    """Paired bootstrap over documents, one p-value per shared metric.

    Each trial resamples doc indices with replacement (the same indices for
    both systems and every metric) and compares metric means; p is the
    fraction of trials where B's mean does not exceed A's.

    Raises:
        ValueError: trials < 1000.
        DataError: the two reports cover different document sets.
    """
    if trials < 1000:
        raise ValueError(f"trials must be >= 1000, got {trials}")
    ids_a = [d.doc_id for d in report_a.per_doc]
    ids_b = [d.doc_id for d in report_b.per_doc]
    if sorted(ids_a) != sorted(ids_b):
        raise DataError("reports cover different document sets")
    metrics = [m for m in report_a.metrics if m in report_b.metrics]

    a_by_id = {d.doc_id: d.scores for d in report_a.per_doc}
    b_by_id = {d.doc_id: d.scores for d in report_b.per_doc}
    order = sorted(ids_a)
    n = len(order)

    rng = np.random.default_rng(seed)
    idx = rng.integers(0, n, size=(trials, n))

    p_values: dict[str, float] = {}
    mean_delta: dict[str, float] = {}
    for m in metrics:
        a = np.array([a_by_id[doc_id][m] for doc_id in order])
        b = np.array([b_by_id[doc_id][m] for doc_id in order])
        a_means = a[idx].mean(axis=1)
        b_means = b[idx].mean(axis=1)
        p_values[m] = float(np.mean(b_means <= a_means))
        mean_delta[m] = render_score(float(b.mean() - a.mean()))

    return ComparisonResult(
        system_a=report_a.system_id,
        system_b=report_b.system_id,
        trials=trials,
        seed=seed,
        n_documents=n,
        p_values=p_values,
        mean_delta=mean_delta,
    )
