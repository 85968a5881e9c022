"""FastAPI service wrapping the core library.

Stateless: every request carries its own documents/candidates, so many
clients can share one instance. Domain validation failures map to HTTP 400
with the validator's message.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, augment, corpus, marker, pipeline
from ..argscore import RankingMetric
from ..errors import DataError
from . import schemas

_SCHEMES = {
    "raw": marker.MarkerScheme.RAW,
    "binary": marker.MarkerScheme.BINARY,
    "finegrained": marker.MarkerScheme.FINEGRAINED,
}


def _documents(models: list[schemas.DocumentIn]) -> list[corpus.Document]:
    docs = []
    seen = set()
    for i, model in enumerate(models):
        if model.doc_id in seen:
            raise DataError(f"duplicate doc_id {model.doc_id!r}")
        seen.add(model.doc_id)
        docs.append(corpus.document_from_record(model.model_dump(), line_no=i + 1))
    return docs


def _candidates(models: list[schemas.CandidateIn], max_beam_width: int) -> list[corpus.CandidateSummary]:
    return [
        corpus.candidate_from_record(m.model_dump(), line_no=i + 1, max_beam_width=max_beam_width)
        for i, m in enumerate(models)
    ]


def _folds(models: list[schemas.FoldIn]) -> list[corpus.FoldSpec]:
    return [corpus.fold_from_record(m.model_dump(), line_no=i + 1) for i, m in enumerate(models)]


def create_app() -> FastAPI:
    app = FastAPI(
        title="argsum",
        description="Argument-aware summary candidate reranking and evaluation",
        version=__version__,
    )

    @app.exception_handler(DataError)
    async def data_error_handler(request: Request, exc: DataError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/mark", response_model=schemas.MarkResponse)
    def mark(req: schemas.MarkRequest):
        scheme = _SCHEMES[req.scheme]
        docs = _documents(req.documents)
        return schemas.MarkResponse(
            documents=[
                schemas.MarkedDocument(
                    doc_id=doc.doc_id,
                    input_format=req.scheme,
                    input=marker.render(doc, scheme, req.separator),
                )
                for doc in docs
            ]
        )

    @app.post("/augment", response_model=schemas.AugmentResponse)
    def augment_endpoint(req: schemas.AugmentRequest):
        docs = _documents(req.documents)
        refs = {r.doc_id: corpus.ReferenceSummary(r.doc_id, r.text) for r in req.references}
        fold = corpus.fold_from_record(req.fold.model_dump()) if req.fold else None

        def examples(doc_ids) -> list[schemas.TrainingExampleOut]:
            out = []
            for doc in docs:
                if doc_ids is not None and doc.doc_id not in doc_ids:
                    continue
                if doc.doc_id not in refs:
                    raise DataError(f"document {doc.doc_id!r} has no reference summary")
                for ex in augment.augment_pair(doc, refs[doc.doc_id], req.separator):
                    out.append(schemas.TrainingExampleOut(**ex.to_record()))
            return out

        if fold is None:
            return schemas.AugmentResponse(train=examples(None), validation=[])
        for split in ("train", "validation"):
            known = {d.doc_id for d in docs}
            for doc_id in getattr(fold, split):
                if doc_id not in known:
                    raise DataError(f"fold {fold.fold_id} names unknown doc_id {doc_id!r}")
        return schemas.AugmentResponse(
            train=examples(set(fold.train)), validation=examples(set(fold.validation))
        )

    @app.post("/rank", response_model=schemas.RankResponse)
    def rank(req: schemas.RankRequest):
        policy = pipeline.PoolPolicy(
            formats=tuple(corpus.InputFormat(f) for f in req.policy.formats),
            beam_widths=tuple(req.policy.beam_widths),
            dedupe=req.policy.dedupe,
            all_beams=req.policy.all_beams,
        )
        max_width = max(corpus.DEFAULT_MAX_BEAM_WIDTH, *policy.beam_widths)
        docs = _documents(req.documents)
        cands = _candidates(req.candidates, max_width)
        results = pipeline.run_reranking(
            docs, cands, policy, RankingMetric(req.metric), req.stem, jobs=req.jobs
        )
        return schemas.RankResponse(
            results=[
                schemas.RankedResultOut(
                    doc_id=r.doc_id,
                    selected=r.best.candidate.text,
                    mu=r.best.mu,
                    metric=r.metric.value,
                    used_fallback=r.used_fallback,
                    candidates=[
                        schemas.ScoredCandidateOut(
                            rank=rank_i,
                            pool_index=s.pool_index,
                            mu=s.mu,
                            text=s.candidate.text,
                            input_format=s.candidate.input_format.value,
                            beam_width=s.candidate.beam_width,
                            generator_id=s.candidate.generator_id,
                            stripped_markers=s.stripped_markers,
                        )
                        for rank_i, s in enumerate(r.ranked)
                    ],
                )
                for r in results
            ]
        )

    @app.post("/eval", response_model=schemas.EvalResponse)
    def eval_endpoint(req: schemas.EvalRequest):
        selections = {}
        for s in req.selections:
            if s.doc_id in selections:
                raise DataError(f"duplicate doc_id {s.doc_id!r} in selections")
            selections[s.doc_id] = s.selected
        references = {r.doc_id: r.text for r in req.references}
        folds = _folds(req.folds) if req.folds is not None else None
        report = pipeline.evaluate(
            selections, references, folds=folds, stem=req.stem, system_id=req.system_id
        )
        return schemas.EvalResponse(
            report=report.to_json_dict(), table=pipeline.render_table(report)
        )

    @app.post("/compare", response_model=schemas.CompareResponse)
    def compare(req: schemas.CompareRequest):
        try:
            report_a = pipeline.SystemReport.from_json_dict(req.report_a)
            report_b = pipeline.SystemReport.from_json_dict(req.report_b)
        except (KeyError, TypeError) as exc:
            raise DataError(f"malformed report payload: {exc}")
        result = pipeline.compare_systems(report_a, report_b, trials=req.trials, seed=req.seed)
        return schemas.CompareResponse(result=result.to_json_dict())

    @app.post("/stats", response_model=schemas.StatsResponse)
    def stats(req: schemas.StatsRequest):
        stats = corpus.corpus_stats(_documents(req.documents))
        return schemas.StatsResponse(
            documents=stats.documents,
            mean_words=stats.mean_words,
            max_words=stats.max_words,
        )

    return app
