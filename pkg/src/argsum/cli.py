"""Command-line entry point.

Subcommands mirror the pipeline stages: ``mark`` renders marker-annotated
inputs, ``augment`` exports the three-format training set, ``rank`` selects
the best candidate per document, ``eval`` scores selections against
references, ``compare`` runs the paired bootstrap between two reports,
``stats`` summarizes a document corpus and ``serve`` starts the HTTP service.

Exit codes: 0 ok, 1 usage, 2 data error, 3 I/O error. All file outputs are
written atomically (temp file + rename).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import augment as augment_mod
from . import corpus, marker, pipeline
from .config import RunConfig, resolve_config
from .errors import DataError
from .ioutil import write_jsonl_atomic, write_text_atomic

log = logging.getLogger("argsum")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3

_SCHEMES = {
    "raw": marker.MarkerScheme.RAW,
    "binary": marker.MarkerScheme.BINARY,
    "finegrained": marker.MarkerScheme.FINEGRAINED,
}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="TOML config file")
    parser.add_argument("--seed", type=int, help="seed for all randomness (bootstrap)")
    parser.add_argument("--jobs", type=int, help="parallel document workers (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="argsum", description=__doc__.split("\n\n")[1])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("mark", help="render documents with argument markers")
    p.add_argument("--docs", required=True, help="documents JSONL")
    p.add_argument("--scheme", required=True, choices=sorted(_SCHEMES))
    p.add_argument("--out", required=True, help="output JSONL")
    _add_common(p)
    p.set_defaults(func=cmd_mark)

    p = sub.add_parser("augment", help="export the three-format training set")
    p.add_argument("--docs", required=True)
    p.add_argument("--refs", required=True, help="reference summaries JSONL")
    p.add_argument("--folds", required=True, help="fold assignments JSONL")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--fold", type=int, default=None, help="export only this fold id")
    _add_common(p)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("rank", help="rerank candidate pools and select per document")
    p.add_argument("--docs", required=True)
    p.add_argument("--candidates", required=True)
    p.add_argument("--out", required=True, help="selections JSONL")
    p.add_argument("--scores", default=None, help="per-candidate score dump JSONL")
    p.add_argument("--formats", default=None, help="comma list, e.g. raw,binary,finegrained")
    p.add_argument("--beams", default=None, help="comma list, e.g. 1,2,3,4,5")
    p.add_argument("--dedupe", action="store_true", default=None)
    p.add_argument("--all-beams", action="store_true", default=None,
                   help="keep every beam per (format,width) cell")
    p.add_argument("--metric", choices=["R1", "R2", "RL"], default=None)
    _add_common(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("eval", help="score selections against references")
    p.add_argument("--selections", required=True, help="rank output JSONL")
    p.add_argument("--references", required=True)
    p.add_argument("--folds", default=None)
    p.add_argument("--out", required=True, help="report JSON")
    p.add_argument("--table", default=None, help="also write an aligned text table")
    p.add_argument("--system-id", default="system")
    _add_common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="paired bootstrap between two eval reports")
    p.add_argument("report_a")
    p.add_argument("report_b")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--out", default=None, help="write the comparison JSON here too")
    _add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("stats", help="corpus size summary")
    p.add_argument("--docs", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    _add_common(p)
    p.set_defaults(func=cmd_serve)

    return parser


def _resolve(args: argparse.Namespace) -> RunConfig:
    overrides = {
        "seed": getattr(args, "seed", None),
        "jobs": getattr(args, "jobs", None),
        "metric": getattr(args, "metric", None),
        "dedupe": getattr(args, "dedupe", None),
        "all_beams": getattr(args, "all_beams", None),
        "trials": getattr(args, "trials", None),
    }
    formats = getattr(args, "formats", None)
    if formats is not None:
        overrides["formats"] = tuple(f.strip() for f in formats.split(",") if f.strip())
    beams = getattr(args, "beams", None)
    if beams is not None:
        try:
            overrides["beams"] = tuple(int(b) for b in beams.split(",") if b.strip())
        except ValueError:
            raise DataError(f"--beams must be a comma list of integers, got {beams!r}")
    cfg = resolve_config(getattr(args, "config", None), **overrides)
    log.info("resolved config: %s", json.dumps(cfg.as_dict(), ensure_ascii=False))
    return cfg


def cmd_mark(args, cfg: RunConfig) -> int:
    docs = corpus.load_corpus(args.docs, "documents")
    scheme = _SCHEMES[args.scheme]
    lines = (
        json.dumps(
            {
                "doc_id": doc.doc_id,
                "input_format": scheme.value,
                "input": marker.render(doc, scheme, cfg.sentence_separator),
            },
            ensure_ascii=False,
        )
        for doc in docs
    )
    count = write_jsonl_atomic(args.out, lines)
    log.info("wrote %d marked documents to %s", count, args.out)
    return EXIT_OK


def cmd_augment(args, cfg: RunConfig) -> int:
    docs = corpus.load_corpus(args.docs, "documents")
    refs = corpus.load_corpus(args.refs, "references")
    folds = corpus.load_corpus(args.folds, "folds")
    refs_by_id = {r.doc_id: r for r in refs}
    pairs = []
    for doc in docs:
        if doc.doc_id not in refs_by_id:
            raise DataError(f"document {doc.doc_id!r} has no reference summary")
        pairs.append((doc, refs_by_id[doc.doc_id]))

    if args.fold is not None:
        folds = [f for f in folds if f.fold_id == args.fold]
        if not folds:
            raise DataError(f"fold {args.fold} not present in {args.folds}")
    out_dir = Path(args.out_dir)
    all_counts = {}
    for fold in folds:
        counts = augment_mod.export_training_set(
            pairs, fold, out_dir / f"fold{fold.fold_id}", cfg.sentence_separator
        )
        all_counts[fold.fold_id] = counts
        log.info("fold %d: train=%d validation=%d", fold.fold_id,
                 counts["train"], counts["validation"])
    print(json.dumps({"folds": all_counts}, ensure_ascii=False))
    return EXIT_OK


def cmd_rank(args, cfg: RunConfig) -> int:
    docs = corpus.load_corpus(args.docs, "documents")
    cands = corpus.load_corpus(
        args.candidates, "candidates", max_beam_width=cfg.max_beam_width()
    )
    results = pipeline.run_reranking(
        docs, cands, cfg.policy(), cfg.ranking_metric(), cfg.stemmer, jobs=cfg.jobs
    )

    selection_lines = []
    score_lines = []
    for result in results:
        best = result.best
        selection_lines.append(json.dumps({
            "doc_id": result.doc_id,
            "selected": best.candidate.text,
            "mu": best.mu,
            "input_format": best.candidate.input_format.value,
            "beam_width": best.candidate.beam_width,
            "generator_id": best.candidate.generator_id,
            "metric": result.metric.value,
            "used_fallback": result.used_fallback,
        }, ensure_ascii=False))
        for rank, scored in enumerate(result.ranked):
            score_lines.append(json.dumps({
                "doc_id": result.doc_id,
                "rank": rank,
                "pool_index": scored.pool_index,
                "mu": scored.mu,
                "input_format": scored.candidate.input_format.value,
                "beam_width": scored.candidate.beam_width,
                "generator_id": scored.candidate.generator_id,
                "stripped_markers": scored.stripped_markers,
            }, ensure_ascii=False))

    count = write_jsonl_atomic(args.out, selection_lines)
    log.info("wrote %d selections to %s", count, args.out)
    if args.scores:
        write_jsonl_atomic(args.scores, score_lines)
        log.info("wrote score dump to %s", args.scores)
    return EXIT_OK


def _load_selections(path: str) -> dict[str, str]:
    selections: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{line_no}: malformed JSON: {exc.msg}")
            if "doc_id" not in record or "selected" not in record:
                raise DataError(f"{path}:{line_no}: selection needs doc_id and selected")
            if record["doc_id"] in selections:
                raise DataError(f"{path}:{line_no}: duplicate doc_id {record['doc_id']!r}")
            selections[record["doc_id"]] = record["selected"]
    if not selections:
        raise DataError(f"{path}: no selections found")
    return selections


def cmd_eval(args, cfg: RunConfig) -> int:
    selections = _load_selections(args.selections)
    refs = corpus.load_corpus(args.references, "references")
    folds = corpus.load_corpus(args.folds, "folds") if args.folds else None
    report = pipeline.evaluate(
        selections,
        corpus.references_by_id(refs),
        folds=folds,
        stem=cfg.stemmer,
        system_id=args.system_id,
    )
    write_text_atomic(args.out, json.dumps(report.to_json_dict(), ensure_ascii=False, indent=2) + "\n")
    log.info("wrote report to %s", args.out)
    if args.table:
        write_text_atomic(args.table, pipeline.render_table(report))
        log.info("wrote table to %s", args.table)
    return EXIT_OK


def cmd_compare(args, cfg: RunConfig) -> int:
    with open(args.report_a, "r", encoding="utf-8") as fh:
        report_a = pipeline.SystemReport.from_json_dict(json.load(fh))
    with open(args.report_b, "r", encoding="utf-8") as fh:
        report_b = pipeline.SystemReport.from_json_dict(json.load(fh))
    try:
        result = pipeline.compare_systems(
            report_a, report_b, trials=cfg.trials, seed=cfg.seed
        )
    except ValueError as exc:
        raise DataError(str(exc))
    payload = json.dumps(result.to_json_dict(), ensure_ascii=False, indent=2)
    print(payload)
    if args.out:
        write_text_atomic(args.out, payload + "\n")
    return EXIT_OK


def cmd_stats(args, cfg: RunConfig) -> int:
    docs = corpus.load_corpus(args.docs, "documents")
    stats = corpus.corpus_stats(docs)
    print(json.dumps(
        {
            "documents": stats.documents,
            "mean_words": round(stats.mean_words, 2),
            "max_words": stats.max_words,
        },
        ensure_ascii=False,
    ))
    return EXIT_OK


def cmd_serve(args, cfg: RunConfig) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
        return args.func(args, cfg)
    except DataError as exc:
        print(f"argsum: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"argsum: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
