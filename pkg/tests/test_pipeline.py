import itertools
import random

import pytest

from argsum import pipeline
from argsum.argscore import RankingMetric
from argsum.corpus import (
    ArgRole,
    CandidateSummary,
    Document,
    FoldSpec,
    InputFormat,
    RoleSource,
    Sentence,
)
from argsum.errors import DataError
from argsum.pipeline import (
    DocScores,
    PoolPolicy,
    SystemReport,
    assemble_pool,
    compare_systems,
    evaluate,
    render_table,
    run_reranking,
)

from oracles import bootstrap_pvalues, naive_mu


def doc_of(doc_id, pairs, role_source=RoleSource.ORACLE):
    return Document(
        doc_id=doc_id,
        sentences=tuple(Sentence(i, t, r) for i, (t, r) in enumerate(pairs)),
        role_source=role_source,
    )


def cand(doc_id, text, fmt="raw", width=1, gen="g"):
    return CandidateSummary(doc_id=doc_id, text=text, input_format=InputFormat(fmt),
                            beam_width=width, generator_id=gen)


FULL_POLICY = PoolPolicy()


def grid(doc_id, text_of):
    return [
        cand(doc_id, text_of(fmt, w), fmt, w)
        for fmt in ("raw", "binary", "finegrained")
        for w in range(1, 6)
    ]


def test_assemble_full_grid_is_fifteen():
    cands = grid("d", lambda fmt, w: f"{fmt} {w}")
    pool = assemble_pool(cands, "d", FULL_POLICY)
    assert len(pool.candidates) == 15
    assert [c.input_format.value for c in pool.candidates[:5]] == ["raw"] * 5
    assert [c.beam_width for c in pool.candidates[:5]] == [1, 2, 3, 4, 5]


def test_assemble_orders_formats_and_beams():
    cands = grid("d", lambda fmt, w: f"{fmt} {w}")
    random.Random(0).shuffle(cands)
    pool = assemble_pool(cands, "d", FULL_POLICY)
    keys = [(c.input_format.value, c.beam_width) for c in pool.candidates]
    expected = [(f, w) for f in ("raw", "binary", "finegrained") for w in range(1, 6)]
    assert keys == expected


def test_assemble_policy_subset():
    cands = grid("d", lambda fmt, w: f"{fmt} {w}")
    policy = PoolPolicy(formats=(InputFormat.BINARY,), beam_widths=(2, 4))
    pool = assemble_pool(cands, "d", policy)
    assert [(c.input_format.value, c.beam_width) for c in pool.candidates] == [
        ("binary", 2), ("binary", 4)
    ]


def test_assemble_dedupe_keeps_earlier_provenance():
    cands = [
        cand("d", "same text", "raw", 1),
        cand("d", "same  text", "raw", 2),  # whitespace-normalized duplicate
        cand("d", "unique", "binary", 1),
    ]
    pool = assemble_pool(cands, "d", PoolPolicy(dedupe=True))
    assert len(pool.candidates) == 2
    assert pool.candidates[0].beam_width == 1
    assert pool.candidates[0].input_format is InputFormat.RAW


def test_assemble_keeps_first_per_cell_unless_all_beams():
    cands = [cand("d", "first", "raw", 1), cand("d", "second", "raw", 1)]
    pool = assemble_pool(cands, "d", FULL_POLICY)
    assert [c.text for c in pool.candidates] == ["first"]
    pool = assemble_pool(cands, "d", PoolPolicy(all_beams=True))
    assert [c.text for c in pool.candidates] == ["first", "second"]


def test_assemble_zero_matches_is_error():
    with pytest.raises(DataError, match="no candidates match"):
        assemble_pool([cand("other", "x")], "d", FULL_POLICY)


def test_policy_validation():
    with pytest.raises(ValueError):
        PoolPolicy(formats=())
    with pytest.raises(ValueError):
        PoolPolicy(beam_widths=())
    with pytest.raises(ValueError):
        PoolPolicy(beam_widths=(0,))


def test_assemble_matches_group_by_oracle(fixture_candidates):
    # independent group-by-(format, width) first-entry selection
    for doc_id in (f"case_{i:03d}" for i in range(20)):
        mine = [c for c in fixture_candidates if c.doc_id == doc_id]
        expected = []
        for fmt in ("raw", "binary", "finegrained"):
            for width in range(1, 6):
                cell = [c for c in mine
                        if c.input_format.value == fmt and c.beam_width == width]
                if cell:
                    expected.append(cell[0])
        pool = assemble_pool(fixture_candidates, doc_id, FULL_POLICY)
        assert list(pool.candidates) == expected


def test_run_reranking_single_doc_single_candidate():
    doc = doc_of("d", [("a claim", ArgRole.ISSUE)])
    results = run_reranking([doc], [cand("d", "whatever")], FULL_POLICY)
    assert len(results) == 1
    assert results[0].best.candidate.text == "whatever"


def test_run_reranking_planted_cell_wins():
    doc = doc_of("d", [("the main claim here", ArgRole.ISSUE), ("noise", ArgRole.NON_ARGUMENT)])
    cands = grid("d", lambda fmt, w: "unrelated words")
    cands = [c if not (c.input_format.value == "finegrained" and c.beam_width == 3)
             else cand("d", "the main claim here", "finegrained", 3) for c in cands]
    results = run_reranking([doc], cands, FULL_POLICY)
    best = results[0].best
    assert best.candidate.input_format is InputFormat.FINEGRAINED
    assert best.candidate.beam_width == 3
    assert best.mu == 1.0


def test_run_reranking_matches_per_doc_oracle(fixture_docs, fixture_candidates):
    results = run_reranking(fixture_docs, fixture_candidates, FULL_POLICY)
    assert [r.doc_id for r in results] == sorted(d.doc_id for d in fixture_docs)
    docs = {d.doc_id: d for d in fixture_docs}
    for result in results:
        doc = docs[result.doc_id]
        arg_texts = [s.text for s in doc.sentences if s.role != ArgRole.NON_ARGUMENT]
        ref = " ".join(arg_texts) if arg_texts else " ".join(s.text for s in doc.sentences)
        pool = assemble_pool(fixture_candidates, result.doc_id, FULL_POLICY)
        mus = [naive_mu(c.text.replace("<IRC>", " ").replace("</IRC>", " "), ref)
               for c in pool.candidates]
        best = max(range(len(mus)), key=lambda i: (mus[i], -i))
        assert result.best.pool_index == best
        assert result.best.mu == pytest.approx(mus[best])


def test_jobs_do_not_change_results(fixture_docs, fixture_candidates):
    serial = run_reranking(fixture_docs, fixture_candidates, FULL_POLICY, jobs=1)
    threaded = run_reranking(fixture_docs, fixture_candidates, FULL_POLICY, jobs=8)
    assert serial == threaded


def test_pool_subset_dominance(fixture_docs, fixture_candidates):
    full = {r.doc_id: r.best.mu
            for r in run_reranking(fixture_docs, fixture_candidates, FULL_POLICY)}
    formats = list(InputFormat)
    rng = random.Random(2)
    subsets = []
    for k in (1, 2):
        for combo in itertools.combinations(formats, k):
            subsets.append(PoolPolicy(formats=combo, beam_widths=tuple(
                sorted(rng.sample(range(1, 6), k=rng.randint(1, 5))))))
    for policy in subsets:
        for result in run_reranking(fixture_docs, fixture_candidates, policy):
            assert result.best.mu <= full[result.doc_id] + 1e-12


def test_evaluate_identity_scores_100():
    refs = {"a": "x y z", "b": "p q"}
    report = evaluate(dict(refs), refs)
    assert report.to_json_dict()["corpus"] == {"R1": 100.0, "R2": 100.0, "RL": 100.0}


def test_evaluate_frozen_example():
    report = evaluate({"d": "a b c"}, {"d": "a c d"})
    assert report.to_json_dict()["corpus"]["R1"] == 66.67


def test_evaluate_fold_aggregation_is_mean_of_fold_means():
    # fold 0 docs score R1 = 0.40, fold 1 docs score 0.50
    selected = {"f0a": "a b c d e", "f1a": "a b c d"}
    references = {"f0a": "a b x1 x2 x3", "f1a": "a b x1 x2"}
    folds = [
        FoldSpec(0, ("t",), (), ("f0a",)),
        FoldSpec(1, ("t",), (), ("f1a",)),
    ]
    report = evaluate(selected, references, folds=folds)
    data = report.to_json_dict()
    assert data["fold_means"][0]["R1"] == 40.0
    assert data["fold_means"][1]["R1"] == 50.0
    assert data["corpus"]["R1"] == 45.0


def test_evaluate_missing_reference():
    with pytest.raises(DataError, match="no reference"):
        evaluate({"a": "x"}, {})


def test_evaluate_doc_not_in_any_fold():
    with pytest.raises(DataError, match="not in any fold"):
        evaluate({"a": "x"}, {"a": "x"}, folds=[FoldSpec(0, (), (), ("b",))])


def test_evaluate_extra_scorer_hook():
    report = evaluate({"a": "x"}, {"a": "x"}, extra_scorers={"BS": lambda c, r: 0.875})
    data = report.to_json_dict()
    assert data["corpus"]["BS"] == 87.5
    assert "BS" in data["metrics"]


def test_report_json_round_trip():
    report = evaluate({"a": "x y", "b": "y z"}, {"a": "x q", "b": "y z"})
    restored = SystemReport.from_json_dict(report.to_json_dict())
    assert restored.per_doc == report.per_doc
    assert restored.metrics == report.metrics


def test_render_table_contains_columns():
    report = evaluate({"a": "x"}, {"a": "x"}, system_id="mysys")
    table = render_table(report)
    assert "R-1" in table and "R-2" in table and "R-L" in table
    assert "mysys" in table
    assert "100.00" in table


def report_from_scores(system_id, scores):
    per_doc = tuple(
        DocScores(doc_id=f"doc{i:03d}", selected="", scores={"R1": s})
        for i, s in enumerate(scores)
    )
    corpus = {"R1": sum(scores) / len(scores)}
    return SystemReport(system_id=system_id, metrics=("R1",), per_doc=per_doc,
                        fold_means=None, corpus_means=corpus)


def test_compare_identical_systems_not_significant():
    scores = [0.4 + 0.01 * i for i in range(30)]
    a = report_from_scores("a", scores)
    b = report_from_scores("b", scores)
    result = compare_systems(a, b, trials=2000, seed=9)
    assert result.p_values["R1"] > 0.05


def test_compare_dominant_system_p_zero():
    base = [0.4 + 0.01 * i for i in range(30)]
    a = report_from_scores("a", base)
    b = report_from_scores("b", [s + 0.10 for s in base])
    result = compare_systems(a, b, trials=2000, seed=9)
    assert result.p_values["R1"] == 0.0


def test_compare_agrees_with_independent_bootstrap():
    rng = random.Random(77)
    a_scores = [min(1.0, max(0.0, rng.gauss(0.45, 0.08))) for _ in range(50)]
    b_scores = [min(1.0, max(0.0, a + rng.gauss(0.01, 0.05))) for a in a_scores]
    a = report_from_scores("a", a_scores)
    b = report_from_scores("b", b_scores)
    result = compare_systems(a, b, trials=10_000, seed=31)
    oracle = bootstrap_pvalues({"R1": a_scores}, {"R1": b_scores}, trials=10_000, seed=31)
    assert 0.0 < result.p_values["R1"] < 1.0
    assert result.p_values["R1"] == pytest.approx(oracle["R1"], abs=0.02)


def test_compare_trials_floor():
    a = report_from_scores("a", [0.5, 0.6])
    with pytest.raises(ValueError):
        compare_systems(a, a, trials=10)


def test_compare_doc_set_mismatch():
    a = report_from_scores("a", [0.5, 0.6])
    b = report_from_scores("b", [0.5, 0.6, 0.7])
    with pytest.raises(DataError, match="different document sets"):
        compare_systems(a, b, trials=1000)


def test_compare_seed_reproducible():
    rng = random.Random(5)
    scores_a = [rng.random() for _ in range(20)]
    scores_b = [rng.random() for _ in range(20)]
    a = report_from_scores("a", scores_a)
    b = report_from_scores("b", scores_b)
    r1 = compare_systems(a, b, trials=3000, seed=42)
    r2 = compare_systems(a, b, trials=3000, seed=42)
    assert r1 == r2
