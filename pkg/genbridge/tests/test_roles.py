from conftest import run_genbridge

from genbridge.jsonl import read_jsonl


def test_real_mode_requires_classifier_artifact(unlabeled_docs, tmp_path):
    proc = run_genbridge(["predict-roles", "--docs", unlabeled_docs,
                          "--out", tmp_path / "o.jsonl"], tmp_path)
    assert proc.returncode == 2
    assert "classifier artifact is missing" in proc.stderr


def test_missing_classifier_dir(unlabeled_docs, tmp_path):
    proc = run_genbridge(["predict-roles", "--docs", unlabeled_docs,
                          "--out", tmp_path / "o.jsonl",
                          "--classifier", tmp_path / "nope"], tmp_path)
    assert proc.returncode == 2


def test_mock_output_keeps_sentence_texts(unlabeled_docs, tmp_path):
    out = tmp_path / "pred.jsonl"
    proc = run_genbridge(["predict-roles", "--mock", "--docs", unlabeled_docs,
                          "--out", out, "--seed", "1"], tmp_path)
    assert proc.returncode == 0, proc.stderr
    before = read_jsonl(unlabeled_docs)
    after = read_jsonl(out)
    for doc_in, doc_out in zip(before, after):
        assert [s["text"] for s in doc_in["sentences"]] == [
            s["text"] for s in doc_out["sentences"]
        ]
