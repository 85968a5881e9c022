import json
import random
import unicodedata

import pytest

from argsum import corpus
from argsum.errors import CorpusError, DataError

from oracles import ws_token_count


def write_lines(tmp_path, name, lines):
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


DOC_LINE = json.dumps({
    "doc_id": "a_1",
    "role_source": "oracle",
    "sentences": [
        {"text": "The court erred.", "role": "Issue"},
        {"text": "Some background.", "role": "NonArgument"},
        {"text": "Therefore allowed.", "role": "Conclusion"},
    ],
})


def test_load_well_formed_document(tmp_path):
    path = write_lines(tmp_path, "docs.jsonl", [DOC_LINE])
    docs = corpus.load_corpus(path, "documents")
    assert len(docs) == 1
    doc = docs[0]
    assert doc.doc_id == "a_1"
    assert [s.index for s in doc.sentences] == [0, 1, 2]
    assert doc.sentences[0].role is corpus.ArgRole.ISSUE
    assert doc.role_source is corpus.RoleSource.ORACLE


def test_invalid_role_names_role_and_line(tmp_path):
    bad = json.dumps({
        "doc_id": "a_2",
        "role_source": "oracle",
        "sentences": [{"text": "X.", "role": "Remark"}],
    })
    path = write_lines(tmp_path, "docs.jsonl", [DOC_LINE, bad])
    with pytest.raises(CorpusError) as err:
        corpus.load_corpus(path, "documents")
    assert "Remark" in str(err.value)
    assert err.value.line_no == 2


def test_duplicate_doc_id(tmp_path):
    path = write_lines(tmp_path, "docs.jsonl", [DOC_LINE, DOC_LINE])
    with pytest.raises(CorpusError, match="duplicate id 'a_1'"):
        corpus.load_corpus(path, "documents")


def test_malformed_json_reports_line(tmp_path):
    path = write_lines(tmp_path, "docs.jsonl", [DOC_LINE, "{nope"])
    with pytest.raises(CorpusError) as err:
        corpus.load_corpus(path, "documents")
    assert err.value.line_no == 2


def test_role_source_none_requires_nonargument(tmp_path):
    bad = json.dumps({
        "doc_id": "b",
        "role_source": "none",
        "sentences": [{"text": "X.", "role": "Issue"}],
    })
    path = write_lines(tmp_path, "docs.jsonl", [bad])
    with pytest.raises(CorpusError, match="role_source"):
        corpus.load_corpus(path, "documents")


def test_marker_token_in_storage_rejected(tmp_path):
    bad = json.dumps({
        "doc_id": "b",
        "role_source": "oracle",
        "sentences": [{"text": "bad <IRC> here", "role": "Issue"}],
    })
    path = write_lines(tmp_path, "docs.jsonl", [bad])
    with pytest.raises(CorpusError, match="<IRC>"):
        corpus.load_corpus(path, "documents")


def test_empty_sentence_text_rejected(tmp_path):
    bad = json.dumps({
        "doc_id": "b",
        "role_source": "oracle",
        "sentences": [{"text": "", "role": "Issue"}],
    })
    path = write_lines(tmp_path, "docs.jsonl", [bad])
    with pytest.raises(CorpusError, match="empty text"):
        corpus.load_corpus(path, "documents")


def test_reference_loading(tmp_path):
    path = write_lines(tmp_path, "refs.jsonl", [json.dumps({"doc_id": "a", "text": "R."})])
    refs = corpus.load_corpus(path, "references")
    assert refs[0].text == "R."
    bad = write_lines(tmp_path, "bad.jsonl", [json.dumps({"doc_id": "a", "text": ""})])
    with pytest.raises(CorpusError, match="empty"):
        corpus.load_corpus(bad, "references")


@pytest.mark.parametrize("width,ok", [(0, False), (1, True), (5, True), (6, False)])
def test_candidate_beam_width_bounds(tmp_path, width, ok):
    line = json.dumps({
        "doc_id": "a", "text": "t", "input_format": "raw",
        "beam_width": width, "generator_id": "g",
    })
    path = write_lines(tmp_path, "cands.jsonl", [line])
    if ok:
        assert corpus.load_corpus(path, "candidates")[0].beam_width == width
    else:
        with pytest.raises(CorpusError, match="beam_width"):
            corpus.load_corpus(path, "candidates")


def test_candidate_beam_width_configurable_max(tmp_path):
    line = json.dumps({
        "doc_id": "a", "text": "t", "input_format": "raw",
        "beam_width": 7, "generator_id": "g",
    })
    path = write_lines(tmp_path, "cands.jsonl", [line])
    cands = corpus.load_corpus(path, "candidates", max_beam_width=8)
    assert cands[0].beam_width == 7


def test_candidate_empty_text_allowed(tmp_path):
    line = json.dumps({
        "doc_id": "a", "text": "", "input_format": "binary",
        "beam_width": 1, "generator_id": "g",
    })
    path = write_lines(tmp_path, "cands.jsonl", [line])
    assert corpus.load_corpus(path, "candidates")[0].text == ""


def test_fold_split_overlap_rejected(tmp_path):
    line = json.dumps({"fold_id": 0, "train": ["a"], "validation": ["a"], "test": []})
    path = write_lines(tmp_path, "folds.jsonl", [line])
    with pytest.raises(CorpusError, match="appears in both"):
        corpus.load_corpus(path, "folds")


def test_fold_id_range(tmp_path):
    line = json.dumps({"fold_id": 5, "train": [], "validation": [], "test": []})
    path = write_lines(tmp_path, "folds.jsonl", [line])
    with pytest.raises(CorpusError, match="fold_id"):
        corpus.load_corpus(path, "folds")


def test_unknown_kind():
    with pytest.raises(ValueError):
        corpus.load_corpus("whatever.jsonl", "summaries")


def test_nfc_normalization(tmp_path):
    decomposed = "café rule."  # e + combining acute
    line = json.dumps({
        "doc_id": "u", "role_source": "oracle",
        "sentences": [{"text": decomposed, "role": "Issue"}],
    })
    path = write_lines(tmp_path, "docs.jsonl", [line])
    doc = corpus.load_corpus(path, "documents")[0]
    assert doc.sentences[0].text == unicodedata.normalize("NFC", decomposed)
    assert "́" not in doc.sentences[0].text


def test_round_trip_is_byte_identical(tmp_path, fixture_docs):
    lines = [corpus.to_jsonl_line(corpus.document_to_record(d)) for d in fixture_docs]
    path = write_lines(tmp_path, "docs.jsonl", lines)
    reloaded = corpus.load_corpus(path, "documents")
    assert reloaded == fixture_docs
    again = [corpus.to_jsonl_line(corpus.document_to_record(d)) for d in reloaded]
    assert again == lines


def test_loader_preserves_sentence_count(fixture_docs, data_dir):
    raw_counts = []
    with open(data_dir / "documents.jsonl", encoding="utf-8") as fh:
        for line in fh:
            raw_counts.append(len(json.loads(line)["sentences"]))
    assert [len(d.sentences) for d in fixture_docs] == raw_counts


def make_doc(doc_id: str, texts: list) -> corpus.Document:
    return corpus.Document(
        doc_id=doc_id,
        sentences=tuple(
            corpus.Sentence(i, t, corpus.ArgRole.NON_ARGUMENT) for i, t in enumerate(texts)
        ),
        role_source=corpus.RoleSource.NONE,
    )


def test_stats_single_doc():
    stats = corpus.corpus_stats([make_doc("a", ["a b c"])])
    assert stats == corpus.CorpusStats(documents=1, mean_words=3.0, max_words=3)


def test_stats_two_docs():
    stats = corpus.corpus_stats([make_doc("a", ["x y"]), make_doc("b", ["p q r s"])])
    assert stats.mean_words == 3.0
    assert stats.max_words == 4


def test_stats_empty_collection():
    with pytest.raises(DataError):
        corpus.corpus_stats([])


def test_stats_synthetic_corpus_against_whitespace_oracle():
    # 1049 docs of plain alphanumeric words: the ROUGE tokenizer and a
    # whitespace counter must agree on every word count.
    rng = random.Random(99)
    docs = []
    expected_counts = []
    for i in range(1049):
        sentences = [
            " ".join(f"w{rng.randint(0, 500)}" for _ in range(rng.randint(3, 20)))
            for _ in range(rng.randint(1, 6))
        ]
        docs.append(make_doc(f"d{i}", sentences))
        expected_counts.append(ws_token_count(" ".join(sentences)))
    stats = corpus.corpus_stats(docs)
    assert stats.documents == 1049
    assert stats.mean_words == pytest.approx(sum(expected_counts) / 1049)
    assert stats.max_words == max(expected_counts)
