"""Data model and JSONL ingestion for documents, references, candidates and folds.

All loaders validate invariants up front and raise :class:`CorpusError` with
the offending line number; collections are plain lists of frozen dataclasses
and are safe to share across threads once loaded.

Input JSONL schemas (one record per line, UTF-8):

- documents:  ``{"doc_id": str, "role_source": "oracle"|"predicted"|"none",
  "sentences": [{"text": str, "role": "Issue"|"Reason"|"Conclusion"|"NonArgument"}]}``
- references: ``{"doc_id": str, "text": str}``
- candidates: ``{"doc_id": str, "text": str, "input_format": "raw"|"binary"|"finegrained",
  "beam_width": int, "generator_id": str}``
- folds:      ``{"fold_id": int, "train": [str], "validation": [str], "test": [str]}``
"""

from __future__ import annotations

import enum
import json
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Union

from .errors import CorpusError

DEFAULT_MAX_BEAM_WIDTH = 5


class ArgRole(enum.Enum):
    """Sentence-level argument role under the IRC scheme."""

    ISSUE = "Issue"
    REASON = "Reason"
    CONCLUSION = "Conclusion"
    NON_ARGUMENT = "NonArgument"

    @property
    def is_argumentative(self) -> bool:
        return self is not ArgRole.NON_ARGUMENT


class RoleSource(enum.Enum):
    """Where a document's role labels came from."""

    ORACLE = "oracle"
    PREDICTED = "predicted"
    NONE = "none"


class InputFormat(enum.Enum):
    """Rendering format a candidate's source input used."""

    RAW = "raw"
    BINARY = "binary"
    FINEGRAINED = "finegrained"


# Fixed ordering used everywhere candidates are grouped or exported.
FORMAT_ORDER = (InputFormat.RAW, InputFormat.BINARY, InputFormat.FINEGRAINED)


@dataclass(frozen=True)
class Sentence:
    """One sentence of a document; ``index`` is its 0-based position."""

    index: int
    text: str
    role: ArgRole


@dataclass(frozen=True)
class Document:
    doc_id: str
    sentences: tuple[Sentence, ...]
    role_source: RoleSource

    def text(self, separator: str = " ") -> str:
        """Full document text without any markers."""
        return separator.join(s.text for s in self.sentences)

    def argumentative_sentences(self) -> list[Sentence]:
        return [s for s in self.sentences if s.role.is_argumentative]


@dataclass(frozen=True)
class ReferenceSummary:
    doc_id: str
    text: str


@dataclass(frozen=True)
class CandidateSummary:
    doc_id: str
    text: str
    input_format: InputFormat
    beam_width: int
    generator_id: str


@dataclass(frozen=True)
class CandidatePool:
    """Candidates for one document, in ranking order."""

    doc_id: str
    candidates: tuple[CandidateSummary, ...]


@dataclass(frozen=True)
class FoldSpec:
    fold_id: int
    train: tuple[str, ...]
    validation: tuple[str, ...]
    test: tuple[str, ...]

    def split_of(self, doc_id: str) -> str | None:
        if doc_id in self.train:
            return "train"
        if doc_id in self.validation:
            return "validation"
        if doc_id in self.test:
            return "test"
        return None


@dataclass(frozen=True)
class CorpusStats:
    documents: int
    mean_words: float
    max_words: int


Record = dict
Collection = Union[
    list[Document], list[ReferenceSummary], list[CandidateSummary], list[FoldSpec]
]

_KINDS = ("documents", "references", "candidates", "folds")


def _nfc(text: str) -> str:
    # NFC-normalize on load so hashing and dedup are stable across sources.
    return unicodedata.normalize("NFC", text)


def _require(record: Record, key: str, typ, path, line_no) -> object:
    if key not in record:
        raise CorpusError(f"missing field {key!r}", path=path, line_no=line_no)
    value = record[key]
    if not isinstance(value, typ):
        raise CorpusError(
            f"field {key!r} must be {typ.__name__}, got {type(value).__name__}",
            path=path,
            line_no=line_no,
        )
    return value


def document_from_record(record: Record, path=None, line_no=None) -> Document:
    from .marker import find_marker_token  # local import: marker depends on this module

    doc_id = _require(record, "doc_id", str, path, line_no)
    raw_source = _require(record, "role_source", str, path, line_no)
    try:
        role_source = RoleSource(raw_source)
    except ValueError:
        raise CorpusError(f"invalid role_source {raw_source!r}", path=path, line_no=line_no)
    raw_sentences = _require(record, "sentences", list, path, line_no)
    if not raw_sentences:
        raise CorpusError("document has no sentences", path=path, line_no=line_no)

    sentences = []
    for idx, item in enumerate(raw_sentences):
        if not isinstance(item, dict):
            raise CorpusError(f"sentence {idx} is not an object", path=path, line_no=line_no)
        text = _nfc(_require(item, "text", str, path, line_no))
        if not text:
            raise CorpusError(f"sentence {idx} has empty text", path=path, line_no=line_no)
        token = find_marker_token(text)
        if token is not None:
            raise CorpusError(
                f"sentence {idx} contains reserved marker token {token!r}",
                path=path,
                line_no=line_no,
            )
        raw_role = _require(item, "role", str, path, line_no)
        try:
            role = ArgRole(raw_role)
        except ValueError:
            raise CorpusError(
                f"invalid role {raw_role!r} in sentence {idx}", path=path, line_no=line_no
            )
        if role_source is RoleSource.NONE and role is not ArgRole.NON_ARGUMENT:
            raise CorpusError(
                f"role_source is 'none' but sentence {idx} has role {raw_role!r}",
                path=path,
                line_no=line_no,
            )
        sentences.append(Sentence(index=idx, text=text, role=role))
    return Document(doc_id=doc_id, sentences=tuple(sentences), role_source=role_source)


def reference_from_record(record: Record, path=None, line_no=None) -> ReferenceSummary:
    doc_id = _require(record, "doc_id", str, path, line_no)
    text = _nfc(_require(record, "text", str, path, line_no))
    if not text:
        raise CorpusError("reference text is empty", path=path, line_no=line_no)
    return ReferenceSummary(doc_id=doc_id, text=text)


def candidate_from_record(record: Record, path=None, line_no=None, max_beam_width: int = DEFAULT_MAX_BEAM_WIDTH) -> CandidateSummary:
    doc_id = _require(record, "doc_id", str, path, line_no)
    text = _nfc(_require(record, "text", str, path, line_no))
    raw_format = _require(record, "input_format", str, path, line_no)
    try:
        input_format = InputFormat(raw_format)
    except ValueError:
        raise CorpusError(f"invalid input_format {raw_format!r}", path=path, line_no=line_no)
    beam_width = _require(record, "beam_width", int, path, line_no)
    if isinstance(beam_width, bool) or not 1 <= beam_width <= max_beam_width:
        raise CorpusError(
            f"beam_width must be in [1, {max_beam_width}], got {beam_width!r}",
            path=path,
            line_no=line_no,
        )
    generator_id = _require(record, "generator_id", str, path, line_no)
    return CandidateSummary(
        doc_id=doc_id,
        text=text,
        input_format=input_format,
        beam_width=beam_width,
        generator_id=generator_id,
    )


def fold_from_record(record: Record, path=None, line_no=None) -> FoldSpec:
    fold_id = _require(record, "fold_id", int, path, line_no)
    if isinstance(fold_id, bool) or not 0 <= fold_id <= 4:
        raise CorpusError(f"fold_id must be in [0, 4], got {fold_id!r}", path=path, line_no=line_no)
    splits = {}
    seen: dict[str, str] = {}
    for split in ("train", "validation", "test"):
        ids = _require(record, split, list, path, line_no)
        for doc_id in ids:
            if not isinstance(doc_id, str):
                raise CorpusError(f"{split} entries must be strings", path=path, line_no=line_no)
            if doc_id in seen:
                raise CorpusError(
                    f"doc_id {doc_id!r} appears in both {seen[doc_id]!r} and {split!r}",
                    path=path,
                    line_no=line_no,
                )
            seen[doc_id] = split
        splits[split] = tuple(ids)
    return FoldSpec(fold_id=fold_id, **splits)


def load_corpus(
    path: str | Path,
    kind: str,
    *,
    max_beam_width: int = DEFAULT_MAX_BEAM_WIDTH,
) -> Collection:
    """Load and validate one JSONL corpus file.

    Args:
        path: JSONL file, one record per line.
        kind: one of ``documents``, ``references``, ``candidates``, ``folds``.
        max_beam_width: upper bound accepted for candidate beam widths.

    Returns:
        A list of the corresponding dataclass instances, in file order.

    Raises:
        CorpusError: malformed line, invalid enum value, duplicate doc_id
            (documents/references) or duplicate fold_id, each naming the line.
    """
    if kind not in _KINDS:
        raise ValueError(f"kind must be one of {_KINDS}, got {kind!r}")
    path = Path(path)
    out: list = []
    seen_ids: set = set()
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"malformed JSON: {exc.msg}", path=str(path), line_no=line_no)
            if not isinstance(record, dict):
                raise CorpusError("record is not a JSON object", path=str(path), line_no=line_no)

            if kind == "documents":
                item = document_from_record(record, str(path), line_no)
                key = item.doc_id
            elif kind == "references":
                item = reference_from_record(record, str(path), line_no)
                key = item.doc_id
            elif kind == "candidates":
                item = candidate_from_record(record, str(path), line_no, max_beam_width=max_beam_width)
                key = None  # several candidates per doc_id are expected
            else:
                item = fold_from_record(record, str(path), line_no)
                key = item.fold_id
            if key is not None:
                if key in seen_ids:
                    raise CorpusError(f"duplicate id {key!r}", path=str(path), line_no=line_no)
                seen_ids.add(key)
            out.append(item)
    return out


def documents_by_id(docs: Iterable[Document]) -> dict[str, Document]:
    return {d.doc_id: d for d in docs}


def references_by_id(refs: Iterable[ReferenceSummary]) -> dict[str, str]:
    return {r.doc_id: r.text for r in refs}


# -- canonical serialization (inverse of the loaders) --

def document_to_record(doc: Document) -> Record:
    return {
        "doc_id": doc.doc_id,
        "role_source": doc.role_source.value,
        "sentences": [{"text": s.text, "role": s.role.value} for s in doc.sentences],
    }


def reference_to_record(ref: ReferenceSummary) -> Record:
    return {"doc_id": ref.doc_id, "text": ref.text}


def candidate_to_record(cand: CandidateSummary) -> Record:
    return {
        "doc_id": cand.doc_id,
        "text": cand.text,
        "input_format": cand.input_format.value,
        "beam_width": cand.beam_width,
        "generator_id": cand.generator_id,
    }


def fold_to_record(fold: FoldSpec) -> Record:
    return {
        "fold_id": fold.fold_id,
        "train": list(fold.train),
        "validation": list(fold.validation),
        "test": list(fold.test),
    }


def to_jsonl_line(record: Record) -> str:
    """Canonical single-line rendering; load-then-serialize is byte-stable."""
    return json.dumps(record, ensure_ascii=False)


def corpus_stats(docs: list[Document]) -> CorpusStats:
    """Corpus size summary; word counts use the ROUGE tokenizer for consistency.

    Raises:
        DataError: empty collection.
    """
    from . import rouge
    from .errors import DataError

    if not docs:
        raise DataError("corpus_stats requires a non-empty document collection")
    counts = [len(rouge.tokenize(d.text())) for d in docs]
    return CorpusStats(
        documents=len(docs),
        mean_words=sum(counts) / len(counts),
        max_words=max(counts),
    )
