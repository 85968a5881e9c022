"""Three-format training-set construction for an external seq2seq trainer.

Every (document, reference) pair becomes exactly three examples - raw,
binary-marked and fine-grained-marked renderings of the same input - that
share the reference summary as target. Output order is deterministic:
grouped by document in input order, formats in fixed raw/binary/finegrained
order, so exports are golden-file testable.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import marker
from .corpus import Document, FoldSpec, InputFormat, ReferenceSummary, RoleSource
from .errors import DataError
from .ioutil import write_jsonl_atomic

log = logging.getLogger(__name__)

_FORMAT_SCHEME = {
    InputFormat.RAW: marker.MarkerScheme.RAW,
    InputFormat.BINARY: marker.MarkerScheme.BINARY,
    InputFormat.FINEGRAINED: marker.MarkerScheme.FINEGRAINED,
}


@dataclass(frozen=True)
class TrainingExample:
    doc_id: str
    input_format: InputFormat
    input_text: str
    target_text: str

    def to_record(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "input_format": self.input_format.value,
            "input": self.input_text,
            "target": self.target_text,
        }


def augment_pair(
    doc: Document,
    ref: ReferenceSummary,
    separator: str = marker.DEFAULT_SEPARATOR,
) -> list[TrainingExample]:
    """Render one pair into the three input formats sharing one target.

    Raises:
        DataError: doc_id mismatch, or the document carries no role labels
            (role_source ``none``), in which case the marked formats would be
            indistinguishable from raw.
    """
    if doc.doc_id != ref.doc_id:
        raise DataError(f"document {doc.doc_id!r} paired with reference {ref.doc_id!r}")
    if doc.role_source is RoleSource.NONE:
        raise DataError(
            f"document {doc.doc_id!r} has role_source 'none'; marked formats need labels"
        )
    return [
        TrainingExample(
            doc_id=doc.doc_id,
            input_format=fmt,
            input_text=marker.render(doc, _FORMAT_SCHEME[fmt], separator),
            target_text=ref.text,
        )
        for fmt in (InputFormat.RAW, InputFormat.BINARY, InputFormat.FINEGRAINED)
    ]


def export_training_set(
    pairs: Sequence[tuple[Document, ReferenceSummary]],
    fold: FoldSpec,
    out_dir: str | Path,
    separator: str = marker.DEFAULT_SEPARATOR,
) -> dict[str, int]:
    """Write ``train.jsonl`` / ``validation.jsonl`` for one fold.

    Only the fold's train and validation doc_ids are exported; each
    contributes its three formats, so the train file holds 3x the train doc
    count. Returns the per-split line counts.

    Raises:
        DataError: the fold names a doc_id absent from ``pairs``.
    """
    out_dir = Path(out_dir)
    by_id = {doc.doc_id: (doc, ref) for doc, ref in pairs}
    for split_name in ("train", "validation"):
        for doc_id in getattr(fold, split_name):
            if doc_id not in by_id:
                raise DataError(
                    f"fold {fold.fold_id} {split_name} split names unknown doc_id {doc_id!r}"
                )

    counts = {}
    input_order = [doc.doc_id for doc, _ in pairs]
    for split_name in ("train", "validation"):
        wanted = set(getattr(fold, split_name))
        lines = []
        for doc_id in input_order:
            if doc_id not in wanted:
                continue
            doc, ref = by_id[doc_id]
            for example in augment_pair(doc, ref, separator):
                lines.append(json.dumps(example.to_record(), ensure_ascii=False))
        counts[split_name] = write_jsonl_atomic(out_dir / f"{split_name}.jsonl", lines)
        if counts[split_name] == 0:
            log.warning("fold %d: %s split is empty", fold.fold_id, split_name)
    return counts
