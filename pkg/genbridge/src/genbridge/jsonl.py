"""Minimal JSONL I/O plus schema checks for the records this bridge touches.

The reranker side owns the full validators; this module only guards the
fields genbridge itself reads, reporting the offending line number.
"""

from __future__ import annotations

import json
from pathlib import Path

from . import GenBridgeError

ROLES = ("Issue", "Reason", "Conclusion", "NonArgument")
FORMATS = ("raw", "binary", "finegrained")


def read_jsonl(path: str | Path) -> list[dict]:
    records = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise GenBridgeError(f"{path}:{line_no}: malformed JSON: {exc.msg}")
            if not isinstance(record, dict):
                raise GenBridgeError(f"{path}:{line_no}: record is not an object")
            records.append(record)
    return records


def write_jsonl(path: str | Path, records: list[dict]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def check_fields(record: dict, required: tuple, path, line_no: int) -> None:
    for key in required:
        if key not in record:
            raise GenBridgeError(f"{path}:{line_no}: missing field {key!r}")


def read_documents(path: str | Path) -> list[dict]:
    docs = read_jsonl(path)
    for i, doc in enumerate(docs, start=1):
        check_fields(doc, ("doc_id", "role_source", "sentences"), path, i)
        if not doc["sentences"]:
            raise GenBridgeError(f"{path}:{i}: document has no sentences")
        for sent in doc["sentences"]:
            check_fields(sent, ("text", "role"), path, i)
            if sent["role"] not in ROLES:
                raise GenBridgeError(f"{path}:{i}: invalid role {sent['role']!r}")
    return docs


def read_training_examples(path: str | Path) -> list[dict]:
    examples = read_jsonl(path)
    for i, example in enumerate(examples, start=1):
        check_fields(example, ("doc_id", "input_format", "input", "target"), path, i)
        if example["input_format"] not in FORMATS:
            raise GenBridgeError(f"{path}:{i}: invalid input_format {example['input_format']!r}")
    return examples
