"""Deterministic mock backend: no model, no accelerator, byte-stable output.

Randomness is keyed by sha256 of (seed, doc_id, ...) rather than Python's
salted hash(), so repeated runs and different processes agree exactly.
"""

from __future__ import annotations

import hashlib
import json
import random
from pathlib import Path

MOCK_CHECKPOINT_NAME = "mock_checkpoint.json"

_ROLE_CHOICES = ["Issue", "Reason", "Conclusion", "NonArgument"]
_ROLE_WEIGHTS = [0.10, 0.25, 0.10, 0.55]


def stable_rng(seed: int, *parts: object) -> random.Random:
    key = ":".join([str(seed), *map(str, parts)]).encode("utf-8")
    return random.Random(int.from_bytes(hashlib.sha256(key).digest()[:8], "big"))


def predict_roles(docs: list[dict], seed: int) -> list[dict]:
    """Label every sentence with a seeded heuristic; role_source=predicted."""
    out = []
    for doc in docs:
        rng = stable_rng(seed, "roles", doc["doc_id"])
        sentences = [
            {"text": s["text"], "role": rng.choices(_ROLE_CHOICES, _ROLE_WEIGHTS)[0]}
            for s in doc["sentences"]
        ]
        out.append({"doc_id": doc["doc_id"], "role_source": "predicted", "sentences": sentences})
    return out


def generate(
    docs: list[dict],
    formats: list[str],
    beam_widths: list[int],
    seed: int,
    generator_id: str = "mock",
) -> list[dict]:
    """Extractive-ish candidates: a seeded sentence subset per (doc, format,
    width) cell, kept in document order so score spreads look realistic."""
    records = []
    for doc in docs:
        texts = [s["text"] for s in doc["sentences"]]
        for fmt in formats:
            for width in beam_widths:
                rng = stable_rng(seed, "gen", doc["doc_id"], fmt, width)
                k = rng.randint(1, max(1, min(4, len(texts))))
                picked = sorted(rng.sample(range(len(texts)), k=k))
                records.append({
                    "doc_id": doc["doc_id"],
                    "text": " ".join(texts[i] for i in picked),
                    "input_format": fmt,
                    "beam_width": width,
                    "generator_id": generator_id,
                })
    return records


def write_checkpoint(out_dir: str | Path, config_dict: dict) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / MOCK_CHECKPOINT_NAME
    path.write_text(json.dumps({"backend": "mock", "config": config_dict}, indent=2) + "\n",
                    encoding="utf-8")
    return path


def is_mock_checkpoint(path: str | Path) -> bool:
    path = Path(path)
    return (path / MOCK_CHECKPOINT_NAME).is_file() if path.is_dir() else False
