"""Sentence-level argument role prediction.

Real mode wraps a finetuned sequence classifier saved in Hugging Face format
whose labels are the four role names; mock mode assigns seeded heuristic
labels. Either way the output is a documents JSONL with
role_source="predicted" that passes the reranker's validation.
"""

from __future__ import annotations

import logging
from pathlib import Path

from . import GenBridgeError, mock
from .jsonl import ROLES, read_documents, write_jsonl

log = logging.getLogger(__name__)


def predict_roles(
    docs_path: str | Path,
    out_path: str | Path,
    classifier_dir: str | Path | None = None,
    use_mock: bool = False,
    seed: int = 0,
    batch_size: int = 16,
) -> int:
    """Label every sentence of every document; returns the document count."""
    docs = read_documents(docs_path)
    if use_mock:
        labeled = mock.predict_roles(docs, seed)
    else:
        if classifier_dir is None or not Path(classifier_dir).is_dir():
            raise GenBridgeError(
                "role classifier artifact is missing; pass --classifier DIR "
                "with a saved sequence-classification model, or use --mock"
            )
        labeled = _predict_with_classifier(docs, Path(classifier_dir), batch_size)
    write_jsonl(out_path, labeled)
    log.info("labeled %d documents to %s", len(labeled), out_path)
    return len(labeled)


def _predict_with_classifier(docs: list[dict], classifier_dir: Path, batch_size: int) -> list[dict]:
    import torch
    from transformers import AutoModelForSequenceClassification, AutoTokenizer

    try:
        model = AutoModelForSequenceClassification.from_pretrained(classifier_dir)
        tokenizer = AutoTokenizer.from_pretrained(classifier_dir)
    except EnvironmentError as exc:
        raise GenBridgeError(f"cannot load classifier {classifier_dir}: {exc}")
    model.eval()

    id2label = {int(k): v for k, v in model.config.id2label.items()}
    bad = [v for v in id2label.values() if v not in ROLES]
    if bad:
        raise GenBridgeError(
            f"classifier labels {bad} are not argument roles {list(ROLES)}"
        )

    out = []
    for doc in docs:
        texts = [s["text"] for s in doc["sentences"]]
        predicted = []
        for start in range(0, len(texts), batch_size):
            batch = texts[start:start + batch_size]
            encoded = tokenizer(batch, return_tensors="pt", padding=True, truncation=True)
            with torch.no_grad():
                logits = model(**encoded).logits
            predicted.extend(id2label[int(i)] for i in logits.argmax(dim=-1))
        out.append({
            "doc_id": doc["doc_id"],
            "role_source": "predicted",
            "sentences": [
                {"text": t, "role": r} for t, r in zip(texts, predicted)
            ],
        })
    return out
