"""Candidate decoding: one record per (document, input format, beam width),
in the reranker's candidates JSONL schema."""

from __future__ import annotations

import logging
from pathlib import Path

from . import GenBridgeError, mock
from .config import GenConfig
from .jsonl import FORMATS, read_documents, write_jsonl
from .markers import render_input

log = logging.getLogger(__name__)


def _check_formats(formats: list[str]) -> None:
    for fmt in formats:
        if fmt not in FORMATS:
            raise GenBridgeError(f"unknown input format {fmt!r}")


def generate_candidates(
    docs_path: str | Path,
    out_path: str | Path,
    config: GenConfig,
    formats: list[str],
    checkpoint: str | Path | None = None,
    use_mock: bool = False,
    generator_id: str | None = None,
) -> int:
    """Decode candidates for every document and write candidates JSONL.

    Real mode needs a checkpoint directory saved by train(); mock mode (or a
    stub checkpoint) needs nothing and is byte-deterministic under the seed.
    Returns the number of records written.
    """
    _check_formats(formats)
    docs = read_documents(docs_path)
    widths = list(config.beam_widths)

    if checkpoint is not None and mock.is_mock_checkpoint(checkpoint):
        use_mock = True
    if use_mock:
        records = mock.generate(
            docs, formats, widths, config.seed, generator_id or "mock"
        )
        write_jsonl(out_path, records)
        log.info("mock-decoded %d records to %s", len(records), out_path)
        return len(records)

    if checkpoint is None:
        raise GenBridgeError("real decoding needs --checkpoint (or use --mock)")
    from .model import load_checkpoint, resolve_device

    import torch

    model, tokenizer = load_checkpoint(checkpoint)
    device = resolve_device(config)
    model.to(device)
    gen_id = generator_id or Path(checkpoint).name

    records = []
    for doc in docs:
        for fmt in formats:
            text = render_input(doc["sentences"], fmt)
            encoded = tokenizer(
                text, return_tensors="pt", truncation=True,
                max_length=config.max_input_tokens,
            ).to(device)
            for width in widths:
                with torch.no_grad():
                    output = model.generate(
                        **encoded,
                        num_beams=width,
                        max_new_tokens=config.max_new_tokens,
                        do_sample=False,
                    )
                records.append({
                    "doc_id": doc["doc_id"],
                    "text": tokenizer.decode(output[0], skip_special_tokens=True),
                    "input_format": fmt,
                    "beam_width": width,
                    "generator_id": gen_id,
                })
    write_jsonl(out_path, records)
    log.info("decoded %d records to %s", len(records), out_path)
    return len(records)
