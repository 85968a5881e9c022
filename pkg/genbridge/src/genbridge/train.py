"""Finetuning loop with validation-metric checkpoint selection.

Epoch flow: teacher-forced steps over the training examples, then a decode
pass over the validation set scored with ROUGE-2 (or mean loss). The best
epoch's weights are what gets saved; early stopping kicks in after
``patience`` epochs without improvement.
"""

from __future__ import annotations

import copy
import json
import logging
from pathlib import Path

from . import GenBridgeError, mock
from .config import GenConfig
from .jsonl import read_training_examples
from .metrics import rouge2_f1
from .model import load_base, resolve_device

log = logging.getLogger(__name__)


def _decode_one(model, tokenizer, device, text: str, config: GenConfig, num_beams: int = 1) -> str:
    import torch

    encoded = tokenizer(
        text, return_tensors="pt", truncation=True, max_length=config.max_input_tokens
    ).to(device)
    with torch.no_grad():
        output = model.generate(
            **encoded,
            num_beams=num_beams,
            max_new_tokens=config.max_new_tokens,
            do_sample=False,
        )
    return tokenizer.decode(output[0], skip_special_tokens=True)


def _validation_score(model, tokenizer, device, examples, config: GenConfig) -> float:
    if not examples:
        return 0.0
    model.eval()
    total = 0.0
    for example in examples:
        decoded = _decode_one(model, tokenizer, device, example["input"], config)
        total += rouge2_f1(decoded, example["target"])
    return total / len(examples)


def train(
    train_path: str | Path,
    validation_path: str | Path | None,
    out_dir: str | Path,
    config: GenConfig,
    use_mock: bool = False,
) -> dict:
    """Finetune on an augmented training set and save the selected checkpoint.

    Returns the training log (also written to ``out_dir/train_log.json``).
    With ``use_mock`` no model is touched; a stub checkpoint is written that
    the mock decode path accepts.
    """
    out_dir = Path(out_dir)
    train_examples = read_training_examples(train_path)
    if not train_examples:
        raise GenBridgeError(f"{train_path}: training set is empty")
    val_examples = read_training_examples(validation_path) if validation_path else []

    if use_mock:
        mock.write_checkpoint(out_dir, config.as_dict())
        log_data = {
            "backend": "mock",
            "train_examples": len(train_examples),
            "validation_examples": len(val_examples),
        }
        _write_log(out_dir, log_data)
        return log_data

    import torch

    torch.manual_seed(config.seed)
    device = resolve_device(config)
    texts = [e["input"] for e in train_examples] + [e["target"] for e in train_examples]
    model, tokenizer = load_base(config, texts)
    model.to(device)
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)

    best_score = None
    best_state = None
    best_epoch = -1
    epochs_log = []
    step_losses = []
    stale = 0

    for epoch in range(config.epochs):
        model.train()
        # deterministic per-epoch shuffle
        rng_perm = torch.randperm(
            len(train_examples), generator=torch.Generator().manual_seed(config.seed + epoch)
        ).tolist()
        epoch_losses = []
        for start in range(0, len(rng_perm), config.batch_size):
            batch = [train_examples[i] for i in rng_perm[start:start + config.batch_size]]
            encoded = tokenizer(
                [b["input"] for b in batch], return_tensors="pt", padding=True,
                truncation=True, max_length=config.max_input_tokens,
            ).to(device)
            labels = tokenizer(
                [b["target"] for b in batch], return_tensors="pt", padding=True,
                truncation=True, max_length=config.max_new_tokens,
            ).input_ids
            if tokenizer.pad_token_id is not None:
                labels[labels == tokenizer.pad_token_id] = -100  # padding must not count
            labels = labels.to(device)
            output = model(**encoded, labels=labels)
            optimizer.zero_grad()
            output.loss.backward()
            optimizer.step()
            loss = float(output.loss.detach())
            epoch_losses.append(loss)
            step_losses.append(loss)

        if config.selection_metric == "rouge2" and val_examples:
            score = _validation_score(model, tokenizer, device, val_examples, config)
        else:
            score = -sum(epoch_losses) / len(epoch_losses)
        epochs_log.append({
            "epoch": epoch,
            "mean_loss": sum(epoch_losses) / len(epoch_losses),
            "selection_score": score,
        })
        log.info("epoch %d: mean_loss=%.4f selection=%.4f", epoch,
                 epochs_log[-1]["mean_loss"], score)

        if best_score is None or score > best_score:
            best_score = score
            best_state = copy.deepcopy(model.state_dict())
            best_epoch = epoch
            stale = 0
        else:
            stale += 1
            if config.patience and stale >= config.patience:
                log.info("early stop after %d stale epochs", stale)
                break

    model.load_state_dict(best_state)
    out_dir.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(out_dir)
    tokenizer.save_pretrained(out_dir)

    log_data = {
        "backend": "hf",
        "train_examples": len(train_examples),
        "validation_examples": len(val_examples),
        "epochs": epochs_log,
        "step_losses": step_losses,
        "selected_epoch": best_epoch,
        "config": config.as_dict(),
    }
    _write_log(out_dir, log_data)
    return log_data


def _write_log(out_dir: Path, log_data: dict) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    with (out_dir / "train_log.json").open("w", encoding="utf-8") as fh:
        json.dump(log_data, fh, indent=2)
        fh.write("\n")
