"""Model plumbing: word-level tokenizer built from the training text, a tiny
randomly-initialized encoder-decoder for CPU-scale runs, and checkpoint
loading for anything saved in Hugging Face format."""

from __future__ import annotations

from collections import Counter
from pathlib import Path

from . import GenBridgeError
from .config import TINY_RANDOM, GenConfig
from .markers import MARKER_TOKENS

PAD, BOS, EOS, UNK = "<pad>", "<s>", "</s>", "<unk>"


def build_tokenizer(texts: list[str], vocab_cap: int = 8000):
    """Whitespace word-level tokenizer over the corpus vocabulary; marker
    tokens are registered as special tokens so they never get split."""
    from tokenizers import Tokenizer, models, pre_tokenizers
    from transformers import PreTrainedTokenizerFast

    counts = Counter()
    for text in texts:
        counts.update(text.split())
    vocab = {PAD: 0, BOS: 1, EOS: 2, UNK: 3}
    for word, _ in counts.most_common(vocab_cap):
        if word not in vocab:
            vocab[word] = len(vocab)
    tok = Tokenizer(models.WordLevel(vocab, unk_token=UNK))
    tok.pre_tokenizer = pre_tokenizers.WhitespaceSplit()
    fast = PreTrainedTokenizerFast(
        tokenizer_object=tok, pad_token=PAD, bos_token=BOS, eos_token=EOS, unk_token=UNK,
    )
    fast.add_special_tokens({"additional_special_tokens": list(MARKER_TOKENS)})
    return fast


def build_tiny_model(vocab_size: int, max_positions: int):
    """A deliberately small random-weight BART; no pretrained download."""
    from transformers import BartConfig, BartForConditionalGeneration

    config = BartConfig(
        vocab_size=vocab_size,
        d_model=32,
        encoder_layers=1,
        decoder_layers=1,
        encoder_attention_heads=2,
        decoder_attention_heads=2,
        encoder_ffn_dim=64,
        decoder_ffn_dim=64,
        max_position_embeddings=max_positions,
        pad_token_id=0,
        bos_token_id=1,
        eos_token_id=2,
        decoder_start_token_id=2,
    )
    return BartForConditionalGeneration(config)


def resolve_device(config: GenConfig):
    import torch

    if config.device.startswith("cuda") and not torch.cuda.is_available():
        raise GenBridgeError(
            "config requests a CUDA device but no CUDA hardware is available; "
            "set device='cpu' or run on a GPU machine"
        )
    return torch.device(config.device)


def load_base(config: GenConfig, tokenizer_texts: list[str]):
    """Starting point for finetuning: a local/hub checkpoint, or the tiny
    random model with a tokenizer built from the training text."""
    if config.base_checkpoint == TINY_RANDOM:
        tokenizer = build_tokenizer(tokenizer_texts)
        max_positions = min(config.max_input_tokens, 16_384) + 2
        model = build_tiny_model(len(tokenizer), max_positions)
        return model, tokenizer
    try:
        from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

        model = AutoModelForSeq2SeqLM.from_pretrained(config.base_checkpoint)
        tokenizer = AutoTokenizer.from_pretrained(config.base_checkpoint)
    except EnvironmentError as exc:
        raise GenBridgeError(
            f"cannot load base checkpoint {config.base_checkpoint!r}: {exc}"
        )
    return model, tokenizer


def load_checkpoint(checkpoint_dir: str | Path):
    """Load a finetuned checkpoint directory saved by train()."""
    checkpoint_dir = Path(checkpoint_dir)
    if not checkpoint_dir.is_dir():
        raise GenBridgeError(f"checkpoint directory {checkpoint_dir} does not exist")
    try:
        from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

        model = AutoModelForSeq2SeqLM.from_pretrained(checkpoint_dir)
        tokenizer = AutoTokenizer.from_pretrained(checkpoint_dir)
    except EnvironmentError as exc:
        raise GenBridgeError(f"cannot load checkpoint {checkpoint_dir}: {exc}")
    model.eval()
    return model, tokenizer
