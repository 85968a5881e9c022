"""Self-contained ROUGE-1 / ROUGE-2 / ROUGE-L engine.

Backs both the candidate-ranking score and the final evaluation. The
tokenizer lowercases and splits on maximal runs of non-alphanumeric
characters; an optional Porter stemming pass is off by default. ROUGE-L is
the summary-level single-sequence LCS variant; F-measure is plain F1.
Internal values stay in [0, 1]; reports scale them to 0-100.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from . import _porter

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)

TokenSeq = list


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, overlap: float, cand_total: int, ref_total: int) -> "RougeScore":
        p = overlap / cand_total if cand_total > 0 else 0.0
        r = overlap / ref_total if ref_total > 0 else 0.0
        return cls(precision=p, recall=r, f1=f1_score(p, r))


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def tokenize(text: str, stem: bool = False) -> TokenSeq:
    """Lowercase and split on non-alphanumeric runs; optional stemming pass."""
    tokens = _WORD_RE.findall(text.lower())
    if stem:
        tokens = [_porter.stem(t) for t in tokens]
    return tokens


def ngram_counts(tokens: TokenSeq, n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate: TokenSeq, reference: TokenSeq, n: int) -> RougeScore:
    """Clipped n-gram overlap precision/recall/F1.

    Overlap counts each n-gram at most min(candidate count, reference count)
    times; an empty n-gram bag zeroes the corresponding component.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    cand_counts = ngram_counts(candidate, n)
    ref_counts = ngram_counts(reference, n)
    overlap = sum(min(count, ref_counts[gram]) for gram, count in cand_counts.items())
    return RougeScore.from_counts(
        overlap, cand_total=sum(cand_counts.values()), ref_total=sum(ref_counts.values())
    )


def lcs_len(a: TokenSeq, b: TokenSeq) -> int:
    """Length of the longest common subsequence.

    Bit-parallel row recurrence; the bitmask table is built over the shorter
    sequence so a short candidate against a 60k-word document costs one
    machine-word-ish big-int op per long-side token.
    """
    if len(a) < len(b):
        a, b = b, a
    n = len(b)
    if n == 0 or len(a) == 0:
        return 0

    positions: dict = {}
    for i, tok in enumerate(b):
        positions.setdefault(tok, []).append(i)
    masks = {}
    for tok, idxs in positions.items():
        bits = bytearray((n + 7) // 8)
        for i in idxs:
            bits[i >> 3] |= 1 << (i & 7)
        masks[tok] = int.from_bytes(bits, "little")

    full = (1 << n) - 1
    v = full  # a set bit marks a reference position not yet consumed by the LCS
    for tok in a:
        m = masks.get(tok)
        if m is None:
            continue
        u = v & m
        v = ((v + u) | (v & ~m)) & full
    return n - v.bit_count()


def rouge_l(candidate: TokenSeq, reference: TokenSeq) -> RougeScore:
    """Summary-level LCS precision/recall/F1 over whole token sequences."""
    lcs = lcs_len(candidate, reference)
    return RougeScore.from_counts(lcs, cand_total=len(candidate), ref_total=len(reference))
