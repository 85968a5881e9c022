"""Local ROUGE-2 F1 for validation checkpoint selection.

Small on purpose; the bridge must not import the reranker's engine, and
checkpoint selection only needs a consistent relative score.
"""

from __future__ import annotations

import re
from collections import Counter

_WORD_RE = re.compile(r"[0-9a-z]+")


def _bigrams(text: str) -> Counter:
    tokens = _WORD_RE.findall(text.lower())
    return Counter(zip(tokens, tokens[1:]))


def rouge2_f1(candidate: str, reference: str) -> float:
    cand = _bigrams(candidate)
    ref = _bigrams(reference)
    overlap = sum(min(count, ref[gram]) for gram, count in cand.items())
    total_cand = sum(cand.values())
    total_ref = sum(ref.values())
    if overlap == 0 or total_cand == 0 or total_ref == 0:
        return 0.0
    p = overlap / total_cand
    r = overlap / total_ref
    return 2 * p * r / (p + r)
