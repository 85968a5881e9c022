"""Marker rendering for model inputs.

Deliberately re-implemented here (a dozen lines) instead of importing the
reranker package: the bridge talks to it through files only. Token strings
must stay bit-identical to the reranker's inventory.
"""

from __future__ import annotations

from . import GenBridgeError

BINARY = ("<IRC>", "</IRC>")
FINEGRAINED = {
    "Issue": ("<Issue>", "</Issue>"),
    "Reason": ("<Reason>", "</Reason>"),
    "Conclusion": ("<Conclusion>", "</Conclusion>"),
}

MARKER_TOKENS = tuple(BINARY) + tuple(t for pair in FINEGRAINED.values() for t in pair)


def render_input(sentences: list[dict], input_format: str, separator: str = " ") -> str:
    """Join sentence texts, wrapping argumentative ones per the format."""
    units = []
    for sent in sentences:
        text, role = sent["text"], sent["role"]
        if input_format == "raw" or role == "NonArgument":
            units.append(text)
        elif input_format == "binary":
            units.append(f"{BINARY[0]} {text} {BINARY[1]}")
        elif input_format == "finegrained":
            open_tok, close_tok = FINEGRAINED[role]
            units.append(f"{open_tok} {text} {close_tok}")
        else:
            raise GenBridgeError(f"unknown input format {input_format!r}")
    return separator.join(units)
