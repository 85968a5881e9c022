"""Render documents into marker-annotated text and parse such text back.

The marker token inventory is fixed and treated as reserved vocabulary:
sentence text containing a literal token is rejected at render time rather
than silently escaped. Markers always wrap whole sentences, separated from
the sentence text by single spaces; nesting is never produced and never
accepted.
"""

from __future__ import annotations

import enum
import re

from .corpus import ArgRole, Document
from .errors import DataError, MarkerError

DEFAULT_SEPARATOR = " "

BINARY_OPEN = "<IRC>"
BINARY_CLOSE = "</IRC>"

FINEGRAINED_TOKENS: dict[ArgRole, tuple[str, str]] = {
    ArgRole.ISSUE: ("<Issue>", "</Issue>"),
    ArgRole.REASON: ("<Reason>", "</Reason>"),
    ArgRole.CONCLUSION: ("<Conclusion>", "</Conclusion>"),
}

# Full reserved inventory, bit-exact.
MARKER_TOKENS = (
    BINARY_OPEN,
    BINARY_CLOSE,
    "<Issue>",
    "</Issue>",
    "<Reason>",
    "</Reason>",
    "<Conclusion>",
    "</Conclusion>",
)

_TOKEN_RE = re.compile("|".join(re.escape(t) for t in MARKER_TOKENS))

# Role recovered for <IRC>-wrapped sentences when parsing binary text; the
# binary scheme only preserves argument presence, not the specific role.
BINARY_PLACEHOLDER_ROLE = ArgRole.REASON


class MarkerScheme(enum.Enum):
    RAW = "raw"
    BINARY = "binary"
    FINEGRAINED = "finegrained"


def find_marker_token(text: str) -> str | None:
    """Return the first reserved marker token occurring in ``text``, if any."""
    m = _TOKEN_RE.search(text)
    return m.group(0) if m else None


def strip_markers(text: str) -> tuple[str, int]:
    """Remove every reserved marker token from ``text``.

    Returns the whitespace-normalized remainder and the number of tokens
    removed. Used both for the binary/fine-grained -> raw equivalence and to
    sanitize generated candidates that hallucinate marker vocabulary.
    """
    stripped, n = _TOKEN_RE.subn(" ", text)
    return " ".join(stripped.split()), n


def _wrap_tokens(scheme: MarkerScheme, role: ArgRole) -> tuple[str, str] | None:
    if scheme is MarkerScheme.RAW or not role.is_argumentative:
        return None
    if scheme is MarkerScheme.BINARY:
        return BINARY_OPEN, BINARY_CLOSE
    return FINEGRAINED_TOKENS[role]


def render(doc: Document, scheme: MarkerScheme, separator: str = DEFAULT_SEPARATOR) -> str:
    """Render ``doc`` as marked text under ``scheme``.

    Sentences are joined by ``separator``; argumentative sentences are wrapped
    in the scheme's tokens with single spaces between token and text. Raises
    :class:`DataError` if any sentence text contains a reserved token.
    """
    units = []
    for sentence in doc.sentences:
        token = find_marker_token(sentence.text)
        if token is not None:
            raise DataError(
                f"document {doc.doc_id!r} sentence {sentence.index} contains "
                f"reserved marker token {token!r}"
            )
        pair = _wrap_tokens(scheme, sentence.role)
        if pair is None:
            units.append(sentence.text)
        else:
            units.append(f"{pair[0]} {sentence.text} {pair[1]}")
    return separator.join(units)


def _scheme_tokens(scheme: MarkerScheme) -> dict[str, tuple[str, ArgRole, bool]]:
    """token -> (matching close token, recovered role, is_open)."""
    if scheme is MarkerScheme.BINARY:
        return {
            BINARY_OPEN: (BINARY_CLOSE, BINARY_PLACEHOLDER_ROLE, True),
            BINARY_CLOSE: ("", ArgRole.NON_ARGUMENT, False),
        }
    if scheme is MarkerScheme.FINEGRAINED:
        table = {}
        for role, (open_tok, close_tok) in FINEGRAINED_TOKENS.items():
            table[open_tok] = (close_tok, role, True)
            table[close_tok] = ("", ArgRole.NON_ARGUMENT, False)
        return table
    return {}


def parse(
    marked_text: str,
    scheme: MarkerScheme,
    sentence_boundaries: list[str] | None = None,
    *,
    separator: str = DEFAULT_SEPARATOR,
) -> list[tuple[str, ArgRole]]:
    """Parse marker-annotated text back into (sentence text, role) pairs.

    When ``sentence_boundaries`` (the raw sentence texts, in order) is given,
    the parse is anchored to them and recovers every sentence exactly; this is
    the inverse of :func:`render`. Without boundaries, each maximal unmarked
    run is treated as a single sentence, which is only exact when no two
    unmarked sentences are adjacent.

    Binary markers recover :data:`BINARY_PLACEHOLDER_ROLE` for wrapped
    sentences (the scheme does not encode the specific role).

    Raises:
        MarkerError: unbalanced, nested or mismatched marker tokens, with the
            byte offset of the offending token.
    """
    if sentence_boundaries is not None:
        return _parse_with_boundaries(marked_text, scheme, sentence_boundaries, separator)
    return _parse_freeform(marked_text, scheme, separator)


def _match_open(text: str, pos: int, table) -> tuple[str, str, ArgRole] | None:
    for token, (close_tok, role, is_open) in table.items():
        if is_open and text.startswith(token, pos):
            return token, close_tok, role
    return None


def _match_any_token(text: str, pos: int) -> str | None:
    m = _TOKEN_RE.match(text, pos)
    return m.group(0) if m else None


def _parse_with_boundaries(
    text: str, scheme: MarkerScheme, boundaries: list[str], separator: str
) -> list[tuple[str, ArgRole]]:
    table = _scheme_tokens(scheme)
    out: list[tuple[str, ArgRole]] = []
    pos = 0
    for i, boundary in enumerate(boundaries):
        if i > 0:
            if not text.startswith(separator, pos):
                raise MarkerError(
                    f"expected sentence separator before sentence {i}", pos
                )
            pos += len(separator)
        opened = _match_open(text, pos, table)
        if opened is not None:
            open_tok, close_tok, role = opened
            open_pos = pos
            pos += len(open_tok)
            if not text.startswith(" ", pos):
                raise MarkerError(f"missing space after {open_tok}", pos)
            pos += 1
            if _match_open(text, pos, table) is not None:
                raise MarkerError("nested marker", pos)
            if not text.startswith(boundary, pos):
                raise MarkerError(f"sentence {i} text does not match boundary", pos)
            pos += len(boundary)
            if not text.startswith(" ", pos):
                raise MarkerError(f"unbalanced marker {open_tok}", open_pos)
            pos += 1
            actual_close = _match_any_token(text, pos)
            if actual_close is None:
                raise MarkerError(f"unbalanced marker {open_tok}", open_pos)
            if actual_close != close_tok:
                raise MarkerError(
                    f"close token {actual_close} does not match {open_tok}", pos
                )
            pos += len(actual_close)
            out.append((boundary, role))
        else:
            if not text.startswith(boundary, pos):
                raise MarkerError(f"sentence {i} text does not match boundary", pos)
            pos += len(boundary)
            out.append((boundary, ArgRole.NON_ARGUMENT))
    if pos != len(text):
        raise MarkerError("trailing text after last sentence", pos)
    return out


def _parse_freeform(
    text: str, scheme: MarkerScheme, separator: str
) -> list[tuple[str, ArgRole]]:
    table = _scheme_tokens(scheme)
    out: list[tuple[str, ArgRole]] = []
    if scheme is MarkerScheme.RAW:
        if text:
            out.append((text, ArgRole.NON_ARGUMENT))
        return out

    scheme_re = re.compile("|".join(re.escape(t) for t in table))
    open_tok: str | None = None
    open_pos = 0
    expected_close = ""
    open_role = ArgRole.NON_ARGUMENT
    last_end = 0

    def emit_plain(chunk: str, at_start: bool, at_end: bool) -> None:
        # Drop the joining separators surrounding marked units, then treat the
        # remainder (if any) as one sentence.
        if not at_start and chunk.startswith(separator):
            chunk = chunk[len(separator):]
        if not at_end and chunk.endswith(separator):
            chunk = chunk[: -len(separator)] if separator else chunk
        if chunk:
            out.append((chunk, ArgRole.NON_ARGUMENT))

    for m in scheme_re.finditer(text):
        token = m.group(0)
        _, role, is_open = table[token]
        if is_open:
            if open_tok is not None:
                raise MarkerError("nested marker", m.start())
            emit_plain(text[last_end:m.start()], at_start=last_end == 0, at_end=False)
            open_tok, expected_close, open_role = token, table[token][0], role
            open_pos = m.start()
        else:
            if open_tok is None:
                raise MarkerError(f"close token {token} without open", m.start())
            if token != expected_close:
                raise MarkerError(
                    f"close token {token} does not match {open_tok}", m.start()
                )
            inner = text[last_end:m.start()]
            # render() puts single spaces between tokens and sentence text
            if not (inner.startswith(" ") and inner.endswith(" ")):
                raise MarkerError("marker tokens must be space-separated from text", m.start())
            out.append((inner[1:-1], open_role))
            open_tok = None
        last_end = m.end()
    if open_tok is not None:
        raise MarkerError(f"unbalanced marker {open_tok}", open_pos)
    emit_plain(text[last_end:], at_start=last_end == 0, at_end=True)
    return out
