"""Shared exception types.

Anything raised as a :class:`DataError` means the *input* was bad, not the
code; the CLI maps it to exit code 2 and the service to HTTP 400.
"""


class DataError(Exception):
    """Invalid or inconsistent input data."""


class CorpusError(DataError):
    """Schema or invariant violation in a corpus file.

    Carries the file path and 1-based line number when known so callers can
    point at the offending record.
    """

    def __init__(self, message: str, *, path: str | None = None, line_no: int | None = None):
        self.path = path
        self.line_no = line_no
        prefix = ""
        if path is not None:
            prefix += str(path)
        if line_no is not None:
            prefix += f":{line_no}"
        super().__init__(f"{prefix}: {message}" if prefix else message)


class MarkerError(DataError):
    """Marker grammar violation (unbalanced, nested, or mismatched tokens).

    ``offset`` is the byte offset of the offending token in the marked text.
    """

    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} (offset {offset})")
