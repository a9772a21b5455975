"""Exception hierarchy shared by the pipeline stages."""

from __future__ import annotations


class SparseCountError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SparseCountError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedScale(SparseCountError):
    """An oracle-grade routine was asked to work beyond its size guard."""


class PipelineError(SparseCountError):
    """The condenser could not produce a decomposition (never a wrong answer)."""


class PipelineStalled(PipelineError):
    """The modulator loop could neither shrink the graph nor certify a null instance."""


class DecompositionFailure(PipelineError):
    """A bounded-width decomposition that should exist was not found."""


class InvariantBreach(SparseCountError):
    """An internal consistency check failed; indicates a bug, not bad input."""


class CompactorFormatError(SparseCountError, ValueError):
    pass


class ChecksumError(CompactorFormatError):
    pass
