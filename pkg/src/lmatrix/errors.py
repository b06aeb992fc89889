from __future__ import annotations


class LMatrixError(Exception):
    """Base class for every error raised by the library."""

    exit_code: int = 4


class InputError(LMatrixError, ValueError):
    """Malformed input file, ordering, sequence or word."""


class NotSymmetrizable(InputError):
    pass


class IndexOutOfRange(InputError):
    pass


class LengthMismatch(InputError):
    pass


class RankTooLarge(InputError):
    pass


class SearchBudgetExceeded(LMatrixError, RuntimeError):
    pass


class WordLengthExceeded(SearchBudgetExceeded):
    pass


class TermBudgetExceeded(SearchBudgetExceeded):
    pass


class InvariantViolation(LMatrixError, RuntimeError):
    """A proved identity failed: always an implementation bug, never a counterexample."""

    exit_code = 3


class NotSignCoherent(InvariantViolation):
    pass
