"""Shared exception types."""


class DimensionMismatch(ValueError):
    """Operands live in different ambient dimensions."""


class CapacityError(RuntimeError):
    """An object would exceed a configured size cap."""


class SearchTimeout(RuntimeError):
    """A backtracking search hit its deadline; the result is indeterminate."""


class Graph6ParseError(ValueError):
    """Malformed graph6/sparse6 input."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class NotSpanningError(ValueError):
    """A connection set does not span its ambient space (graph disconnected)."""


class QuotientLoopError(ValueError):
    """A coset of the quotient subgroup contains an edge."""

    def __init__(self, message: str, coset_rep: int):
        super().__init__(message)
        self.coset_rep = coset_rep
