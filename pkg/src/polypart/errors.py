"""Exception hierarchy. Every error carries one CLI category."""


class PolypartError(Exception):
    category = "PRECOND"


class ParseError(PolypartError, ValueError):
    category = "PARSE"


class PreconditionError(PolypartError, ValueError):
    category = "PRECOND"


class DimensionMismatch(PreconditionError):
    pass


class CapacityTooSmall(PreconditionError):
    """Lifted affine hull is too small to bisect the requested number of sets."""

    def __init__(self, capacity, n_sets):
        super().__init__(f"lifted capacity {capacity} < {n_sets} sets")
        self.capacity = capacity
        self.n_sets = n_sets


class OracleScopeExceeded(PreconditionError):
    pass


class SearchExhausted(PolypartError, RuntimeError):
    """The randomized bisection search gave up.

    A valid cut always exists, so this is a limitation of the engine,
    not of the input. ``best_imbalance`` is the smallest total excess
    over the per-set budget seen during the search. ``partial`` may
    hold a partially built partition when raised from a driver.
    """

    category = "SEARCH"

    def __init__(self, message, best_imbalance=None, partial=None):
        super().__init__(message)
        self.best_imbalance = best_imbalance
        self.partial = partial


class NoCutFound(SearchExhausted):
    pass
