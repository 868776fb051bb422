"""Exception types raised by the library."""


class SizeCapError(ValueError):
    """A requested object exceeds the supported size limits."""


class NotAUnitError(ValueError):
    """An operation needs an invertible element and got a non-unit."""


class NotRegularError(ValueError):
    """A multiplicative character factors through the norm."""


class TrivialCharacterError(ValueError):
    """A construction needs a nontrivial character."""


class ConstructionError(RuntimeError):
    """An internal construction produced data violating its own invariants."""


class WindowError(ValueError):
    """A lattice computation does not fit in the truncation window."""
