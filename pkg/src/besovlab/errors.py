"""Exception types shared across the package."""


class CapacityError(RuntimeError):
    """A requested dyadic level or spectrum does not fit the grid's lattice."""


class CheckFailure(RuntimeError):
    """A check-style command ran to completion but its verdict is 'fail'."""
