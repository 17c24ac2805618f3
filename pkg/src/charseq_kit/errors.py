"""Exception and warning types shared across the package."""


class InputError(ValueError):
    """Invalid input data: malformed specs, violated preconditions."""


class CollisionError(InputError):
    """An evaluation point coincides with (or is too close to) a sequence point."""


class NumericError(RuntimeError):
    """A computation could not produce a trustworthy result (non-convergence,
    underflow past the guard, empty summation window)."""


class NearCollisionWarning(UserWarning):
    """An evaluation point is within 1e-3 of the local gap scale of a sequence
    point; logarithmic terms are large but still computed."""
