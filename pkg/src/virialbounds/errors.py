"""Exception types shared across the package."""


class CapacityError(Exception):
    """Requested problem size exceeds the exhaustive-enumeration caps."""


class TemperednessError(ArithmeticError):
    """A radial integral failed to converge: the potential tail is not integrable."""


class UnsupportedPotentialError(ValueError):
    """The operation needs potential constants that are not available."""
