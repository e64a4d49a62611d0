"""Exception types shared across the package."""


class TreeBesovError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(TreeBesovError):
    """Input shape is not a dyadic signal or image."""


class ParameterError(TreeBesovError):
    """A parameter is outside its admissible range."""


class CapacityError(TreeBesovError):
    """Problem size exceeds a hard limit of the requested routine."""


class DivergenceError(TreeBesovError):
    """An iterative solver left its stability region."""
