"""Exception hierarchy shared by the engines and the command line tool."""


class ZigzagError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(ZigzagError, ValueError):
    """A parameter is outside its valid domain.

    The offending parameter name is stored on ``param`` so the CLI can
    report it.
    """

    def __init__(self, param, message):
        super().__init__(f"{param}: {message}")
        self.param = param


class OutOfScopeError(InvalidParameterError):
    """Parameters fall in the ``lambda = -2 alpha2`` (``alpha1 != 0``) case,
    which needs the extended BCH treatment and is not implemented."""


class RegimeDispatchError(ZigzagError, ValueError):
    """An evaluator was called in a regime it does not cover."""


class SingularPointError(ZigzagError, ArithmeticError):
    """A closed-form expression hits a pole at the reported distance."""

    def __init__(self, message, z=None):
        super().__init__(message if z is None else f"{message} (Z={z!r})")
        self.z = z


class StiffnessError(ZigzagError, RuntimeError):
    """The adaptive integrator drove its step below the underflow floor."""


class ResourceError(ZigzagError, MemoryError):
    """A dense oracle was requested beyond its dimension cap."""
