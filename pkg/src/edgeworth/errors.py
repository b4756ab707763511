"""Exception types shared across the package."""


class EdgeworthError(Exception):
    """Base class for package errors."""


class DomainError(EdgeworthError, ValueError):
    """Argument outside a function's mathematical domain."""


class InvalidProfileError(EdgeworthError, ValueError):
    """A moment profile violates one of its invariants (named in args)."""


class SettingMismatchError(EdgeworthError, ValueError):
    """Regularity assumption incompatible with the profile's setting."""


class QuadratureError(EdgeworthError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class ConvolutionLimitError(EdgeworthError, RuntimeError):
    """Exact convolution would exceed the state budget."""


class NotFoundError(EdgeworthError, RuntimeError):
    """A search (e.g. the uninformative-size scan) found no answer."""
