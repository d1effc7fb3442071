"""Exception types shared across the package."""


class BratteliError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(BratteliError, ValueError):
    """An argument violates a documented precondition."""


class CapacityError(BratteliError):
    """An enumeration would exceed the caller-supplied size cap."""


class UnsupportedInputError(BratteliError):
    """Structurally valid input outside the supported class (e.g. a
    non-primitive matrix passed to the Perron solver)."""
