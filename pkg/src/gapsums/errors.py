"""Exception types shared across the package."""


class GapSumsError(Exception):
    """Base class for every error raised by this package."""


class ResourceError(GapSumsError):
    """An enumeration guard would be exceeded."""


class PreconditionError(GapSumsError, ValueError):
    """The hypothesis of a bound does not hold for the given input."""


class ModulusMismatchError(GapSumsError, ValueError):
    pass


class UnsupportedModulusError(GapSumsError, ValueError):
    pass


class SamplingError(GapSumsError):
    """Rejection sampling gave up."""

    def __init__(self, message, rejections):
        super().__init__(f"{message} (after {rejections} rejections)")
        self.rejections = rejections


class InvariantViolation(GapSumsError):
    """A proven inequality failed on a concrete witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
