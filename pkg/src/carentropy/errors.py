"""Exception types shared across the package."""


class CarError(ValueError):
    """Base class for domain errors raised by carentropy."""


class NotAStateError(CarError):
    """A matrix claimed to be a density has a genuinely negative eigenvalue."""


class CapacityError(CarError):
    """A purification partner region is too small for the requested rank."""


class ExtensionError(CarError):
    """A state extension does not exist for the given inputs."""
