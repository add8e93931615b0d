"""Exception types shared across the package."""


class NonInvertibleError(ValueError):
    """A series operation needed a unit leading term and did not get one."""


class GenericityError(ValueError):
    """A linear form in the torus weights vanished where it must not."""


class StabilizationError(ValueError):
    """A legged configuration has not stabilized inside the requested box."""


class ExtentCapError(RuntimeError):
    """A Markov chain grew past its configured extent cap."""


class PrecisionGuardError(ValueError):
    """A floating-point routine was called outside its precision guard."""
