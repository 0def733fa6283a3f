"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid user-supplied data: malformed files, bad dimensions, out-of-range parameters."""


class NumericalError(RuntimeError):
    """A solve produced non-finite values; carries stage/iteration context in the message."""
