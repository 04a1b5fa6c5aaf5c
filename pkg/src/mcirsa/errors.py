"""Exception types raised by the simulator."""


class InvalidParameterError(ValueError):
    """A parameter is outside its admissible range."""


class SingularSystemError(ValueError):
    """A Hermitian solve failed because the matrix is not positive definite."""


class NotTransmittingError(ValueError):
    """The queried user did not transmit in the requested resource block."""


class AlreadyDecodedError(ValueError):
    """The queried user was already removed by successive interference cancellation."""
