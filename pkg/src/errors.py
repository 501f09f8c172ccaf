"""Exception hierarchy for the verifier."""


class VerificationError(Exception):
    """Base class for every error raised by the verifier."""


class InsufficientOrderError(VerificationError):
    """A comparison or truncation asked for more precision than a series carries."""


class PreconditionError(VerificationError, ValueError):
    """An operation was called with arguments outside its domain."""


class RingError(VerificationError):
    """An identity needs the number field but a rational-only run was requested."""


class ExpressionParseError(VerificationError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownIdentityError(VerificationError, KeyError):
    def __str__(self):
        return f"unknown identity id: {self.args[0]!r}" if self.args else "unknown identity id"


class SampleRejectedError(VerificationError):
    """A numeric sample sits too close to a zero of a denominator."""


class ConfigError(VerificationError):
    pass
