"""Error hierarchy shared by services and the command line."""


class SecrecyLabError(ValueError):
    """Base class for domain rule violations."""


class InvalidChannelError(SecrecyLabError):
    """Channel parameters or transition matrix are not acceptable."""


class InvalidBudgetError(SecrecyLabError):
    """Output-alphabet budget mu is odd or below 2."""


class InvalidCodeError(SecrecyLabError):
    """Block length, profile or generator polynomial is inconsistent."""


class InfeasibleDesignError(SecrecyLabError):
    """No index partition satisfies the requested constraints."""


class FieldError(SecrecyLabError):
    """GF(2^k) operand problem (mismatched modulus, zero inverse)."""


class DecodingFailure(SecrecyLabError):
    """A decoded block cannot be inverted."""


class EnumerationBudgetError(SecrecyLabError):
    """Exhaustive enumeration would exceed the joint-state cap."""


class InvalidConfigError(SecrecyLabError):
    """Simulation or command-line configuration is invalid."""
