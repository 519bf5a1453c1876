"""Exception hierarchy. Each error carries the process exit code the CLI reports."""


class BlockThresholdError(Exception):
    exit_code: int = 3


class SizingError(BlockThresholdError, ValueError):
    """Length or grid size is not an admissible power of two."""


class StructureError(BlockThresholdError, ValueError):
    """Coefficient levels have the wrong sizes or shapes do not match."""


class DomainError(BlockThresholdError, ValueError):
    """A numeric argument lies outside the range the operation is defined on."""


class ConfigurationError(BlockThresholdError, ValueError):
    exit_code = 2


class CapabilityError(BlockThresholdError):
    """Input is valid but too large for an exhaustive routine."""


class DegenerateError(BlockThresholdError, ValueError):
    pass


class InvariantViolation(BlockThresholdError, AssertionError):
    exit_code = 4
