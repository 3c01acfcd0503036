"""Error types shared across the package.

Each error class carries the process exit code used by the command line
interface, so library failures map onto stable, scriptable exit statuses.
"""


class TorusKError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class SchemaError(TorusKError):
    """A scenario file or preset definition is malformed."""

    exit_code = 2


class GroupClosureError(TorusKError):
    """Generator closure exceeded the configured order bound."""

    exit_code = 3


class NonCellularError(TorusKError):
    """The group action is not cellular on the arrangement complex."""

    exit_code = 4


class InvariantViolation(TorusKError):
    """An internal consistency check failed (bad input or a real bug)."""

    exit_code = 5


class UnsupportedDimension(TorusKError):
    """Ambient dimension outside the supported range."""

    exit_code = 6
