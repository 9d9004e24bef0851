"""Exception hierarchy.

Each class carries the CLI exit code for its failure class so the command
line layer can map errors without a lookup table.
"""


class QRedistError(Exception):
    exit_code = 1


class DimensionCapError(QRedistError):
    """State too large for the configured dimension cap."""

    exit_code = 3


class UnknownSubsystemError(QRedistError, IndexError):
    pass


class NotPositiveSemidefiniteError(QRedistError, ValueError):
    pass


class IncompatibleOperatorsError(QRedistError, ValueError):
    pass


class InvalidStateError(QRedistError, ValueError):
    """Malformed amplitudes, dims or density matrix."""


class RolesOverlapError(QRedistError, ValueError):
    pass


class InvalidPartitionError(QRedistError, ValueError):
    pass


class NotPureError(QRedistError, ValueError):
    """Global state must be pure."""

    exit_code = 4


class TaskMismatchError(QRedistError, ValueError):
    """Partition does not describe the requested special case."""


class InvalidSplitError(QRedistError, ValueError):
    exit_code = 2


class ParseError(QRedistError, ValueError):
    """Error while reading a ``.qsv`` document; reports line and column."""

    exit_code = 2

    def __init__(self, message, line=0, column=0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class DuplicateKetError(ParseError):
    pass


class IndexRangeError(ParseError):
    pass


class NormalizationError(ParseError):
    pass


class UnknownRoleError(ParseError):
    pass
