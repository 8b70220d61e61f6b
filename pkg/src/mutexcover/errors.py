"""Exception types shared across the package."""


class MutexCoverError(Exception):
    """Base class for all package errors."""


class InputError(MutexCoverError):
    """Malformed caller input: bad edge, unknown vertex, bad file."""


class EncodingError(MutexCoverError):
    """A covering cannot be compiled (e.g. a vertex without a symbol)."""


class PddlError(MutexCoverError):
    """PDDL syntax or unsupported-feature error."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class PlanningError(MutexCoverError):
    """Planning-side semantic error (e.g. unreachable goal fluent)."""


class SolverError(MutexCoverError):
    """The external solver failed or produced unparseable output."""


class NoPlanError(MutexCoverError):
    """No plan exists within the configured makespan cap."""
