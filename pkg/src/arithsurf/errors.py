"""Exception hierarchy shared by all modules; the CLI maps these to exit codes."""


class ArithSurfError(Exception):
    """Base class."""


class ModelError(ArithSurfError, ValueError):
    """Malformed or internally invalid input data."""


class PreconditionError(ArithSurfError, ValueError):
    """An operation was called outside its domain."""


class InconsistentModel(PreconditionError):
    """The input contradicts a structural consequence of its own data."""


class ConditionFailure(PreconditionError):
    """A combinatorial condition failed; ``clause`` names the first violated clause."""

    def __init__(self, clause: str, witness: str, message: str = ""):
        self.clause = clause
        self.witness = witness
        super().__init__(message or f"clause {clause} fails at {witness}")
