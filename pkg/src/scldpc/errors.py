"""Exception types shared across the library."""


class ScldpcError(Exception):
    """Base class for all library errors."""


class ParameterError(ScldpcError, ValueError):
    """Invalid code parameters or operation arguments."""


class DimensionError(ScldpcError, ValueError):
    """Mismatched vector/matrix dimensions."""


class StateError(ScldpcError, RuntimeError):
    """Operation called on an object in the wrong state or out of order."""


class SingularMatrixError(ScldpcError):
    """Dense GF(2) system has no unique solution."""


class TerminationError(ScldpcError):
    """Termination stage cannot proceed (singular termination block)."""


class RankRepairError(ScldpcError):
    """Rank repair exhausted its attempt budget."""


class ParseError(ScldpcError, ValueError):
    """Malformed input file; message carries location diagnostics."""
