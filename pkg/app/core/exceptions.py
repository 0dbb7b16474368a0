"""
Exception hierarchy of the engine.

Every user-facing error carries the exit code the command line maps it to.
"""

from typing import Optional, Sequence, Tuple


class TangencyError(Exception):
    """Base class of all engine errors."""

    exit_code: int = 1

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class PolynomialParseError(TangencyError):
    """The polynomial string does not follow the input grammar."""

    exit_code = 2


class UnsupportedInputError(TangencyError):
    """Input outside the supported problem class."""

    exit_code = 3


class LICQFailureError(TangencyError):
    """The constraint gradient vanishes at a real point of the constraint curve."""

    exit_code = 4

    def __init__(self, message: str, witness_box: Optional[Tuple[Tuple[str, str], Tuple[str, str]]] = None):
        super().__init__(message)
        self.witness_box = witness_box


class TruncationExhaustedError(TangencyError):
    """Series expansion still ambiguous after the escalation cap."""

    exit_code = 5

    def __init__(self, message: str, prefix: Sequence[str] = ()):
        super().__init__(message)
        self.prefix = list(prefix)


class BranchCollisionError(TruncationExhaustedError):
    """Two or more branches still share their expansion at the current depth."""


class DegenerateInputError(TangencyError, ValueError):
    """A kernel operation received the zero polynomial where it is not allowed."""


class PreconditionError(TangencyError, ValueError):
    """An operation precondition does not hold."""


class InternalConsistencyError(TangencyError, RuntimeError):
    """Two independent computations disagree. Always a bug."""

    exit_code = 70
