"""Exception hierarchy for equichain.

All errors derive from ``ValueError`` so callers that only care about bad input
can catch that, while the CLI maps each family to an exit code.
"""

from typing import Any, Optional


class EquichainError(ValueError):
    """Base class for all library errors."""


class DegreeMismatchError(EquichainError):
    """Graded maps or complexes were combined with incompatible degrees."""


class TruncationError(EquichainError):
    """A degree beyond a complex's truncation bound was requested."""

    def __init__(self, complex_name: str, degree: int, bound: Optional[int]):
        self.complex_name = complex_name
        self.degree = degree
        self.bound = bound
        super().__init__(
            f"{complex_name} is truncated at degree {bound}; degree {degree} requested"
        )


class InvalidComplexError(EquichainError):
    """A group, dga or complex violates its defining invariants."""


class ReductionError(EquichainError):
    """Reduction preconditions failed on a concrete element."""

    def __init__(self, message: str, identity: str = "", witness: Any = None):
        self.identity = identity
        self.witness = witness
        super().__init__(message)


class FillerError(EquichainError):
    """A cycle filler or contraction could not lift a cycle."""

    def __init__(self, message: str, witness: Any = None):
        self.witness = witness
        super().__init__(message)


class PipelineError(EquichainError):
    """Input to the equivariant pipeline is unusable."""
