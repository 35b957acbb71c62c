"""Exception types shared across the package."""


class QBlocksError(Exception):
    """Base class for computational failures (as opposed to usage errors)."""


class GroupTooLargeError(QBlocksError):
    """Weyl group enumeration would exceed the configured bound."""


class TruncationError(QBlocksError):
    """A truncation bound could not be certified as complete."""


class AmbiguousMatchError(QBlocksError):
    """Linear matching produced multiple exact solutions.

    Carries a basis of the solution space of the homogeneous system so the
    caller can inspect the ambiguity.
    """

    def __init__(self, message, nullspace_basis):
        super().__init__(message)
        self.nullspace_basis = nullspace_basis
