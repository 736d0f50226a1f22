"""Exception hierarchy shared by the pipeline modules."""


class MorseBridgeError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MorseBridgeError, ValueError):
    pass


class ConvergenceError(MorseBridgeError, ArithmeticError):
    pass


class StructureError(MorseBridgeError):
    """A lattice or poset violates its defining axioms."""


class GridError(MorseBridgeError, ValueError):
    pass


class EmptyImageError(MorseBridgeError):
    pass


class CapExceededError(MorseBridgeError):
    """Raised when an invariant-set enumeration would exceed its cap.

    ``generators`` holds the join-irreducible blocks (one forward closure
    per strongly connected component), which is all that Morse tiling needs.
    """

    def __init__(self, message, generators=()):
        super().__init__(message)
        self.generators = tuple(generators)


class NotInvariantError(MorseBridgeError):
    def __init__(self, message, block=None, edge=None):
        super().__init__(message)
        self.block = block
        self.edge = edge


class NotClosedError(MorseBridgeError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class ConleyError(MorseBridgeError):
    pass


class PipelineError(MorseBridgeError):
    """Wraps an upstream error with the name of the stage that raised it."""

    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause
