"""Exception types shared across the squarescope modules."""


class SquarescopeError(Exception):
    """Base class for all library-specific errors."""


class PointOnLoop(SquarescopeError):
    """A probe point sits on (or too close to) the loop it is tested against."""


class NotSimple(SquarescopeError):
    """A closed curve self-intersects."""


class DegenerateSamples(SquarescopeError):
    """Consecutive curve samples coincide or the sample count is too small."""


class ContinuumSuspected(SquarescopeError):
    """Refined torus zeros chain together, suggesting a one-parameter family.

    Carries the size of the largest chain and the grid that produced it so
    callers can report or re-run at a different resolution.
    """

    def __init__(self, chain_size: int, grid: int):
        self.chain_size = chain_size
        self.grid = grid
        super().__init__(
            f"{chain_size} refined zeros form a chain at grid {grid}; "
            "the zero set looks one-dimensional"
        )


class OnBoundary(SquarescopeError):
    """A torus point lies on the boundary between the two off-diagonal regions."""


class ZeroOnLoop(SquarescopeError):
    """The sampled loop passes through the origin; its winding is undefined."""

    def __init__(self, min_norm: float, at_param: float):
        self.min_norm = min_norm
        self.at_param = at_param
        super().__init__(
            f"loop norm drops to {min_norm:.3e} at parameter {at_param:.6f}"
        )


class BranchJump(SquarescopeError):
    """A logarithmic lift increment is too large to pick a fiber unambiguously."""


class OnPath(SquarescopeError):
    """A query point lies on the lifted path, so region membership is undefined."""


class TruncationTooShort(SquarescopeError):
    """The lifted path is truncated too early to decide region membership."""


class WindowExhausted(SquarescopeError):
    """No admissible integer index was certified inside the scan window."""


class ZeroElement(SquarescopeError):
    """A split pair contains zero, which has no argument."""


class DegenerateParams(SquarescopeError):
    """Square corner parameters coincide; the cyclic order is undefined."""


class EmptyInterval(SquarescopeError):
    """Rounding produced an empty time interval where a half-line was expected."""


class InsufficientSamples(SquarescopeError):
    """Too few samples to trace a region boundary densely enough to trust."""
