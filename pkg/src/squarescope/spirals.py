"""One-dimensional origin paths: relations, logarithmic lifts, split pairs.

An origin path is a sampled nonvanishing complex path p(t).  A multiplier
relation ties two path values through x = alpha * y; paths that avoid all
such ties are the objects of interest.  Lifting through exp(2*pi*i*.)
turns multiplicative questions into additive ones in the upper half-plane,
where integer offsets, the even-parity region U, and split pairs provide
a small arithmetic calculus with a subtractive-Euclid flavor.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import (
    BranchJump,
    OnPath,
    TruncationTooShort,
    WindowExhausted,
    ZeroElement,
)

_TWO_PI = 2.0 * np.pi


@dataclass
class OriginPath1D:
    """A sampled nonvanishing path in the punctured plane.

    t must be strictly increasing and every value nonzero.
    """

    t: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.z = np.asarray(self.z, dtype=complex)
        if self.t.ndim != 1 or self.t.shape != self.z.shape:
            raise ValueError("t and z must be matching 1-d arrays")
        if len(self.t) < 2:
            raise ValueError("need at least two samples")
        if not np.all(np.diff(self.t) > 0):
            raise ValueError("t must be strictly increasing")
        if np.any(self.z == 0):
            raise ValueError("path values must be nonzero")


def spiral_path(x: complex, a: complex, t_max: float, n: int = 2048) -> OriginPath1D:
    """The pure spiral p(t) = x * exp(a t) sampled on [0, t_max]."""
    t = np.linspace(0.0, t_max, n)
    return OriginPath1D(t, x * np.exp(a * t))


@dataclass
class MultiplierRelation:
    """A finite set of nonzero multipliers with modulus at most 1."""

    multipliers: np.ndarray

    def __post_init__(self):
        self.multipliers = np.atleast_1d(np.asarray(self.multipliers, dtype=complex))
        mod = np.abs(self.multipliers)
        if np.any(mod == 0) or np.any(mod > 1.0 + 1e-12):
            raise ValueError("multipliers must be nonzero with |alpha| <= 1")


@dataclass
class RelationCheck:
    """Outcome of :func:`is_relation_avoiding`.

    witness always carries the minimizing (t1, t2, multiplier index), even
    when the path passes, so callers can refine sampling near the close
    call.
    """

    avoiding: bool
    witness: tuple[float, float, int] | None
    min_gap: float


def is_relation_avoiding(
    path: OriginPath1D, rel: MultiplierRelation, tol: float = 1e-6
) -> RelationCheck:
    """Scan all sampled time pairs for a multiplier tie p(t1) = alpha p(t2).

    Every ordered pair of distinct sample times is tried, which covers both
    reading directions of the symmetric relation.  Pairs at identical times
    are excluded: a multiplier of exactly 1 then asks for two distinct
    times with equal values, i.e. injectivity.  The path must be sampled
    densely relative to its variation for the scan to be meaningful; tol is
    an equality tolerance, not a geometric scale.
    """
    z, t = path.z, path.t
    n = len(z)
    best = np.inf
    arg = None
    chunk = max(1, 2_000_000 // n)
    for i0 in range(0, n, chunk):
        zi = z[i0 : i0 + chunk]
        same_t = t[i0 : i0 + chunk, None] == t[None, :]
        for ai, alpha in enumerate(np.atleast_1d(rel.multipliers)):
            d = np.abs(zi[:, None] - alpha * z[None, :])
            d[same_t] = np.inf
            k = int(np.argmin(d))
            row, col = divmod(k, n)
            if d[row, col] < best:
                best = float(d[row, col])
                arg = (float(t[i0 + row]), float(t[col]), ai)
    return RelationCheck(best >= tol, arg, best)


@dataclass
class LiftedPath:
    """A continuous branch ell with exp(2 pi i ell(t)) = p(t)."""

    t: np.ndarray
    ell: np.ndarray
    base: complex


def lift_log(path: OriginPath1D, base: complex, base_tol: float = 1e-6) -> LiftedPath:
    """Lift a nonvanishing path through exp(2 pi i .), starting at ``base``.

    The starting fiber must actually sit over p(0): exp(2 pi i base) has to
    match the first sample within ``base_tol`` relative error.  Each step
    adds the principal logarithm of the value ratio; a step of modulus 0.5
    or more means adjacent fibers are ambiguous and raises
    :class:`BranchJump`.
    """
    z0 = path.z[0]
    if abs(cmath.exp(2j * np.pi * base) - z0) > base_tol * (1.0 + abs(z0)):
        raise ValueError(f"base {base} does not lie over the first path value {z0}")
    ratio = path.z[1:] / path.z[:-1]
    inc = np.log(ratio) / (2j * np.pi)
    big = np.abs(inc) >= 0.5
    if big.any():
        k = int(np.argmax(big))
        raise BranchJump(
            f"lift increment |{inc[k]:.4f}| >= 0.5 between samples {k} and {k + 1}"
        )
    ell = base + np.concatenate([[0.0], np.cumsum(inc)])
    return LiftedPath(path.t.copy(), ell, base)


def in_region_U(
    z: complex,
    lifted: LiftedPath,
    margin: float = 0.25,
    on_tol: float | None = None,
) -> bool:
    """Even-crossing-parity membership left of the lifted path.

    Casts a horizontal ray from z toward Re -> -infinity and counts proper
    crossings with the sampled path; even parity means z belongs to the
    region U that reaches Re = -infinity freely.  The truncation must rise
    at least ``margin`` above Im(z), otherwise crossings beyond the sampled
    tail could change the answer and :class:`TruncationTooShort` is raised.
    Points within ``on_tol`` of the path raise :class:`OnPath`.
    """
    ell = lifted.ell
    zx, zy = z.real, z.imag
    xs, ys = ell.real, ell.imag
    if on_tol is None:
        scale = max(1.0, float(np.abs(ell).max()))
        on_tol = 1e-9 * scale
    # distance to the sampled polyline
    ax, ay = xs[:-1], ys[:-1]
    bx, by = xs[1:], ys[1:]
    dx, dy = bx - ax, by - ay
    L2 = dx * dx + dy * dy
    L2 = np.where(L2 == 0, 1.0, L2)
    s = np.clip(((zx - ax) * dx + (zy - ay) * dy) / L2, 0.0, 1.0)
    d = np.hypot(zx - (ax + s * dx), zy - (ay + s * dy))
    if float(d.min()) <= on_tol:
        raise OnPath(f"query {z} lies on the lifted path")
    if zy + margin > float(ys.max()):
        raise TruncationTooShort(
            f"path rises to Im = {ys.max():.4f}, need margin {margin} above Im(z) = {zy:.4f}"
        )
    straddle = ((ay <= zy) & (by > zy)) | ((by <= zy) & (ay > zy))
    with np.errstate(divide="ignore", invalid="ignore"):
        x_hit = ax + (zy - ay) / (by - ay) * dx
    crossings = int(np.count_nonzero(straddle & (x_hit < zx)))
    return crossings % 2 == 0


def k_index(
    ell_i: LiftedPath | complex, lifted: LiftedPath, window: int = 64
) -> int:
    """Largest integer k in [-window, window] with ell_i(0) + k in region U.

    The first argument may be another lifted path, whose starting value is
    the offset, or that offset given directly.  Scans downward from the top
    of the window; a hit at the very top cannot be certified as the largest
    overall, and no hit at all means the window missed, so both raise
    :class:`WindowExhausted`.  Integer translates that land on the path
    count as not in U.
    """
    offset = complex(ell_i.ell[0]) if isinstance(ell_i, LiftedPath) else complex(ell_i)
    for k in range(window, -window - 1, -1):
        try:
            inside = in_region_U(offset + k, lifted)
        except OnPath:
            continue
        if inside:
            if k == window:
                raise WindowExhausted(
                    f"offset {offset}: membership persists at k = {window}"
                )
            return k
    raise WindowExhausted(f"offset {offset}: no admissible k in [-{window}, {window}]")


# ---------------------------------------------------------------------------
# split pairs


@dataclass(frozen=True)
class SplitPair:
    """An ordered pair in the closed upper half-plane.

    Freshly built pairs normally have strictly positive imaginary parts;
    repeated derivation is allowed to drive one element onto the real axis,
    which is where subtractive chains terminate.
    """

    p: complex
    q: complex

    def __post_init__(self):
        if self.p.imag < 0 or self.q.imag < 0:
            raise ValueError("split pair elements must not lie below the real axis")


def derive(pair: SplitPair) -> SplitPair | None:
    """One subtractive step on a split pair.

    The element with the larger imaginary part absorbs the subtraction:
    (p - q, q) when Im(p) >= Im(q), else (p, q - p).  Returns None when the
    elements coincide, since the difference would leave the half-plane;
    callers treat that as a degenerate, flagged outcome.
    """
    p, q = pair.p, pair.q
    if abs(p - q) <= 1e-15 * max(abs(p), abs(q)):
        return None
    if p.imag >= q.imag:
        return SplitPair(p - q, q)
    return SplitPair(p, q - p)


def is_good(pair: SplitPair) -> bool:
    """Whether arg(p) strictly exceeds arg(q), both taken in [0, pi].

    Raises :class:`ZeroElement` when either element is zero.
    """
    if pair.p == 0 or pair.q == 0:
        raise ZeroElement("split pair contains zero")
    return cmath.phase(pair.p) > cmath.phase(pair.q)


@dataclass
class DerivationRun:
    """A derivation chain with its termination reason."""

    pairs: list[SplitPair]
    reason: str  # "real-element" | "degenerate" | "step-limit"
    steps: int


def derivation_trajectory(
    pair: SplitPair,
    max_steps: int = 100_000,
    real_tol: float | None = None,
    stop_at_real: bool = True,
) -> DerivationRun:
    """Iterate :func:`derive` until an element goes real, or the chain stalls.

    ``real_tol`` is the absolute imaginary-part threshold for calling an
    element real; it defaults to 1e-12 times the starting imaginary scale.
    With ``stop_at_real`` false the chain keeps deriving past real elements
    for exactly ``max_steps`` steps, useful for logging fixed-length runs.
    """
    if real_tol is None:
        real_tol = 1e-12 * max(pair.p.imag, pair.q.imag, 1e-300)
    chain = [pair]
    cur = pair
    for step in range(1, max_steps + 1):
        if stop_at_real and min(abs(cur.p.imag), abs(cur.q.imag)) <= real_tol:
            return DerivationRun(chain, "real-element", step - 1)
        nxt = derive(cur)
        if nxt is None:
            return DerivationRun(chain, "degenerate", step - 1)
        chain.append(nxt)
        cur = nxt
    if stop_at_real and min(abs(cur.p.imag), abs(cur.q.imag)) <= real_tol:
        return DerivationRun(chain, "real-element", max_steps)
    return DerivationRun(chain, "step-limit", max_steps)


# ---------------------------------------------------------------------------
# feasible spiral angles


@dataclass
class SpiralAngle:
    """Feasible common slope for a family of lift offsets."""

    theta: float | None
    feasible: bool
    theta_low: float
    theta_high: float
    violating: tuple[int, int] | None = None


def find_spiral_angle(offsets: list[tuple[complex, int]]) -> SpiralAngle:
    """Angle window compatible with every lift offset and its integer index.

    Each entry (w, k) contributes an upper bound arg(w + k) and a lower
    bound arg(w + k + 1).  With no offsets at all any slope works and the
    vertical pi/2 is returned.  When some lower bound exceeds some upper
    bound the result is infeasible and carries the violating index pair.
    """
    if not offsets:
        return SpiralAngle(np.pi / 2.0, True, 0.0, np.pi)
    highs, lows = [], []
    for w, k in offsets:
        if w + k == 0 or w + k + 1 == 0:
            raise ZeroElement("offset plus index hits zero; its argument is undefined")
        highs.append(cmath.phase(w + k))
        lows.append(cmath.phase(w + k + 1))
    i_high = int(np.argmin(highs))
    j_low = int(np.argmax(lows))
    theta_low, theta_high = lows[j_low], highs[i_high]
    if theta_low <= theta_high and theta_low < np.pi and theta_high > 0.0:
        return SpiralAngle(0.5 * (theta_low + theta_high), True, theta_low, theta_high)
    return SpiralAngle(None, False, theta_low, theta_high, (i_high, j_low))


# ---------------------------------------------------------------------------
# the square relation in C^2 and swept areas


def square_corner_set(x: complex, y: complex) -> tuple[complex, complex]:
    """The two corners completing the complex edge x -> y to a square."""
    d = 1j * (y - x)
    return x + d, y + d


def square_relation_holds(
    x1: complex, y1: complex, x2: complex, y2: complex, tol: float = 1e-9
) -> bool:
    """Whether two complex edges are square-related.

    The relation holds when the set {x1, y1, x2, y2} meets the set of the
    four completed corners {x1 + i(y1-x1), y1 + i(y1-x1), x2 + i(y2-x2),
    y2 + i(y2-x2)} within ``tol``.  Swapping the two edges leaves the
    verdict unchanged.
    """
    originals = np.array([x1, y1, x2, y2], dtype=complex)
    c1 = square_corner_set(x1, y1)
    c2 = square_corner_set(x2, y2)
    corners = np.array([*c1, *c2], dtype=complex)
    return bool(np.abs(originals[:, None] - corners[None, :]).min() <= tol)


def swept_area_pair(
    x: tuple[complex, complex],
    a: complex,
    t_max: float,
    steps: int = 100_000,
) -> tuple[float, float]:
    """Unsigned areas swept by a spiral edge and by its completed partner.

    Both endpoints evolve as z -> z * exp(a t) on [0, t_max], which must be
    a decaying motion (Re(a) < 0).  The first area belongs to the segment
    [x1, x2] e^{at}, the second to the segment between the two completed
    square corners.  Each time strip contributes two unsigned triangles, so
    self-overlap is counted with multiplicity; at least 1000 steps keep the
    strips thin relative to the rotation rate.
    """
    x1, x2 = complex(x[0]), complex(x[1])
    a = complex(a)
    if a.real >= 0:
        raise ValueError("spiral must decay: Re(a) < 0")
    if steps < 1000:
        raise ValueError("need at least 1000 quadrature steps")
    if x1 == x2:
        return 0.0, 0.0
    t = np.linspace(0.0, float(t_max), steps + 1)
    e = np.exp(a * t)
    f1, f2 = x1 * e, x2 * e
    d = 1j * (f2 - f1)
    return _strip_area(f1, f2), _strip_area(f1 + d, f2 + d)


def _strip_area(p: np.ndarray, q: np.ndarray) -> float:
    def cross(z, w):
        return (np.conj(z) * w).imag

    t1 = 0.5 * np.abs(cross(q[:-1] - p[:-1], q[1:] - p[:-1]))
    t2 = 0.5 * np.abs(cross(q[1:] - p[:-1], p[1:] - p[:-1]))
    return float(t1.sum() + t2.sum())
