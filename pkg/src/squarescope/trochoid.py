"""Two-frequency arcs, their enclosed regions, and an exponential-equation oracle.

The central question: given decorated exponentials
e^{alpha + beta p (t - t0)} (1 + lam r e^{i p (t - t0)}) on both sides, do
nonnegative times t1, t2 make them equal?  A change of variables turns the
question into membership of a point in the region enclosed by a curve
a e^{it} + b e^{i kappa t}, with kappa the positive real ratio beta1/beta2.
This module provides the allowable-time interval, the arc and its region,
a radial-set checker, and a brute-force grid oracle for the equation.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

import numpy as np
import shapely
from shapely.geometry import LineString, Point
from shapely.ops import polygonize, unary_union

from .errors import InsufficientSamples

_TWO_PI = 2.0 * np.pi
_RATIO_TOL = 1e-9


@dataclass(frozen=True)
class HalfLine:
    """A closed half-line on the real axis: [endpoint, inf) or (-inf, endpoint]."""

    endpoint: float
    unbounded_above: bool

    def contains(self, t: float, tol: float = 0.0) -> bool:
        if self.unbounded_above:
            return t >= self.endpoint - tol
        return t <= self.endpoint + tol

    def window(self, length: float) -> tuple[float, float]:
        """The length-`length` stretch of the half-line starting at its endpoint."""
        if self.unbounded_above:
            return self.endpoint, self.endpoint + length
        return self.endpoint - length, self.endpoint

    def __str__(self):
        if self.unbounded_above:
            return f"[{self.endpoint:g}, inf)"
        return f"(-inf, {self.endpoint:g}]"


@dataclass
class TrochoidInstance:
    """Parameters of the two-sided decorated-exponential equation.

    The frequency ratio beta1/beta2 must be a positive real number; lam
    scales both decorations together and lives in [0, 1]; the decoration
    radii r1, r2 stay strictly below 1 so neither side can vanish.
    """

    alpha1: complex
    alpha2: complex
    beta1: complex
    beta2: complex
    t0: float
    p: float
    lam: float
    r1: float
    r2: float

    def __post_init__(self):
        if self.p == 0:
            raise ValueError("rotation rate p must be nonzero")
        if self.beta2 == 0:
            raise ValueError("beta2 must be nonzero")
        ratio = complex(self.beta1) / complex(self.beta2)
        if ratio.real <= 0 or abs(ratio.imag) > _RATIO_TOL * max(1.0, abs(ratio)):
            raise ValueError(f"beta1/beta2 = {ratio} is not a positive real number")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("lam must lie in [0, 1]")
        if not (0.0 <= self.r1 < 1.0 and 0.0 <= self.r2 < 1.0):
            raise ValueError("r1 and r2 must lie in [0, 1)")

    @property
    def kappa(self) -> float:
        return (complex(self.beta1) / complex(self.beta2)).real


def with_lambda(inst: TrochoidInstance, lam: float) -> TrochoidInstance:
    """The same instance with the decoration scale replaced."""
    return replace(inst, lam=lam)


_KAPPA_MENU = (0.25, 0.5, 1.0, 2.0, 3.0, 4.0)


def random_instance(rng: np.random.Generator) -> TrochoidInstance:
    """A bounded random instance: |alpha| <= 2, kappa in [0.25, 4], r in [0, 0.9].

    Half the draws take a small-denominator rational ratio, half an
    arbitrary one.  The base frequency beta2 stays real and moderate so the
    two sides trace well-conditioned spirals for the grid oracle.
    """
    def disk(radius):
        r = radius * np.sqrt(rng.uniform())
        th = rng.uniform(0, _TWO_PI)
        return complex(r * np.cos(th), r * np.sin(th))

    kappa = (
        float(rng.choice(_KAPPA_MENU))
        if rng.random() < 0.5
        else float(rng.uniform(0.25, 4.0))
    )
    beta2 = float(rng.uniform(0.3, 1.2))
    return TrochoidInstance(
        alpha1=disk(2.0),
        alpha2=disk(2.0),
        beta1=kappa * beta2,
        beta2=beta2,
        t0=float(rng.uniform(-1.0, 1.0)),
        p=float(rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)),
        lam=float(rng.uniform(0.2, 0.95)),
        r1=float(rng.uniform(0.0, 0.9)),
        r2=float(rng.uniform(0.0, 0.9)),
    )


def instance_period_window(inst: TrochoidInstance, periods: int = 8) -> float:
    """A t_max covering the given number of rotation periods 2 pi / |p|."""
    return periods * _TWO_PI / abs(inst.p)


def random_arc(rng: np.random.Generator) -> TrochoidArc:
    """A bounded random arc for region spot-checks, mixing ratio kinds."""
    kappa = (
        float(rng.choice(_KAPPA_MENU))
        if rng.random() < 0.5
        else float(rng.uniform(0.25, 4.0))
    )
    b = rng.uniform(0.0, 0.9) * np.exp(1j * rng.uniform(0, _TWO_PI))
    return TrochoidArc(
        float(rng.uniform(0.0, 0.9)),
        complex(b),
        kappa,
        HalfLine(float(rng.normal()), bool(rng.random() < 0.5)),
    )


def t_interval(s: float, inst: TrochoidInstance) -> HalfLine:
    """Allowable substituted times t for a fixed shift s.

    t must be reachable as p(t1 - t0) with t1 >= 0, and kappa t + s as
    p(t2 - t0) with t2 >= 0.  Each constraint is a half-line whose direction
    is the sign of p, so their intersection is again a half-line and can
    never be empty: for p > 0 the result is [max of the two endpoints, inf),
    for p < 0 it is (-inf, min of the two endpoints].
    """
    p, t0, kappa = inst.p, inst.t0, inst.kappa
    e1 = -p * t0
    e2 = (-p * t0 - s) / kappa
    if p > 0:
        return HalfLine(max(e1, e2), True)
    return HalfLine(min(e1, e2), False)


@dataclass(frozen=True)
class TrochoidArc:
    """The curve a e^{it} + b e^{i kappa t} restricted to a half-line of t."""

    a: float
    b: complex
    kappa: float
    t_interval: HalfLine

    def __post_init__(self):
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")


def arc_for(inst: TrochoidInstance, s: float) -> TrochoidArc:
    """The arc obtained from the instance at shift s.

    Coefficients follow the substitution alpha = alpha1 - alpha2,
    a = r1, b(s) = -r2 e^{alpha + (i - beta2) s}.
    """
    alpha = complex(inst.alpha1) - complex(inst.alpha2)
    b = -inst.r2 * np.exp(alpha + (1j - complex(inst.beta2)) * s)
    return TrochoidArc(inst.r1, complex(b), inst.kappa, t_interval(s, inst))


def c_of_s(inst: TrochoidInstance, s: float) -> complex:
    """The membership query point e^{alpha + beta2 s} - 1 for shift s."""
    alpha = complex(inst.alpha1) - complex(inst.alpha2)
    return complex(np.exp(alpha + complex(inst.beta2) * s) - 1.0)


def trochoid_point(arc: TrochoidArc, t) -> complex:
    """Evaluate a e^{it} + b e^{i kappa t}; warns when t leaves the interval."""
    t_arr = np.asarray(t, dtype=float)
    lo, hi = (
        (arc.t_interval.endpoint, np.inf)
        if arc.t_interval.unbounded_above
        else (-np.inf, arc.t_interval.endpoint)
    )
    if np.any(t_arr < lo) or np.any(t_arr > hi):
        warnings.warn(
            f"t outside the allowable interval {arc.t_interval}", stacklevel=2
        )
    val = arc.a * np.exp(1j * t_arr) + arc.b * np.exp(1j * arc.kappa * t_arr)
    return complex(val) if np.ndim(t) == 0 else val


def _rational_kappa(kappa: float) -> Fraction | None:
    frac = Fraction(kappa).limit_denominator(64)
    if frac > 0 and abs(kappa - float(frac)) <= _RATIO_TOL * max(1.0, kappa):
        return frac
    return None


def _trace_window(arc: TrochoidArc) -> float:
    frac = _rational_kappa(arc.kappa)
    if frac is not None:
        return _TWO_PI * frac.denominator
    return 8.0 * np.pi / min(1.0, arc.kappa)


@lru_cache(maxsize=64)
def _hull_geometry(arc: TrochoidArc, samples: int):
    """Region enclosed by the outer boundary of the sampled, closed trace.

    The self-intersecting trace is noded and polygonized; the union of all
    bounded faces is exactly the region inside the outer boundary, with
    inner-loop pockets filled in.
    """
    length = _trace_window(arc)
    needed = int(np.ceil(length * max(1.0, arc.kappa) * 16.0 / _TWO_PI))
    if samples < max(64, needed):
        raise InsufficientSamples(
            f"{samples} samples cannot cover a window of {length:.1f} "
            f"at ratio {arc.kappa:g}; need at least {max(64, needed)}"
        )
    lo, hi = arc.t_interval.window(length)
    t = np.linspace(lo, hi, samples)
    w = arc.a * np.exp(1j * t) + arc.b * np.exp(1j * arc.kappa * t)
    coords = np.column_stack([w.real, w.imag])
    coords = np.vstack([coords, coords[:1]])
    trace = LineString(coords)
    faces = list(polygonize(unary_union(trace)))
    region = unary_union(faces) if faces else trace.buffer(0)
    shapely.prepare(region)
    return region, trace


@dataclass
class HullQuery:
    """Membership verdict with its boundary-proximity caveat."""

    inside: bool
    inconclusive: bool
    boundary_distance: float


def hull_membership(
    z: complex,
    arc: TrochoidArc,
    samples: int = 4096,
    boundary_tol: float | None = None,
) -> HullQuery:
    """Winding-style membership of z in the region enclosed by the arc.

    Points beyond the reach |a| + |b| are outside without tracing anything.
    Points within ``boundary_tol`` of the sampled trace cannot be decided
    numerically; they are reported inside but flagged inconclusive.
    """
    z = complex(z)
    reach = abs(arc.a) + abs(arc.b)
    if abs(z) > reach:
        return HullQuery(False, False, abs(z) - reach)
    region, trace = _hull_geometry(arc, samples)
    pt = Point(z.real, z.imag)
    dist = float(trace.distance(pt))
    if boundary_tol is None:
        boundary_tol = 1e-9 * max(1.0, reach)
    if dist <= boundary_tol:
        return HullQuery(True, True, dist)
    return HullQuery(bool(region.covers(pt)), False, dist)


def in_hull_H(z: complex, arc: TrochoidArc, samples: int = 4096) -> bool:
    """Boolean face of :func:`hull_membership`."""
    return hull_membership(z, arc, samples).inside


def radial_property_check(
    arc, rays: int = 24, steps: int = 12, samples: int = 4096
) -> bool:
    """Spot-check that the arc's region is star-shaped about the origin.

    Probes `rays` directions at `steps` radii; every point found inside must
    stay inside when scaled toward the origin.  Membership is queried fresh
    at every scale, so the check would catch a region with a hole.  `arc`
    may also be a plain membership callable, which lets tests feed the
    checker adversarial regions.
    """
    if callable(arc) and not isinstance(arc, TrochoidArc):
        member = arc
        reach = 1.0
    else:
        member = lambda z: in_hull_H(z, arc, samples)
        reach = abs(arc.a) + abs(arc.b)
    lams = np.linspace(0.0, 1.0, steps + 1)
    for ang in np.linspace(0.0, _TWO_PI, rays, endpoint=False):
        direction = np.exp(1j * ang)
        for radius in np.linspace(reach, 0.0, steps, endpoint=False):
            z = radius * direction
            if not member(z):
                continue
            for lam in lams:
                if not member(lam * z):
                    return False
    return True


# ---------------------------------------------------------------------------
# the equation oracle


def lhs_value(inst: TrochoidInstance, t1) -> np.ndarray:
    """Left side e^{alpha1 + beta1 p (t1 - t0)} (1 + lam r1 e^{i p (t1 - t0)})."""
    u = inst.p * (np.asarray(t1, dtype=float) - inst.t0)
    return np.exp(complex(inst.alpha1) + complex(inst.beta1) * u) * (
        1.0 + inst.lam * inst.r1 * np.exp(1j * u)
    )


def rhs_value(inst: TrochoidInstance, t2) -> np.ndarray:
    """Right side e^{alpha2 + beta2 p (t2 - t0)} (1 + lam r2 e^{i p (t2 - t0)})."""
    u = inst.p * (np.asarray(t2, dtype=float) - inst.t0)
    return np.exp(complex(inst.alpha2) + complex(inst.beta2) * u) * (
        1.0 + inst.lam * inst.r2 * np.exp(1j * u)
    )


def _lhs_deriv(inst: TrochoidInstance, t1: float) -> complex:
    u = inst.p * (t1 - inst.t0)
    rot = np.exp(1j * u)
    return complex(
        inst.p
        * np.exp(complex(inst.alpha1) + complex(inst.beta1) * u)
        * (complex(inst.beta1) * (1.0 + inst.lam * inst.r1 * rot)
           + 1j * inst.lam * inst.r1 * rot)
    )


def _rhs_deriv(inst: TrochoidInstance, t2: float) -> complex:
    u = inst.p * (t2 - inst.t0)
    rot = np.exp(1j * u)
    return complex(
        inst.p
        * np.exp(complex(inst.alpha2) + complex(inst.beta2) * u)
        * (complex(inst.beta2) * (1.0 + inst.lam * inst.r2 * rot)
           + 1j * inst.lam * inst.r2 * rot)
    )


@dataclass
class SolveResult:
    """Outcome of the bounded-search oracle.

    A false verdict only means no solution was found inside the searched
    box at the requested tolerance; `floor` records the smallest residual
    seen so the verdict can be audited.
    """

    found: bool
    witness: tuple[float, float] | None
    residual: float
    floor: float
    t_max: float
    grid: int
    tol: float


def exists_solution(
    inst: TrochoidInstance, t_max: float, grid: int = 512, tol: float = 1e-8
) -> SolveResult:
    """Search [0, t_max]^2 for times making the two sides equal.

    The residual |lhs(t1) - rhs(t2)| separates into two sampled curves, so
    the coarse stage is a cross-distance scan.  Every local minimum of the
    coarse grid (up to 32, ranked by value, ties to the lexicographically
    smallest index pair) gets three rounds of 10x local refinement and a
    damped Newton polish with analytic derivatives; the best polished point
    wins.  Narrow dips between coarse nodes can still be missed, which is
    why a false verdict only covers the searched box.
    """
    t = np.linspace(0.0, float(t_max), grid)
    lv = lhs_value(inst, t)
    rv = rhs_value(inst, t)
    with np.errstate(over="ignore", invalid="ignore"):
        d = np.abs(lv[:, None] - rv[None, :])
    d = np.where(np.isfinite(d), d, np.inf)
    seeds = _local_minima(d, cap=32)

    h = float(t_max) / max(grid - 1, 1)
    best = np.inf
    bt1 = bt2 = 0.0
    for i, j in seeds:
        t1, t2, r = _refine_cell(inst, float(t[i]), float(t[j]), h, t_max)
        t1, t2, r = _newton_polish(inst, t1, t2, r, t_max)
        if r < best:
            best, bt1, bt2 = r, t1, t2
    if best < tol:
        return SolveResult(True, (bt1, bt2), best, best, t_max, grid, tol)
    return SolveResult(False, None, best, best, t_max, grid, tol)


def _local_minima(d: np.ndarray, cap: int) -> list[tuple[int, int]]:
    """Grid cells at or below all 8 neighbors, ranked by value then index."""
    pad = np.pad(d, 1, constant_values=np.inf)
    core = pad[1:-1, 1:-1]
    is_min = np.ones(d.shape, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            is_min &= core <= pad[1 + di : pad.shape[0] - 1 + di,
                                  1 + dj : pad.shape[1] - 1 + dj]
    is_min &= np.isfinite(d)
    ii, jj = np.nonzero(is_min)
    if len(ii) == 0:
        flat = int(np.argmin(d))
        return [divmod(flat, d.shape[1])]
    order = np.lexsort((jj, ii, d[ii, jj]))
    return [(int(ii[k]), int(jj[k])) for k in order[:cap]]


def _refine_cell(
    inst: TrochoidInstance, t1: float, t2: float, h: float, t_max: float
) -> tuple[float, float, float]:
    best = abs(complex(lhs_value(inst, t1) - rhs_value(inst, t2)))
    for _ in range(3):
        g1 = np.clip(np.linspace(t1 - h, t1 + h, 21), 0.0, t_max)
        g2 = np.clip(np.linspace(t2 - h, t2 + h, 21), 0.0, t_max)
        with np.errstate(over="ignore", invalid="ignore"):
            dd = np.abs(lhs_value(inst, g1)[:, None] - rhs_value(inst, g2)[None, :])
        dd = np.where(np.isfinite(dd), dd, np.inf)
        flat = int(np.argmin(dd))
        ii, jj = divmod(flat, 21)
        t1, t2, best = float(g1[ii]), float(g2[jj]), float(dd[ii, jj])
        h /= 10.0
    return t1, t2, best


def _newton_polish(
    inst: TrochoidInstance, t1: float, t2: float, best: float, t_max: float
) -> tuple[float, float, float]:
    bt1, bt2 = t1, t2
    for _ in range(60):
        f = complex(lhs_value(inst, t1) - rhs_value(inst, t2))
        r = abs(f)
        if not np.isfinite(r):
            break
        if r < best:
            best, bt1, bt2 = r, t1, t2
        if r < 1e-15:
            break
        dl = _lhs_deriv(inst, t1)
        dr = _rhs_deriv(inst, t2)
        if not (np.isfinite(abs(dl)) and np.isfinite(abs(dr))):
            break
        # solve [dl, -dr] [dt1, dt2]^T = -f as a real 2x2 system via Cramer
        def cross(z: complex, w: complex) -> float:
            return z.real * w.imag - z.imag * w.real

        det = cross(dr, dl)
        if abs(det) < 1e-300:
            break
        dt1 = cross(f, dr) / det
        dt2 = cross(f, dl) / det
        step = 1.0
        improved = False
        for _ in range(25):
            n1 = min(max(t1 + step * dt1, 0.0), t_max)
            n2 = min(max(t2 + step * dt2, 0.0), t_max)
            if abs(complex(lhs_value(inst, n1) - rhs_value(inst, n2))) < r:
                t1, t2 = n1, n2
                improved = True
                break
            step *= 0.5
        if not improved:
            break
    f = abs(complex(lhs_value(inst, t1) - rhs_value(inst, t2)))
    if f < best:
        best, bt1, bt2 = f, t1, t2
    return bt1, bt2, best
