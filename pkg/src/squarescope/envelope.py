"""Square-envelope candidates and parity bookkeeping on the cylinder.

The off-diagonal torus is a cylinder with two ends, (v - u) -> 0+ and
(v - u) -> 1-.  A spanning component of the region where both torus-map
coordinates are negative (both completed corners strictly inside the
curve) is the combinatorial shadow of a square envelope; tracing these
components, verifying candidate envelopes, and checking the degree/zero
parity consistency all live here.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .curves import ClosedCurve, SignField
from .errors import OnBoundary, PointOnLoop, ZeroOnLoop
from .geometry import rotate90, winding_number
from .squares import SquareSearch, in_region_A, torus_grid_eval

_SPAN_CELLS = 3  # a component end within 3/grid of a cylinder end touches it


# ---------------------------------------------------------------------------
# anti-diagonal winding and parity consistency


@dataclass
class AntidiagonalReport:
    """Winding of the torus map along the antipodal loop v = u + 1/2."""

    winding: int
    min_norm: float
    at_param: float
    samples: int


def antidiagonal_winding(
    curve: ClosedCurve,
    sign_field: SignField | None = None,
    samples: int = 4096,
    zero_tol: float | None = None,
) -> AntidiagonalReport:
    """Winding number of {g(u, u + 1/2)} around the origin of the g-plane.

    The loop generates the cylinder's fundamental group, so for curves
    whose torus map never vanishes this winding is the obstruction degree;
    when zeros exist off the loop it is still well-defined and its parity
    matches the parity of the zero count in either off-diagonal region.

    Raises :class:`ZeroOnLoop` when the sampled loop norm dips below
    ``zero_tol`` (default 1e-6 times the curve diameter).
    """
    if sign_field is None:
        sign_field = SignField(curve)
    if zero_tol is None:
        zero_tol = 1e-6 * curve.diameter
    u = np.arange(samples) / samples
    a = curve.points_at(u)
    b = curve.points_at((u + 0.5) % 1.0)
    r = rotate90(b - a)
    loop = np.column_stack([sign_field.values(a + r), sign_field.values(b + r)])
    norms = np.hypot(loop[:, 0], loop[:, 1])
    k = int(np.argmin(norms))
    if norms[k] <= zero_tol:
        raise ZeroOnLoop(float(norms[k]), float(u[k]))
    ang = np.arctan2(loop[:, 1], loop[:, 0])
    turns = np.diff(np.append(ang, ang[0]))
    turns = (turns + np.pi) % (2.0 * np.pi) - np.pi
    w = int(round(float(turns.sum()) / (2.0 * np.pi)))
    return AntidiagonalReport(w, float(norms[k]), float(u[k]), samples)


@dataclass
class DegreeReport:
    """Parity comparison between the anti-diagonal winding and region-A zeros."""

    winding: int
    zeros_in_a: int
    boundary_zeros: int
    consistent: bool


def degree_consistency(
    search: SquareSearch, anti: AntidiagonalReport, boundary_tol: float = 1e-9
) -> DegreeReport:
    """Check winding parity against the count of side-zeros in region A.

    Side-zeros sitting on a region boundary (within ``boundary_tol``) are
    tallied separately and make the verdict inconclusive.
    """
    count = 0
    boundary = 0
    for sq in search.squares:
        for z in sq.side_zeros:
            try:
                if in_region_A(z.u, z.v, tol=boundary_tol):
                    count += 1
            except OnBoundary:
                boundary += 1
    consistent = boundary == 0 and (anti.winding - count) % 2 == 0
    return DegreeReport(anti.winding, count, boundary, consistent)


# ---------------------------------------------------------------------------
# quadrant components on the cylinder


@dataclass
class CylinderPath:
    """A thinned component of the negative-quadrant region.

    points walk from the component's lowest (v - u) node to its highest
    along grid neighbors, so consecutive points stay within one diagonal
    grid step.  spanning is true when the component touches both cylinder
    ends (within 3/grid of each).
    """

    points: np.ndarray
    spanning: bool
    h_min: float
    h_max: float
    size: int


def trace_quadrant_components(
    curve: ClosedCurve,
    sign_field: SignField | None = None,
    grid: int = 512,
    tol: float = 1e-8,
    node_values: tuple[np.ndarray, np.ndarray] | None = None,
) -> list[CylinderPath]:
    """Connected components of {g1 < -tol and g2 < -tol} on the torus grid.

    Components are 8-connected with wraparound in both directions.  Each is
    thinned to a breadth-first shortest path between its extreme
    (v - u)-offset nodes and flagged as spanning when it reaches both
    cylinder ends.  The list is sorted by (h_min, h_max, -size).
    """
    if sign_field is None:
        sign_field = SignField(curve)
    g1, g2 = node_values if node_values is not None else torus_grid_eval(
        curve, sign_field, grid
    )
    mask = (g1 < -tol) & (g2 < -tol)
    labels = _torus_label(mask)
    comps: dict[int, list[tuple[int, int]]] = {}
    for i, j in zip(*np.nonzero(mask)):
        comps.setdefault(int(labels[i, j]), []).append((int(i), int(j)))

    paths = []
    for nodes in comps.values():
        offs = np.array([(j - i) % grid for i, j in nodes])
        h_min = float(offs.min()) / grid
        h_max = float(offs.max()) / grid
        spanning = h_min < _SPAN_CELLS / grid and h_max > 1.0 - _SPAN_CELLS / grid
        lo = min(nodes, key=lambda n: (((n[1] - n[0]) % grid), n[0], n[1]))
        hi = max(nodes, key=lambda n: (((n[1] - n[0]) % grid), -n[0], -n[1]))
        chain = _bfs_path(set(nodes), lo, hi, grid)
        pts = np.array(chain, dtype=float) / grid
        paths.append(CylinderPath(pts, spanning, h_min, h_max, len(nodes)))
    paths.sort(key=lambda p: (p.h_min, p.h_max, -p.size, tuple(p.points[0])))
    return paths


def _torus_label(mask: np.ndarray) -> np.ndarray:
    """8-connected labeling with wraparound in both axes."""
    labels, n = ndimage.label(mask, structure=np.ones((3, 3), dtype=int))
    if n == 0:
        return labels
    parent = list(range(n + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        parent[find(a)] = find(b)

    g = mask.shape[0]
    for j in range(g):
        if mask[g - 1, j]:
            for dj in (-1, 0, 1):
                if mask[0, (j + dj) % g]:
                    union(int(labels[g - 1, j]), int(labels[0, (j + dj) % g]))
    for i in range(g):
        if mask[i, g - 1]:
            for di in (-1, 0, 1):
                if mask[(i + di) % g, 0]:
                    union(int(labels[i, g - 1]), int(labels[(i + di) % g, 0]))
    out = labels.copy()
    for i, j in zip(*np.nonzero(mask)):
        out[i, j] = find(int(labels[i, j]))
    return out


_NEIGHBORS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


def _bfs_path(nodes: set, start, goal, grid: int):
    """Shortest 8-connected path through the node set, torus adjacency."""
    prev = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur == goal:
            break
        ci, cj = cur
        for di, dj in _NEIGHBORS:
            nxt = ((ci + di) % grid, (cj + dj) % grid)
            if nxt in nodes and nxt not in prev:
                prev[nxt] = cur
                queue.append(nxt)
    if goal not in prev:
        return [start]
    path = [goal]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


# ---------------------------------------------------------------------------
# envelope candidates


@dataclass
class EnvelopeCandidate:
    """A candidate pair of outer paths with their completed inner corners.

    e1 and e2 are (M, 2) point arrays indexed by a common truncation
    parameter; index M//2 plays the role of time zero.  s1 and s2 complete
    each (e1[k], e2[k]) edge to a square.
    """

    e1: np.ndarray
    e2: np.ndarray

    def __post_init__(self):
        self.e1 = np.asarray(self.e1, dtype=float)
        self.e2 = np.asarray(self.e2, dtype=float)
        if self.e1.shape != self.e2.shape or self.e1.ndim != 2:
            raise ValueError("e1 and e2 must be matching (M, 2) arrays")
        r = rotate90(self.e2 - self.e1)
        self.s1 = self.e1 + r
        self.s2 = self.e2 + r

    def __len__(self):
        return len(self.e1)

    @property
    def mid(self) -> int:
        return len(self.e1) // 2


def build_envelope_candidate(
    path: CylinderPath,
    curve: ClosedCurve,
    sign_field: SignField,
    push: bool = True,
) -> EnvelopeCandidate:
    """Lift a cylinder path to plane paths, optionally pushed off the curve.

    The push moves each sample along the curve's outward normal by half the
    distance of the nearer completed corner to the curve, which keeps the
    corners strictly inside while the outer paths leave the curve.
    """
    u = path.points[:, 0]
    v = path.points[:, 1]
    e1 = curve.points_at(u)
    e2 = curve.points_at(v)
    if push:
        r = rotate90(e2 - e1)
        d1 = np.abs(sign_field.values(e1 + r))
        d2 = np.abs(sign_field.values(e2 + r))
        eps = 0.5 * np.minimum(d1, d2)
        t1 = curve.tangents_at(u)
        t2 = curve.tangents_at(v)
        out1 = np.column_stack([t1[:, 1], -t1[:, 0]])
        out2 = np.column_stack([t2[:, 1], -t2[:, 0]])
        e1 = e1 + eps[:, None] * out1
        e2 = e2 + eps[:, None] * out2
    return EnvelopeCandidate(e1, e2)


@dataclass
class EnvelopeCheck:
    """Item-by-item verification of an envelope candidate."""

    items: dict[int, bool]
    notes: list[str] = field(default_factory=list)
    probe: tuple[float, float] | None = None
    loop_winding: int | None = None

    @property
    def all_passed(self) -> bool:
        return all(self.items.values())


def _default_probe(curve: ClosedCurve, sign_field: SignField):
    c = curve.samples.mean(axis=0)
    if sign_field.value(c) < 0:
        return c
    # walk inward from the curve until the field goes negative
    for scale in (0.05, 0.1, 0.2):
        for k in range(0, curve.n, curve.n // 16 or 1):
            t = curve.tangents_at(k / curve.n)
            inward = np.array([-t[1], t[0]])
            p = curve.samples[k] + scale * curve.diameter * inward
            if sign_field.value(p) < 0:
                return p
    return None


def verify_envelope(
    env: EnvelopeCandidate,
    curve: ClosedCurve,
    sign_field: SignField,
    probe=None,
    close_threshold: float | None = None,
) -> EnvelopeCheck:
    """Check the four defining conditions of a square envelope candidate.

    1. both outer paths stay strictly outside the curve,
    2. both completed corners stay strictly inside,
    3. the edge length |e2 - e1| is below ``close_threshold`` at both ends
       (default 0.15 times the curve diameter),
    4. the closed loop (e1 forward, across, e2 backward, across) winds
       exactly once around an interior probe point.

    Items are reported individually; a missing or invalid probe makes item
    4 false with an explanatory note.
    """
    if close_threshold is None:
        close_threshold = 0.15 * curve.diameter
    f1 = sign_field.values(env.e1)
    f2 = sign_field.values(env.e2)
    fs1 = sign_field.values(env.s1)
    fs2 = sign_field.values(env.s2)
    notes = []
    item1 = bool((f1 > 0).all() and (f2 > 0).all())
    if not item1:
        notes.append(
            f"outer paths dip to f={min(f1.min(), f2.min()):.3e} at some sample"
        )
    item2 = bool((fs1 < 0).all() and (fs2 < 0).all())
    if not item2:
        notes.append(
            f"completed corners rise to f={max(fs1.max(), fs2.max()):.3e}"
        )
    gaps = np.hypot(*(env.e2 - env.e1).T)
    item3 = bool(gaps[0] <= close_threshold and gaps[-1] <= close_threshold)
    if not item3:
        notes.append(
            f"end gaps {gaps[0]:.4f}, {gaps[-1]:.4f} exceed {close_threshold:.4f}"
        )
    if probe is None:
        probe = _default_probe(curve, sign_field)
    item4 = False
    wind = None
    probe_out = None
    if probe is None:
        notes.append("no interior probe point found; item 4 not evaluated")
    else:
        probe = np.asarray(probe, dtype=float)
        probe_out = (float(probe[0]), float(probe[1]))
        if sign_field.value(probe) >= 0:
            notes.append("probe lies outside the curve; item 4 not evaluated")
        else:
            loop = np.vstack([env.e1, env.e2[::-1]])
            try:
                wind = winding_number(loop, probe)
                item4 = wind == 1
            except PointOnLoop:
                notes.append("probe lies on the truncation loop")
    return EnvelopeCheck(
        {1: item1, 2: item2, 3: item3, 4: item4},
        notes,
        probe_out,
        wind,
    )


# ---------------------------------------------------------------------------
# truncation signs


def sigma_sign(
    env: EnvelopeCandidate, p_index: int, direction: str, lambda_index: int
) -> int:
    """Truncation sign (-1)**n at one truncation of an envelope candidate.

    The truncation loop starts at e1 at offset ``lambda_index`` from the
    middle sample (forward for direction '+', backward for '-'), follows e1
    back to the middle, crosses to e2, follows e2 out to the same offset,
    and closes.  n is its winding number around the completed corner
    s``p_index`` of the middle edge.

    Raises :class:`PointOnLoop` when that corner lies on the loop and
    IndexError when the truncation leaves the sampled range.
    """
    if p_index not in (1, 2):
        raise ValueError("p_index must be 1 or 2")
    if direction not in ("+", "-"):
        raise ValueError("direction must be '+' or '-'")
    mid = env.mid
    if lambda_index < 0:
        raise IndexError("lambda_index must be nonnegative")
    if direction == "+":
        idx = mid + lambda_index
        if idx >= len(env):
            raise IndexError("truncation beyond the sampled range")
        loop = np.vstack([env.e1[mid : idx + 1][::-1], env.e2[mid : idx + 1]])
    else:
        idx = mid - lambda_index
        if idx < 0:
            raise IndexError("truncation beyond the sampled range")
        loop = np.vstack([env.e1[idx : mid + 1], env.e2[idx : mid + 1][::-1]])
    probe = env.s1[mid] if p_index == 1 else env.s2[mid]
    n = winding_number(loop, probe)
    return -1 if n % 2 else 1


@dataclass
class Lemma2Report:
    """Consistency of the four limiting truncation signs."""

    sigma_plus: tuple[int, int]
    sigma_minus: tuple[int, int]
    tails: dict[str, list[int]]
    checks: list[tuple[str, bool]]
    clustering: dict[str, bool]

    @property
    def all_passed(self) -> bool:
        return all(ok for _, ok in self.checks)


def lemma2_check(
    env: EnvelopeCandidate, shrink_factor: float = 0.75, tail_len: int = 8
) -> Lemma2Report:
    """Evaluate both truncation signs in both directions and compare them.

    The limits are approximated at the outermost truncation; a short tail
    of signs at earlier truncations is reported so oscillation is visible.
    Checks: the two corner probes agree in each direction, the directions
    are opposite, and in any direction with sign -1 the paths cluster (the
    ball around the end midpoint shrinks by ``shrink_factor`` over the
    second half of the tail window).
    """
    mid = env.mid
    lam_plus = len(env) - 1 - mid
    lam_minus = mid
    sp = tuple(sigma_sign(env, p, "+", lam_plus) for p in (1, 2))
    sm = tuple(sigma_sign(env, p, "-", lam_minus) for p in (1, 2))

    tails: dict[str, list[int]] = {}
    for direction, lam in (("+", lam_plus), ("-", lam_minus)):
        step = max(1, lam // tail_len)
        lams = list(range(max(0, lam - step * (tail_len - 1)), lam + 1, step))
        for p in (1, 2):
            tails[f"sigma{p}{direction}"] = [
                sigma_sign(env, p, direction, l) for l in lams
            ]

    checks = [
        ("sigma1+ == sigma2+", sp[0] == sp[1]),
        ("sigma1- == sigma2-", sm[0] == sm[1]),
        ("sigma1+ == -sigma1-", sp[0] == -sm[0]),
    ]
    clustering: dict[str, bool] = {}
    for direction, sig in (("+", sp[0]), ("-", sm[0])):
        if sig == -1:
            ok = _clusters(env, direction, shrink_factor)
            clustering[direction] = ok
            checks.append((f"paths cluster toward {direction} end", ok))
    return Lemma2Report(sp, sm, tails, checks, clustering)


def _clusters(env: EnvelopeCandidate, direction: str, shrink: float) -> bool:
    e1 = env.e1 if direction == "+" else env.e1[::-1]
    e2 = env.e2 if direction == "+" else env.e2[::-1]
    k = max(4, len(e1) // 4)
    c = 0.5 * (e1[-1] + e2[-1])
    rad = np.maximum(
        np.hypot(*(e1[-k:] - c).T), np.hypot(*(e2[-k:] - c).T)
    )
    # cascade of halved tail windows; a pair of paths with distinct limits
    # floors the radius at half their terminal gap and fails a late stage
    while k >= 8:
        r_full = float(rad.max())
        r_half = float(rad[k // 2 :].max())
        if r_half > shrink * r_full + 1e-12:
            return False
        rad = rad[k // 2 :]
        k = len(rad)
    # the terminal gap must be dominated by what variation is left, else
    # the paths approach two distinct limit points
    gap_end = float(np.hypot(*(e1[-1] - e2[-1])))
    return gap_end <= shrink * float(rad.max()) + 1e-12
