"""Inscribed-square search on the parameter torus.

For a closed curve c with sign field f, the torus map

    g(u, v) = ( f(s1(c(u), c(v))),  f(s2(c(u), c(v))) )

vanishes exactly when the square completed from the chord c(u) -> c(v) has
its two remaining corners on the curve as well.  Each inscribed square
therefore shows up as four zeros of g, one per directed side.  The finder
scans a torus grid for cells where both coordinates change sign, refines
candidates with a damped Newton iteration, and groups the refined zeros by
the square they generate.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .curves import ClosedCurve, SignField
from .errors import ContinuumSuspected, DegenerateParams, OnBoundary
from .geometry import dist_mod1, rotate90

_FD_STEP = 1e-6          # central-difference step for the torus Jacobian
_BAND_CELLS = 2          # diagonal exclusion band, in cells
_CHAIN_LINK_CELLS = 4.0  # zeros closer than this many cells chain together
_GROUP_REL_TOL = 1e-6    # vertex-set matching tolerance, relative to diameter


class SquareType(enum.Enum):
    """Cyclic-order class of a square's corners along the curve.

    Label the corners 1..4 counterclockwise in the plane and read the labels
    in the order the curve visits them.  Up to cyclic rotation there are
    three classes: the orders agree (I), reverse (III), or interleave (II).
    """

    I = "I"
    II = "II"
    III = "III"


@dataclass
class TorusZero:
    """A refined zero of the torus map."""

    u: float
    v: float
    residual: float
    jac_min_sv: float


@dataclass
class SquareCandidate:
    """An inscribed square reconstructed from torus zeros.

    corner_params are sorted ascending in [0, 1) and vertices[k] is the curve
    point at corner_params[k].  residual is the largest |f| seen at a
    completed corner over the zeros that produced this square.
    """

    corner_params: np.ndarray
    vertices: np.ndarray
    residual: float
    side_zeros: list[TorusZero]
    jac_min_sv: float

    def side_lengths(self) -> np.ndarray:
        ordered = _ccw_order(self.vertices)
        d = np.roll(ordered, -1, axis=0) - ordered
        return np.hypot(*d.T)

    def diagonals(self) -> np.ndarray:
        ordered = _ccw_order(self.vertices)
        return np.array(
            [
                np.hypot(*(ordered[2] - ordered[0])),
                np.hypot(*(ordered[3] - ordered[1])),
            ]
        )


@dataclass
class SquareSearch:
    """Everything the finder produced at one grid resolution."""

    squares: list[SquareCandidate]
    zeros: list[TorusZero]
    failed_cells: list[tuple[float, float]]
    grid: int
    tol: float
    candidate_cells: int = 0


def g_map(curve: ClosedCurve, sign_field: SignField, u, v):
    """The torus map at a single (u, v); returns a float pair."""
    g1, g2 = _g_bulk(curve, sign_field, np.atleast_1d(u), np.atleast_1d(v))
    return float(g1[0]), float(g2[0])


def _g_bulk(curve, sign_field, u, v):
    a = curve.points_at(u)
    b = curve.points_at(v)
    r = rotate90(b - a)
    return sign_field.values(a + r), sign_field.values(b + r)


def torus_grid_eval(curve: ClosedCurve, sign_field: SignField, grid: int):
    """Node values of both torus-map coordinates on a grid x grid lattice."""
    us = np.arange(grid) / grid
    uu, vv = np.meshgrid(us, us, indexing="ij")
    g1, g2 = _g_bulk(curve, sign_field, uu.ravel(), vv.ravel())
    return g1.reshape(grid, grid), g2.reshape(grid, grid)


def _sign_change_cells(g: np.ndarray) -> np.ndarray:
    corners = np.stack(
        [g, np.roll(g, -1, 0), np.roll(g, -1, 1), np.roll(np.roll(g, -1, 0), -1, 1)]
    )
    return (corners.min(axis=0) <= 0.0) & (corners.max(axis=0) >= 0.0)


def _off_band_cells(grid: int) -> np.ndarray:
    i, j = np.meshgrid(np.arange(grid), np.arange(grid), indexing="ij")
    d = (j - i) % grid
    return np.minimum(d, grid - d) > _BAND_CELLS


def find_inscribed_squares(
    curve: ClosedCurve,
    sign_field: SignField | None = None,
    grid: int = 512,
    tol: float = 1e-8,
    node_values: tuple[np.ndarray, np.ndarray] | None = None,
) -> SquareSearch:
    """Locate inscribed squares of a curve by torus zero-finding.

    Scans the grid for off-diagonal cells where both coordinates of the
    torus map change sign, refines each candidate with a damped Newton
    iteration (central differences, bisection fallback), and groups zeros
    whose completed squares coincide within 1e-6 of the curve diameter.

    Cells that refuse to converge are collected in ``failed_cells`` rather
    than raised.  When the refined zeros chain together into a component of
    more than grid/4 members with neighbor spacing under 4/grid, the zero
    set looks one-dimensional and :class:`ContinuumSuspected` is raised.

    ``node_values`` can supply a precomputed :func:`torus_grid_eval` result
    to avoid rescanning.
    """
    if sign_field is None:
        sign_field = SignField(curve)
    g1, g2 = node_values if node_values is not None else torus_grid_eval(
        curve, sign_field, grid
    )
    cells = _sign_change_cells(g1) & _sign_change_cells(g2) & _off_band_cells(grid)
    ii, jj = np.nonzero(cells)
    n_cells = len(ii)

    geval = lambda u, v: _g_bulk(curve, sign_field, u, v)  # noqa: E731
    zeros, failed = _refine_cells(geval, ii, jj, grid, tol)
    zeros = [z for z in zeros if dist_mod1(z.u, z.v) > _BAND_CELLS / grid]
    zeros = _dedupe_zeros(zeros, 0.5 / grid)

    chain = _largest_chain(zeros, _CHAIN_LINK_CELLS / grid)
    if chain > grid / 4:
        raise ContinuumSuspected(chain, grid)

    squares = _group_into_squares(zeros, curve, sign_field)
    squares.sort(key=lambda s: float(s.corner_params[0]))
    return SquareSearch(squares, zeros, failed, grid, tol, n_cells)


def _refine_cells(geval, ii, jj, grid, tol, max_iter=60):
    """Vectorized damped Newton from every candidate cell center."""
    if len(ii) == 0:
        return [], []
    u = (ii + 0.5) / grid
    v = (jj + 0.5) / grid
    active = np.ones(len(u), dtype=bool)
    jac = np.zeros((len(u), 2, 2))
    half = 0.75 / grid  # keep iterates loosely within their cell scale

    def res_of(uu, vv):
        a, b = geval(uu, vv)
        return np.stack([a, b], axis=1)

    g = res_of(u, v)
    res = np.abs(g).max(axis=1)
    for _ in range(max_iter):
        active = res > tol
        if not active.any():
            break
        ua, va = u[active], v[active]
        h = _FD_STEP
        gp = res_of(ua + h, va)
        gm = res_of(ua - h, va)
        gq = res_of(ua, va + h)
        gr = res_of(ua, va - h)
        J = np.empty((len(ua), 2, 2))
        J[:, :, 0] = (gp - gm) / (2 * h)
        J[:, :, 1] = (gq - gr) / (2 * h)
        jac[active] = J
        det = J[:, 0, 0] * J[:, 1, 1] - J[:, 0, 1] * J[:, 1, 0]
        det = np.where(np.abs(det) < 1e-300, 1e-300, det)
        ga = g[active]
        du = -(J[:, 1, 1] * ga[:, 0] - J[:, 0, 1] * ga[:, 1]) / det
        dv = -(-J[:, 1, 0] * ga[:, 0] + J[:, 0, 0] * ga[:, 1]) / det
        step = np.hypot(du, dv)
        scale = np.minimum(1.0, 8 * half / np.where(step == 0, 1.0, step))
        du, dv = du * scale, dv * scale
        base = res[active]
        best_u, best_v = ua.copy(), va.copy()
        best_res = base.copy()
        damp = np.ones(len(ua))
        for _ in range(25):
            cu, cv = ua + damp * du, va + damp * dv
            cg = res_of(cu, cv)
            cres = np.abs(cg).max(axis=1)
            better = cres < best_res
            best_u[better], best_v[better] = cu[better], cv[better]
            best_res[better] = cres[better]
            if (best_res < base).all():
                break
            damp = np.where(best_res < base, damp, damp * 0.5)
        moved = best_res < base
        ua = np.where(moved, best_u, ua)
        va = np.where(moved, best_v, va)
        u[active], v[active] = ua % 1.0, va % 1.0
        g[active] = res_of(u[active], v[active])
        res[active] = np.abs(g[active]).max(axis=1)
        if not moved.any():
            break

    zeros, failed = [], []
    for k in range(len(u)):
        if res[k] <= tol:
            zeros.append(TorusZero(u[k] % 1.0, v[k] % 1.0, float(res[k]),
                                   _min_singular_value(jac[k])))
        else:
            z = _bisect_cell(geval, ii[k], jj[k], grid, tol)
            if z is not None:
                zeros.append(z)
            else:
                failed.append(((ii[k] + 0.5) / grid, (jj[k] + 0.5) / grid))
    return zeros, failed


def _min_singular_value(J: np.ndarray) -> float:
    m = J.T @ J
    tr, det = m[0, 0] + m[1, 1], m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    disc = max(tr * tr / 4.0 - det, 0.0)
    lam = max(tr / 2.0 - np.sqrt(disc), 0.0)
    return float(np.sqrt(lam))


def _bisect_cell(geval, i, j, grid, tol, depth=30):
    """Subdivision fallback when Newton stalls in a cell."""
    lo_u, lo_v, w = i / grid, j / grid, 1.0 / grid
    for _ in range(depth):
        us = lo_u + w * np.array([0.0, 0.5, 0.0, 0.5])
        vs = lo_v + w * np.array([0.0, 0.0, 0.5, 0.5])
        # score each subcell by corner sign changes of both coordinates
        best, best_score = None, None
        for s in range(4):
            cu = us[s] + w / 2 * np.array([0.0, 1.0, 0.0, 1.0])
            cv = vs[s] + w / 2 * np.array([0.0, 0.0, 1.0, 1.0])
            a, b = geval(cu, cv)
            straddle = int(a.min() <= 0 <= a.max()) + int(b.min() <= 0 <= b.max())
            center = np.abs(a).mean() + np.abs(b).mean()
            score = (-straddle, center)
            if best_score is None or score < best_score:
                best, best_score = s, score
        lo_u, lo_v, w = us[best], vs[best], w / 2
    cu, cv = lo_u + w / 2, lo_v + w / 2
    a, b = geval(np.array([cu]), np.array([cv]))
    res = max(abs(float(a[0])), abs(float(b[0])))
    if res <= tol:
        return TorusZero(cu % 1.0, cv % 1.0, res, 0.0)
    return None


def _torus_pair_distances(zeros) -> np.ndarray:
    uv = np.array([[z.u, z.v] for z in zeros])
    du = dist_mod1(uv[:, None, 0], uv[None, :, 0])
    dv = dist_mod1(uv[:, None, 1], uv[None, :, 1])
    return np.hypot(du, dv)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        p = self.parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)


def _dedupe_zeros(zeros, radius):
    """Merge zeros within a torus radius; keep the best residual of each."""
    if not zeros:
        return []
    d = _torus_pair_distances(zeros)
    uf = _UnionFind(len(zeros))
    for i, j in zip(*np.nonzero(np.triu(d <= radius, k=1))):
        uf.union(int(i), int(j))
    groups: dict[int, TorusZero] = {}
    for k, z in enumerate(zeros):
        r = uf.find(k)
        if r not in groups or z.residual < groups[r].residual:
            groups[r] = z
    return sorted(groups.values(), key=lambda z: (z.u, z.v))


def _largest_chain(zeros, link) -> int:
    if not zeros:
        return 0
    d = _torus_pair_distances(zeros)
    uf = _UnionFind(len(zeros))
    for i, j in zip(*np.nonzero(np.triu(d <= link, k=1))):
        uf.union(int(i), int(j))
    sizes: dict[int, int] = {}
    for k in range(len(zeros)):
        r = uf.find(k)
        sizes[r] = sizes.get(r, 0) + 1
    return max(sizes.values())


def _square_vertices_of_zero(z: TorusZero, curve: ClosedCurve) -> np.ndarray:
    a = curve.points_at(z.u)
    b = curve.points_at(z.v)
    r = rotate90(b - a)
    return np.stack([a, b, b + r, a + r])


def _group_into_squares(zeros, curve, sign_field):
    tol = _GROUP_REL_TOL * curve.diameter
    vsets = [_square_vertices_of_zero(z, curve) for z in zeros]
    n = len(zeros)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            if _vertex_sets_match(vsets[i], vsets[j], tol):
                parent[find(i)] = find(j)

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)

    squares = []
    for members in groups.values():
        zs = sorted((zeros[k] for k in members), key=lambda z: (z.u, z.v))
        best = min(zs, key=lambda z: z.residual)
        verts = _square_vertices_of_zero(best, curve)
        params = np.sort(sign_field.project(verts) % 1.0)
        squares.append(
            SquareCandidate(
                corner_params=params,
                vertices=curve.points_at(params),
                residual=max(z.residual for z in zs),
                side_zeros=zs,
                jac_min_sv=min(z.jac_min_sv for z in zs),
            )
        )
    return squares


def _vertex_sets_match(va, vb, tol) -> bool:
    d = np.hypot(*(va[:, None, :] - vb[None, :, :]).T)
    return bool(d.min(axis=0).max() <= tol and d.min(axis=1).max() <= tol)


def _ccw_order(vertices: np.ndarray) -> np.ndarray:
    c = vertices.mean(axis=0)
    ang = np.arctan2(vertices[:, 1] - c[1], vertices[:, 0] - c[0])
    return vertices[np.argsort(ang)]


def classify_square(square: SquareCandidate, param_tol: float = 1e-12) -> SquareType:
    """Assign the cyclic-order type of an inscribed square.

    Corners are labeled 1..4 counterclockwise in the plane; the label
    sequence read in curve order (ascending corner parameter) decides the
    class.  Raises :class:`DegenerateParams` when two corner parameters
    coincide.
    """
    params = np.asarray(square.corner_params, dtype=float)
    if np.any(dist_mod1(params, np.roll(params, -1)) <= param_tol):
        raise DegenerateParams("two corner parameters coincide")
    verts = np.asarray(square.vertices, dtype=float)
    c = verts.mean(axis=0)
    ang = np.arctan2(verts[:, 1] - c[1], verts[:, 0] - c[0])
    ccw_rank = np.empty(4, dtype=int)
    ccw_rank[np.argsort(ang)] = np.arange(4)  # label-1 = smallest angle
    order = ccw_rank[np.argsort(params)] + 1  # labels in curve order
    start = int(np.argmax(order == 1))
    seq = tuple(np.roll(order, -start))
    if seq == (1, 2, 3, 4):
        return SquareType.I
    if seq == (1, 4, 3, 2):
        return SquareType.III
    return SquareType.II


def count_by_type(squares) -> dict[SquareType, int]:
    """Tally square candidates per cyclic-order type."""
    counts = {t: 0 for t in SquareType}
    for s in squares:
        counts[classify_square(s)] += 1
    return counts


def in_region_A(u: float, v: float, tol: float = 1e-9) -> bool:
    """Whether the off-diagonal torus point (u, v) has (v - u) mod 1 in (0, 1/2).

    The two off-diagonal components are separated by the diagonal and the
    antipodal loop; points within ``tol`` of either separator raise
    :class:`OnBoundary`.
    """
    d = (float(v) - float(u)) % 1.0
    if min(d, 1.0 - d) <= tol or abs(d - 0.5) <= tol:
        raise OnBoundary(f"(v - u) mod 1 = {d!r} sits on a region boundary")
    return 0.0 < d < 0.5


_SIDES = (("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"))
_LABEL_NUM = {"a": 1, "b": 2, "c": 3, "d": 4}


def prop2_case(order: tuple[str, str, str, str]) -> tuple[SquareType, int]:
    """Type and region-A side-zero count for a small square near a fold.

    ``order`` lists the square's counterclockwise corner labels a, b, c, d in
    the order the curve visits them, with all four corners inside one short
    parameter window.  A directed side then lands in region A exactly when
    it runs forward along the curve, so the count is the number of forward
    sides; the type follows from the cyclic label order as usual.
    """
    if sorted(order) != ["a", "b", "c", "d"]:
        raise ValueError(f"order must permute a, b, c, d; got {order!r}")
    pos = {label: k for k, label in enumerate(order)}
    zeros_in_a = sum(1 for x, y in _SIDES if pos[y] > pos[x])
    nums = tuple(_LABEL_NUM[l] for l in order)
    start = nums.index(1)
    seq = nums[start:] + nums[:start]
    if seq == (1, 2, 3, 4):
        sq_type = SquareType.I
    elif seq == (1, 4, 3, 2):
        sq_type = SquareType.III
    else:
        sq_type = SquareType.II
    return sq_type, zeros_in_a
