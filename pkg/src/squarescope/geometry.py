"""Plane primitives: 90-degree rotation, square corner maps, winding numbers.

Everything here is stateless and operates on plain floats or numpy arrays
with a trailing coordinate axis of length 2.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PointOnLoop


@dataclass(frozen=True)
class Point2:
    """A point (or vector) in the plane."""

    x: float
    y: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)

    @staticmethod
    def of(arr) -> "Point2":
        a = np.asarray(arr, dtype=float)
        return Point2(float(a[0]), float(a[1]))


def rotate90(v):
    """Rotate vectors by a quarter turn counterclockwise: (x, y) -> (-y, x).

    Accepts a Point2 or any array shaped (..., 2); the return type matches.
    """
    if isinstance(v, Point2):
        return Point2(-v.y, v.x)
    a = np.asarray(v, dtype=float)
    return np.stack([-a[..., 1], a[..., 0]], axis=-1)


def square_corners(a, b):
    """Complete the directed edge a -> b to a square, counterclockwise.

    Returns (s1, s2) with s1 = a + rot(b - a) and s2 = b + rot(b - a) where
    rot is the quarter turn of :func:`rotate90`.  The quadrilateral
    (a, b, s2, s1) is then a positively oriented square whenever a != b.
    """
    if isinstance(a, Point2):
        av, bv = a.as_array(), b.as_array()
        r = rotate90(bv - av)
        return Point2.of(av + r), Point2.of(bv + r)
    av = np.asarray(a, dtype=float)
    bv = np.asarray(b, dtype=float)
    r = rotate90(bv - av)
    return av + r, bv + r


def shoelace_area(loop: np.ndarray) -> float:
    """Signed area of a closed polyline (positive = counterclockwise)."""
    p = np.asarray(loop, dtype=float)
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def point_segment_distance(p, a, b) -> float:
    """Euclidean distance from point p to the segment [a, b]."""
    p = np.asarray(p, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ab = b - a
    ab2 = float(ab @ ab)
    if ab2 == 0.0:
        return float(np.hypot(*(p - a)))
    t = np.clip(float((p - a) @ ab) / ab2, 0.0, 1.0)
    return float(np.hypot(*(p - (a + t * ab))))


def polyline_distance(p, loop: np.ndarray) -> float:
    """Distance from p to a closed polyline given by its vertices."""
    pts = np.asarray(loop, dtype=float)
    a = pts
    b = np.roll(pts, -1, axis=0)
    ab = b - a
    ab2 = np.einsum("ij,ij->i", ab, ab)
    ab2 = np.where(ab2 == 0.0, 1.0, ab2)
    q = np.asarray(p, dtype=float)
    t = np.clip(np.einsum("ij,ij->i", q[None, :] - a, ab) / ab2, 0.0, 1.0)
    proj = a + t[:, None] * ab
    return float(np.min(np.hypot(*(q[None, :] - proj).T)))


def winding_number(loop: np.ndarray, p, on_tol: float | None = None) -> int:
    """Winding number of a closed polyline around p by angle summation.

    The loop is the vertex array of a closed polyline (last vertex connects
    back to the first).  Raises :class:`PointOnLoop` when p is within
    ``on_tol`` of any segment; by default the tolerance is 1e-9 times the
    loop's bounding-box diagonal.

    The turn angles are summed with atan2, so the result is exact after
    rounding as long as p stays off the loop.
    """
    pts = np.asarray(loop, dtype=float)
    q = np.asarray(p, dtype=float) if not isinstance(p, Point2) else p.as_array()
    if on_tol is None:
        span = pts.max(axis=0) - pts.min(axis=0)
        on_tol = 1e-9 * float(np.hypot(*span))
    if polyline_distance(q, pts) <= on_tol:
        raise PointOnLoop(f"point {q.tolist()} lies on the loop within {on_tol:.3e}")
    return _winding_off_loop(pts, q)


def _winding_off_loop(pts: np.ndarray, q: np.ndarray) -> int:
    d = pts - q[None, :]
    ang = np.arctan2(d[:, 1], d[:, 0])
    turns = np.diff(np.append(ang, ang[0]))
    turns = (turns + np.pi) % (2.0 * np.pi) - np.pi
    return int(round(float(np.sum(turns)) / (2.0 * np.pi)))


def winding_numbers_bulk(loop: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Winding numbers of one closed polyline around many points at once.

    No on-loop guard: callers filter points near the loop themselves.
    Returns an int array of shape (len(points),).
    """
    pts = np.asarray(loop, dtype=float)
    qs = np.asarray(points, dtype=float)
    d = pts[None, :, :] - qs[:, None, :]
    ang = np.arctan2(d[..., 1], d[..., 0])
    turns = np.diff(np.concatenate([ang, ang[:, :1]], axis=1), axis=1)
    turns = (turns + np.pi) % (2.0 * np.pi) - np.pi
    return np.rint(turns.sum(axis=1) / (2.0 * np.pi)).astype(int)


def dist_mod1(a, b):
    """Circle distance between parameters taken modulo 1."""
    d = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)) % 1.0
    return np.minimum(d, 1.0 - d)
