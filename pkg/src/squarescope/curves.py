"""Closed sample curves, their sign fields, validation, generation, and I/O.

A curve is a piecewise-linear closed loop through N plane samples.  The
parameter u in [0, 1) walks the samples at uniform speed in sample index
(not arc length): u = k/N is exactly sample k.

The sign field of a curve is the signed Euclidean distance to the loop:
negative inside, positive outside, and exactly 0.0 within a small band
around the loop (1e-9 times the bounding-box diagonal).
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import shapely
from scipy.spatial import cKDTree

from .errors import DegenerateSamples, NotSimple
from .geometry import shoelace_area

DEFAULT_SAMPLES = 1024
_ON_CURVE_REL_TOL = 1e-9


@dataclass
class CurveValidation:
    """Outcome of :func:`validate_curve`."""

    simple: bool
    ccw: bool
    area: float
    min_segment: float
    n_samples: int


class ClosedCurve:
    """Piecewise-linear closed curve through plane samples.

    Parameters
    ----------
    samples : (N, 2) array_like
        Vertices in traversal order; the loop closes from the last back to
        the first.  N must be at least 8 and consecutive samples must be
        distinct.
    """

    def __init__(self, samples):
        pts = np.asarray(samples, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise DegenerateSamples("samples must be an (N, 2) array")
        if len(pts) < 8:
            raise DegenerateSamples(f"need at least 8 samples, got {len(pts)}")
        gaps = np.hypot(*(np.roll(pts, -1, axis=0) - pts).T)
        if np.any(gaps == 0.0):
            k = int(np.argmin(gaps))
            raise DegenerateSamples(f"samples {k} and {k + 1} coincide")
        self.samples = pts
        self.n = len(pts)

    @property
    def diameter(self) -> float:
        """Bounding-box diagonal, used as the scale for relative tolerances."""
        span = self.samples.max(axis=0) - self.samples.min(axis=0)
        return float(np.hypot(*span))

    def points_at(self, u) -> np.ndarray:
        """Evaluate the curve at parameters u (any shape), wrapping mod 1."""
        uu = np.asarray(u, dtype=float) % 1.0
        s = uu * self.n
        k = np.floor(s).astype(int) % self.n
        frac = s - np.floor(s)
        a = self.samples[k]
        b = self.samples[(k + 1) % self.n]
        return a + frac[..., None] * (b - a)

    def tangents_at(self, u) -> np.ndarray:
        """Unit tangent of the segment containing each parameter."""
        uu = np.asarray(u, dtype=float) % 1.0
        k = np.floor(uu * self.n).astype(int) % self.n
        d = self.samples[(k + 1) % self.n] - self.samples[k]
        return d / np.hypot(*d.T)[..., None]


def validate_curve(curve: ClosedCurve, normalize: bool = False):
    """Check simplicity and orientation of a curve.

    Simplicity is delegated to shapely's noding test on the closed ring;
    orientation uses the shoelace sum.  With ``normalize=True`` a simple
    clockwise curve is returned reversed; otherwise the original curve is
    returned unchanged alongside the report.

    Returns (curve, CurveValidation).  Raises :class:`NotSimple` when the
    loop self-intersects.
    """
    pts = curve.samples
    ring = shapely.LinearRing(pts)
    if not ring.is_simple:
        raise NotSimple("curve self-intersects")
    area = shoelace_area(pts)
    gaps = np.hypot(*(np.roll(pts, -1, axis=0) - pts).T)
    report = CurveValidation(
        simple=True,
        ccw=area > 0.0,
        area=area,
        min_segment=float(gaps.min()),
        n_samples=len(pts),
    )
    if normalize and not report.ccw:
        curve = ClosedCurve(pts[::-1])
        report = CurveValidation(True, True, -area, report.min_segment, len(pts))
    return curve, report


class SignField:
    """Signed Euclidean distance to a closed curve.

    Distances come from exact point-to-segment tests against candidate
    segments picked by a k-d tree over the curve samples; the inside/outside
    sign comes from a prepared polygon containment test.  Values within
    1e-9 of the diameter from the loop are flattened to exactly 0.0.
    """

    _K_NEAREST = 6

    def __init__(self, curve: ClosedCurve):
        self.curve = curve
        pts = curve.samples
        self._tree = cKDTree(pts)
        self._a = pts
        self._ab = np.roll(pts, -1, axis=0) - pts
        ab2 = np.einsum("ij,ij->i", self._ab, self._ab)
        self._ab2 = np.where(ab2 == 0.0, 1.0, ab2)
        self._polygon = shapely.polygons(pts)
        shapely.prepare(self._polygon)
        self.zero_band = _ON_CURVE_REL_TOL * curve.diameter

    def _nearest(self, pts: np.ndarray):
        """Distance to the loop and the owning segment index and fraction."""
        n = self.curve.n
        _, iv = self._tree.query(pts, k=self._K_NEAREST, workers=-1)
        cand = np.concatenate([(iv - 1) % n, iv], axis=1)
        pa = pts[:, None, :] - self._a[cand]
        t = np.einsum("mkj,mkj->mk", pa, self._ab[cand]) / self._ab2[cand]
        t = np.clip(t, 0.0, 1.0)
        proj = self._a[cand] + t[..., None] * self._ab[cand]
        d = np.hypot(*np.moveaxis(pts[:, None, :] - proj, 2, 0))
        best = np.argmin(d, axis=1)
        rows = np.arange(len(pts))
        return d[rows, best], cand[rows, best], t[rows, best]

    def values(self, points) -> np.ndarray:
        """Signed distances for an array of points shaped (..., 2)."""
        pts = np.asarray(points, dtype=float)
        shape = pts.shape[:-1]
        flat = pts.reshape(-1, 2)
        d, _, _ = self._nearest(flat)
        inside = shapely.contains_xy(self._polygon, flat[:, 0], flat[:, 1])
        out = np.where(inside, -d, d)
        out[d <= self.zero_band] = 0.0
        return out.reshape(shape)

    def value(self, p) -> float:
        """Signed distance at a single point."""
        if hasattr(p, "as_array"):
            p = p.as_array()
        return float(self.values(np.asarray(p, dtype=float)[None, :])[0])

    def project(self, points) -> np.ndarray:
        """Parameters of the nearest loop points (shape matches inputs)."""
        pts = np.asarray(points, dtype=float)
        shape = pts.shape[:-1]
        flat = pts.reshape(-1, 2)
        _, seg, t = self._nearest(flat)
        return (((seg + t) / self.curve.n) % 1.0).reshape(shape)

    def __call__(self, p):
        return self.value(p)


def random_generic_curve(
    seed: int,
    harmonics: int = 5,
    amplitude: float = 0.15,
    n_samples: int = DEFAULT_SAMPLES,
    max_tries: int = 1000,
) -> ClosedCurve:
    """Seeded random star-like curve r(t) = 1 + sum of low harmonics.

    Cosine and sine coefficients for harmonics 1..harmonics are drawn
    uniformly from [-amplitude, amplitude].  Draws that fail validation
    (self-intersecting or clockwise) are rejected and redrawn, up to
    ``max_tries`` times, so the result is deterministic in the seed.
    """
    rng = np.random.default_rng(seed)
    theta = 2.0 * np.pi * np.arange(n_samples) / n_samples
    k = np.arange(1, harmonics + 1)
    for _ in range(max_tries):
        a = rng.uniform(-amplitude, amplitude, size=harmonics)
        b = rng.uniform(-amplitude, amplitude, size=harmonics)
        r = 1.0 + a @ np.cos(np.outer(k, theta)) + b @ np.sin(np.outer(k, theta))
        if r.min() <= 0.05:
            continue
        pts = np.column_stack([r * np.cos(theta), r * np.sin(theta)])
        try:
            curve = ClosedCurve(pts)
            _, rep = validate_curve(curve)
        except (NotSimple, DegenerateSamples):
            continue
        if rep.ccw:
            return curve
    raise NotSimple(f"no simple curve found in {max_tries} draws for seed {seed}")


def ellipse_curve(rx: float = 2.0, ry: float = 1.0, n_samples: int = DEFAULT_SAMPLES) -> ClosedCurve:
    """Axis-aligned ellipse sampled uniformly in angle."""
    theta = 2.0 * np.pi * np.arange(n_samples) / n_samples
    return ClosedCurve(np.column_stack([rx * np.cos(theta), ry * np.sin(theta)]))


def circle_curve(radius: float = 1.0, n_samples: int = DEFAULT_SAMPLES) -> ClosedCurve:
    """Circle about the origin sampled uniformly in angle."""
    return ellipse_curve(radius, radius, n_samples)


# ---------------------------------------------------------------------------
# file formats


def _format_float(x: float) -> str:
    return format(float(x), ".17g")


def curve_to_json(curve: ClosedCurve) -> str:
    """Serialize a curve to the canonical JSON text (17 significant digits)."""
    rows = ",".join(
        f"[{_format_float(x)},{_format_float(y)}]" for x, y in curve.samples
    )
    return f'{{"samples":[{rows}],"closed":true}}'


def curve_from_json(text: str) -> ClosedCurve:
    data = json.loads(text)
    if not isinstance(data, dict) or "samples" not in data:
        raise DegenerateSamples('curve JSON must be an object with a "samples" key')
    if not data.get("closed", True):
        raise DegenerateSamples("only closed curves are supported")
    return ClosedCurve(np.asarray(data["samples"], dtype=float))


def curve_to_csv(curve: ClosedCurve) -> str:
    lines = ["x,y"]
    lines += [f"{_format_float(x)},{_format_float(y)}" for x, y in curve.samples]
    return "\n".join(lines) + "\n"


def curve_from_csv(text: str) -> ClosedCurve:
    rows = []
    for i, line in enumerate(text.strip().splitlines()):
        line = line.strip()
        if not line or (i == 0 and line.lower().replace(" ", "") == "x,y"):
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise DegenerateSamples(f"CSV row {i} does not have two columns")
        rows.append((float(parts[0]), float(parts[1])))
    return ClosedCurve(np.asarray(rows, dtype=float))


def load_curve(path: str) -> ClosedCurve:
    """Load a curve from a .json or .csv file, by extension."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        if str(path).lower().endswith(".csv"):
            return curve_from_csv(text)
        return curve_from_json(text)
    except (json.JSONDecodeError, ValueError) as exc:
        raise DegenerateSamples(f"{path}: {exc}") from exc


def save_curve(curve: ClosedCurve, path: str) -> None:
    text = curve_to_csv(curve) if str(path).lower().endswith(".csv") else curve_to_json(curve)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
