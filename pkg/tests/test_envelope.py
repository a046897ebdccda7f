import os

import numpy as np
import pytest

from squarescope import (
    CylinderPath,
    EnvelopeCandidate,
    PointOnLoop,
    SignField,
    ZeroOnLoop,
    antidiagonal_winding,
    build_envelope_candidate,
    circle_curve,
    degree_consistency,
    find_inscribed_squares,
    lemma2_check,
    load_curve,
    sigma_sign,
    trace_quadrant_components,
    verify_envelope,
)


def wedge_env(J=100, w0=0.1, span=1.0, bulge=2.0, w_end=0.0):
    """Two horizontal paths pinching to the right, bulging in between.

    Index runs 0..2J with mid=J at x=0; the + side spans x in [0, span].
    """
    k = np.arange(-J, J + 1)
    tau = k / J
    x = span * tau
    # width profile: w0 at mid, bulge in the + interior, w_end at tau=1
    w = np.where(
        tau >= 0,
        (w0 * (1 - tau) + w_end * tau)
        * (1 + bulge * np.sin(np.pi * np.clip(tau, 0, 1)) ** 2),
        w0 * (1 - 0.2 * tau),
    )
    e1 = np.column_stack([x, w])
    e2 = np.column_stack([x, -w])
    return EnvelopeCandidate(e1, e2)


def orbit_env(turns, J=200):
    """e1 sits near (0.5, 0) on a tiny arc; e2 orbits the origin `turns` times.

    The completed corner s1 at the middle edge is (0.5, 0.5), strictly
    inside e2's unit orbit and away from both paths, so the truncation
    winding is exactly -turns.
    """
    k = np.arange(-J, J + 1)
    tau = np.clip(k, 0, None) / J
    ang1 = 0.15 * tau
    e1 = 0.5 * np.column_stack([np.cos(ang1), np.sin(ang1)])
    ang2 = -2.0 * np.pi * turns * tau
    e2 = np.column_stack([np.cos(ang2), np.sin(ang2)])
    return EnvelopeCandidate(e1, e2)


def circle_band_path(m=401, reach=0.3):
    """Synthetic cylinder path inside the circle's negative quadrant band."""
    tau = np.linspace(0.0, 1.0, m)
    u = reach * tau
    h = 0.02 + 0.18 * np.sin(np.pi * tau)
    pts = np.column_stack([u, u + h])
    return CylinderPath(
        points=pts, spanning=False, h_min=float(h.min()), h_max=float(h.max()), size=m
    )


class TestAntidiagonal:
    def test_ellipse_winding_zero(self, ellipse_1024, ellipse_field):
        rep = antidiagonal_winding(ellipse_1024, ellipse_field, samples=4096)
        assert rep.winding == 0
        assert rep.min_norm > 0.0
        assert rep.samples == 4096

    def test_circle_loop_is_zero_free(self):
        c = circle_curve(1.0, 1024)
        rep = antidiagonal_winding(c, samples=2048)
        # antipodal pairs complete to corners at distance sqrt(5), so the
        # loop sits at the constant point (sqrt(5)-1, sqrt(5)-1)
        expect = np.sqrt(2.0) * (np.sqrt(5.0) - 1.0)
        assert rep.winding == 0
        assert rep.min_norm == pytest.approx(expect, abs=1e-3)

    def test_exact_vertex_hit_raises(self, fixtures_dir):
        diamond = load_curve(os.path.join(fixtures_dir, "diamond_slow.json"))
        with pytest.raises(ZeroOnLoop) as info:
            antidiagonal_winding(diamond, samples=4096)
        assert info.value.min_norm < 1e-9

    def test_tight_tolerance_can_pass_the_diamond(self, fixtures_dir):
        diamond = load_curve(os.path.join(fixtures_dir, "diamond_slow.json"))
        rep = antidiagonal_winding(diamond, samples=4096, zero_tol=-1.0)
        assert rep.min_norm < 1e-9


class TestDegreeConsistency:
    def test_ellipse(self, ellipse_search, ellipse_1024, ellipse_field):
        search, _ = ellipse_search
        anti = antidiagonal_winding(ellipse_1024, ellipse_field)
        rep = degree_consistency(search, anti)
        assert rep.winding == 0
        assert rep.zeros_in_a == 4
        assert rep.boundary_zeros == 0
        assert rep.consistent

    def test_ellipse_corner_param_gaps(self, ellipse_search):
        search, _ = ellipse_search
        params = np.sort(search.squares[0].corner_params)
        gaps = np.diff(np.append(params, params[0] + 1.0))
        assert np.allclose(np.sort(gaps), [0.1476, 0.1476, 0.3524, 0.3524], atol=2e-3)

    def test_census_consistency(self, census):
        zero_free = [e for e in census["entries"] if e["zero_free"]]
        assert len(zero_free) >= 10
        assert all(e["consistent"] for e in zero_free)


class TestQuadrantComponents:
    def test_circle_band(self):
        c = circle_curve(1.0, 720)
        f = SignField(c)
        comps = trace_quadrant_components(c, f, grid=256)
        assert len(comps) == 1
        band = comps[0]
        # both corners sit inside exactly when the pair spans less than a
        # quarter turn, so the region is the band 0 < v - u < 1/4
        assert band.h_max == pytest.approx(0.25, abs=2.0 / 256)
        assert band.h_min <= 3.0 / 256
        assert not band.spanning
        # re-evaluate the torus map along the thinned path
        from squarescope import g_map

        for u, v in band.points[:: max(1, len(band.points) // 16)]:
            a, b = g_map(c, f, float(u), float(v))
            assert a < 0 and b < 0

    def test_path_steps_are_grid_neighbors(self):
        c = circle_curve(1.0, 720)
        comps = trace_quadrant_components(c, grid=128)
        pts = comps[0].points * 128
        d = np.abs(np.diff(pts, axis=0))
        d = np.minimum(d, 128 - d)
        assert d.max() <= 1.0 + 1e-9

    def test_deterministic(self):
        c = circle_curve(1.0, 720)
        a = trace_quadrant_components(c, grid=128)
        b = trace_quadrant_components(c, grid=128)
        assert len(a) == len(b)
        for pa, pb in zip(a, b):
            assert np.array_equal(pa.points, pb.points)

    def test_ellipse_no_spanning(self, ellipse_1024, ellipse_field):
        comps = trace_quadrant_components(ellipse_1024, ellipse_field, grid=256)
        assert comps and not any(p.spanning for p in comps)

    def test_census_no_spanning(self, census):
        assert all(e["spanning"] == 0 for e in census["entries"])


@pytest.fixture(scope="module")
def circle_setup():
    c = circle_curve(1.0, 1024)
    return c, SignField(c)


class TestVerifyEnvelope:
    def test_band_candidate_items(self, circle_setup):
        c, f = circle_setup
        env = build_envelope_candidate(circle_band_path(), c, f, push=True)
        check = verify_envelope(env, c, f)
        assert check.items == {1: True, 2: True, 3: True, 4: False}
        assert check.loop_winding == 0
        assert not check.all_passed

    def test_push_moves_paths_outside(self, circle_setup):
        c, f = circle_setup
        flat = build_envelope_candidate(circle_band_path(), c, f, push=False)
        assert np.abs(f.values(flat.e1)).max() < 1e-6
        pushed = build_envelope_candidate(circle_band_path(), c, f, push=True)
        assert f.values(pushed.e1).min() > 0
        assert f.values(pushed.e2).min() > 0

    def test_inner_path_fails_item_one(self, circle_setup):
        c, f = circle_setup
        env = build_envelope_candidate(circle_band_path(), c, f, push=True)
        bad = EnvelopeCandidate(0.5 * env.e1, env.e2)
        check = verify_envelope(bad, c, f)
        assert not check.items[1]
        assert any("outer paths" in n for n in check.notes)

    def test_wide_ends_fail_item_three(self, circle_setup):
        c, f = circle_setup
        path = circle_band_path()
        path.points[:, 1] = path.points[:, 0] + 0.24  # constant wide offset
        env = build_envelope_candidate(path, c, f, push=True)
        check = verify_envelope(env, c, f)
        assert not check.items[3]
        assert any("end gaps" in n for n in check.notes)

    def test_exterior_probe_noted(self, circle_setup):
        c, f = circle_setup
        env = build_envelope_candidate(circle_band_path(), c, f, push=True)
        check = verify_envelope(env, c, f, probe=(5.0, 5.0))
        assert not check.items[4]
        assert any("probe lies outside" in n for n in check.notes)
        assert check.loop_winding is None


class TestSigmaSign:
    def test_no_orbit_gives_plus(self):
        env = orbit_env(0)
        assert sigma_sign(env, 1, "+", len(env) - 1 - env.mid) == 1

    def test_single_orbit_gives_minus(self):
        env = orbit_env(1)
        assert sigma_sign(env, 1, "+", len(env) - 1 - env.mid) == -1

    def test_double_orbit_gives_plus(self):
        env = orbit_env(2)
        assert sigma_sign(env, 1, "+", len(env) - 1 - env.mid) == 1

    def test_still_side_winds_zero(self):
        env = orbit_env(1)
        assert sigma_sign(env, 1, "-", env.mid) == 1

    def test_argument_validation(self):
        env = orbit_env(1)
        with pytest.raises(ValueError):
            sigma_sign(env, 3, "+", 1)
        with pytest.raises(ValueError):
            sigma_sign(env, 1, "up", 1)
        with pytest.raises(IndexError):
            sigma_sign(env, 1, "+", len(env))
        with pytest.raises(IndexError):
            sigma_sign(env, 1, "-", env.mid + 1)
        with pytest.raises(IndexError):
            sigma_sign(env, 1, "+", -1)

    def test_probe_on_loop_raises(self):
        x = np.arange(101) / 25.0  # 0 .. 4, mid at x = 2
        e1 = np.column_stack([x, np.zeros_like(x)])
        e2 = np.column_stack([x, np.full_like(x, -0.5)])
        env = EnvelopeCandidate(e1, e2)
        # s1[mid] = (2.5, 0), which lies on e1's track
        assert np.allclose(env.s1[env.mid], [2.5, 0.0])
        with pytest.raises(PointOnLoop):
            sigma_sign(env, 1, "+", len(env) - 1 - env.mid)


class TestLemma2:
    def test_pinching_wedge_passes(self):
        rep = lemma2_check(wedge_env())
        assert rep.sigma_plus == (-1, -1)
        assert rep.sigma_minus == (1, 1)
        assert rep.all_passed
        assert rep.clustering == {"+": True}
        assert all(s in (-1, 1) for tail in rep.tails.values() for s in tail)
        assert rep.tails["sigma1+"][-1] == -1

    def test_escaping_probe_breaks_direction_flip(self):
        # fast linear taper with no bulge: the corner probe exits the wedge
        # and both directions report +1
        rep = lemma2_check(wedge_env(bulge=0.0, w_end=0.0, span=2.0))
        assert not rep.all_passed
        failed = [name for name, ok in rep.checks if not ok]
        assert failed == ["sigma1+ == -sigma1-"]

    def test_separated_endpoints_break_clustering(self):
        rep = lemma2_check(wedge_env(w_end=0.08))
        assert rep.sigma_plus == (-1, -1)
        assert not rep.all_passed
        failed = [name for name, ok in rep.checks if not ok]
        assert failed == ["paths cluster toward + end"]
        assert rep.clustering["+"] is False

    def test_candidate_shape_validation(self):
        with pytest.raises(ValueError):
            EnvelopeCandidate(np.zeros((5, 2)), np.zeros((6, 2)))
