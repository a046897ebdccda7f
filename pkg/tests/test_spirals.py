import cmath

import numpy as np
import pytest

from squarescope import (
    BranchJump,
    LiftedPath,
    MultiplierRelation,
    OnPath,
    OriginPath1D,
    SplitPair,
    TruncationTooShort,
    WindowExhausted,
    ZeroElement,
    derivation_trajectory,
    derive,
    find_spiral_angle,
    in_region_U,
    is_good,
    is_relation_avoiding,
    k_index,
    lift_log,
    spiral_path,
    square_corner_set,
    square_relation_holds,
    swept_area_pair,
)

T_MAX = 3 * np.pi


@pytest.fixture(scope="module")
def decay_spiral():
    # p(t) = exp((-1+i) t): multiplier ties happen exactly at dt = 2 pi k
    return spiral_path(1.0, -1.0 + 1.0j, T_MAX, 4096)


@pytest.fixture(scope="module")
def vertical_line():
    t = np.linspace(0.0, 1.0, 301)
    return LiftedPath(t, 3j * t, 0.0)


class TestPathTypes:
    def test_spiral_path_samples(self):
        p = spiral_path(2.0, -0.5 + 1.0j, 4.0, 64)
        assert len(p.t) == 64 and p.t[0] == 0.0 and p.t[-1] == 4.0
        assert p.z[0] == 2.0
        assert p.z[10] == pytest.approx(2.0 * np.exp((-0.5 + 1.0j) * p.t[10]))

    def test_rejects_unsorted_times(self):
        with pytest.raises(ValueError):
            OriginPath1D([0.0, 2.0, 1.0], [1, 1, 1])

    def test_rejects_zero_values(self):
        with pytest.raises(ValueError):
            OriginPath1D([0.0, 1.0], [1.0, 0.0])

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError):
            OriginPath1D([0.0, 1.0, 2.0], [1.0, 2.0])

    def test_multiplier_validation(self):
        with pytest.raises(ValueError):
            MultiplierRelation([0.0])
        with pytest.raises(ValueError):
            MultiplierRelation([1.2])
        rel = MultiplierRelation(0.5j)
        assert rel.multipliers.shape == (1,)


class TestRelationAvoiding:
    def test_exact_tie_detected(self, decay_spiral):
        rel = MultiplierRelation([np.exp(-2 * np.pi)])
        chk = is_relation_avoiding(decay_spiral, rel)
        assert not chk.avoiding
        assert chk.min_gap < 1e-12
        t1, t2, idx = chk.witness
        assert idx == 0
        assert t1 - t2 == pytest.approx(2 * np.pi, abs=1e-9)

    def test_near_miss_passes(self, decay_spiral):
        rel = MultiplierRelation([np.exp(-np.pi)])
        chk = is_relation_avoiding(decay_spiral, rel)
        assert chk.avoiding
        assert 1e-6 < chk.min_gap < 1e-3
        assert chk.witness is not None

    def test_injectivity_floor_is_sampling_limited(self, decay_spiral):
        rel = MultiplierRelation([1.0])
        loose = is_relation_avoiding(decay_spiral, rel, tol=1e-6)
        tight = is_relation_avoiding(decay_spiral, rel, tol=1e-8)
        # adjacent tail samples sit ~2.6e-7 apart, inside the loose
        # tolerance but outside the tight one
        assert not loose.avoiding and tight.avoiding
        assert loose.min_gap == pytest.approx(tight.min_gap)
        assert 1e-8 < loose.min_gap < 1e-6

    def test_multi_multiplier_picks_global_minimum(self, decay_spiral):
        rel = MultiplierRelation([np.exp(-np.pi), np.exp(-2 * np.pi)])
        chk = is_relation_avoiding(decay_spiral, rel)
        assert not chk.avoiding
        assert chk.witness[2] == 1


class TestLiftLog:
    def test_pure_spiral_lifts_to_a_line(self):
        path = spiral_path(1.0, -0.2 + 1.0j, T_MAX, 4096)
        lifted = lift_log(path, 0.0)
        # ell(t) = t (1 + 0.2 i) / (2 pi), so ell(3 pi) = 1.5 + 0.3 i
        assert lifted.ell[0] == 0.0
        assert lifted.ell[-1] == pytest.approx(1.5 + 0.3j, abs=1e-9)

    def test_roundtrip(self):
        path = spiral_path(0.8 * np.exp(0.25j * np.pi), -0.35 + 0.8j, T_MAX, 4096)
        base = cmath.log(path.z[0]) / (2j * np.pi)
        lifted = lift_log(path, base)
        back = np.exp(2j * np.pi * lifted.ell)
        assert np.abs(back - path.z).max() < 1e-9

    def test_base_must_sit_over_first_value(self):
        path = spiral_path(1.0, -0.2 + 1.0j, 1.0, 64)
        with pytest.raises(ValueError):
            lift_log(path, 0.3)

    def test_integer_base_shift_translates_lift(self):
        path = spiral_path(1.0, -0.2 + 1.0j, 1.0, 64)
        l0 = lift_log(path, 0.0)
        l3 = lift_log(path, 3.0)
        assert np.allclose(l3.ell, l0.ell + 3.0)

    def test_coarse_sampling_raises_branch_jump(self):
        path = OriginPath1D([0.0, 1.0, 2.0], [1.0, -1.0, 1.0])
        with pytest.raises(BranchJump):
            lift_log(path, 0.0)


class TestRegionU:
    def test_left_of_the_line_is_inside(self, vertical_line):
        assert in_region_U(-1.0 + 1.0j, vertical_line)

    def test_right_of_the_line_is_outside(self, vertical_line):
        assert not in_region_U(1.0 + 1.0j, vertical_line)

    def test_on_path_raises(self, vertical_line):
        with pytest.raises(OnPath):
            in_region_U(1.5j, vertical_line)

    def test_short_truncation_raises(self, vertical_line):
        with pytest.raises(TruncationTooShort):
            in_region_U(-1.0 + 2.9j, vertical_line)
        assert in_region_U(-1.0 + 2.7j, vertical_line)

    def test_spiral_lift_membership(self):
        lifted = lift_log(spiral_path(1.0, -0.02 + 1.0j, 60 * np.pi, 60000), 0.0)
        # the lift climbs to Im ~ 0.19 rising rightward from 0; points left
        # of the start are in U, points under the line are walled off
        assert in_region_U(-0.5 + 0.05j, lifted, margin=0.1)
        assert not in_region_U(5.0 + 0.05j, lifted, margin=0.1)


class TestKIndex:
    @pytest.mark.parametrize(
        "offset,expect",
        [(-0.3 + 0.5j, 0), (-2.2 + 0.5j, 2), (0.4 + 0.5j, -1)],
    )
    def test_frozen_examples(self, vertical_line, offset, expect):
        assert k_index(offset, vertical_line) == expect

    def test_on_path_translates_skipped(self, vertical_line):
        # k = 0 puts 0.5j exactly on the line; the scan keeps going down
        assert k_index(0.5j, vertical_line) == -1

    def test_accepts_lifted_path_argument(self, vertical_line):
        t = np.linspace(0.0, 1.0, 50)
        other = LiftedPath(t, -0.3 + 0.5j + 0.0j * t, -0.3 + 0.5j)
        assert k_index(other, vertical_line) == 0

    def test_window_top_hit_raises(self, vertical_line):
        with pytest.raises(WindowExhausted):
            k_index(-100.0 + 0.5j, vertical_line)

    def test_window_miss_raises(self, vertical_line):
        with pytest.raises(WindowExhausted):
            k_index(100.0 + 0.5j, vertical_line)


class TestSplitPairs:
    def test_lower_half_plane_rejected(self):
        with pytest.raises(ValueError):
            SplitPair(1.0 - 1.0j, 1.0j)

    def test_derive_subtracts_from_higher_element(self):
        assert derive(SplitPair(1 + 3j, 2 + 1j)) == SplitPair(-1 + 2j, 2 + 1j)
        assert derive(SplitPair(-1 + 2j, 2 + 1j)) == SplitPair(-3 + 1j, 2 + 1j)
        assert derive(SplitPair(-3 + 1j, 2 + 1j)) == SplitPair(-5 + 0j, 2 + 1j)

    def test_derive_equal_elements_degenerate(self):
        assert derive(SplitPair(1 + 1j, 1 + 1j)) is None

    def test_is_good(self):
        assert is_good(SplitPair(-1 + 2j, 2 + 1j))
        assert not is_good(SplitPair(2 + 1j, -1 + 2j))
        with pytest.raises(ZeroElement):
            is_good(SplitPair(0.0, 1.0j))

    def test_trajectory_reaches_real_element(self):
        run = derivation_trajectory(SplitPair(1 + 3j, 2 + 1j))
        assert run.reason == "real-element"
        assert run.steps == 3
        assert [p.p for p in run.pairs] == [1 + 3j, -1 + 2j, -3 + 1j, -5 + 0j]
        assert all(p.q == 2 + 1j for p in run.pairs)

    def test_trajectory_step_limit(self):
        run = derivation_trajectory(
            SplitPair(1 + 3j, 2 + 1j), max_steps=10, stop_at_real=False
        )
        assert run.reason == "step-limit"
        assert run.steps == 10 and len(run.pairs) == 11
        assert all(is_good(p) for p in run.pairs)

    def test_trajectory_degenerate(self):
        run = derivation_trajectory(SplitPair(2 + 1j, 2 + 1j), real_tol=0.0)
        assert run.reason == "degenerate"
        assert run.steps == 0

    def test_goodness_preserved_along_derivation(self):
        rng = np.random.default_rng(7)
        violations = 0
        for _ in range(1000):
            z1 = complex(rng.uniform(-2, 2), rng.uniform(1e-3, 2))
            z2 = complex(rng.uniform(-2, 2), rng.uniform(1e-3, 2))
            pair = SplitPair(z1, z2)
            if not is_good(pair):
                pair = SplitPair(z2, z1)
            if not is_good(pair):
                continue
            run = derivation_trajectory(pair, max_steps=300)
            if not all(is_good(p) for p in run.pairs):
                violations += 1
        assert violations == 0

    def test_commensurable_heights_terminate_within_euclid_bound(self):
        # imaginary parts 7/8 and 4/8: the subtractive chain on (7, 4)
        # finishes in 5 exact steps, well under the m + n bound
        run = derivation_trajectory(SplitPair(-0.5 + 0.875j, 0.3 + 0.5j))
        assert run.reason == "real-element"
        assert run.steps == 5 <= 7 + 4
        assert run.pairs[-1].p.imag == 0.0
        assert all(is_good(p) for p in run.pairs)


class TestSpiralAngle:
    def test_single_offset_closed_form(self):
        res = find_spiral_angle([(0.3 + 0.5j, 0)])
        assert res.feasible
        assert res.theta_high == pytest.approx(cmath.phase(0.3 + 0.5j), abs=1e-15)
        assert res.theta_low == pytest.approx(cmath.phase(1.3 + 0.5j), abs=1e-15)
        assert res.theta == pytest.approx(0.6987753301712658, abs=1e-12)
        assert res.violating is None

    def test_empty_family_is_vertical(self):
        res = find_spiral_angle([])
        assert res.feasible and res.theta == pytest.approx(np.pi / 2)
        assert (res.theta_low, res.theta_high) == (0.0, np.pi)

    def test_infeasible_pair_reports_indices(self):
        res = find_spiral_angle([(0.3 + 0.5j, 0), (-0.95 + 0.5j, 0)])
        assert not res.feasible
        assert res.theta is None
        assert res.violating == (0, 1)
        assert res.theta_low > res.theta_high

    def test_zero_translate_rejected(self):
        with pytest.raises(ZeroElement):
            find_spiral_angle([(-2.0 + 0.0j, 2)])
        with pytest.raises(ZeroElement):
            find_spiral_angle([(-2.0 + 0.0j, 1)])


class TestSquareRelation:
    def test_corner_set(self):
        assert square_corner_set(0.0, 1.0) == (1j, 1 + 1j)
        c1, c2 = square_corner_set(1.0, 1j)
        assert c1 == pytest.approx(1 + (1j * (1j - 1)))
        assert c2 == pytest.approx(1j + (1j * (1j - 1)))

    def test_related_edges(self):
        assert square_relation_holds(0.0, 1.0, 1j, 1 + 1j)
        assert square_relation_holds(1j, 1 + 1j, 0.0, 1.0)

    def test_unrelated_edges(self):
        assert not square_relation_holds(0.0, 1.0, 5 + 5j, 6 + 5j)

    def test_tolerance(self):
        # shift the whole second edge so no corner matches exactly
        assert square_relation_holds(0.0, 1.0, 1j + 1e-12, 1 + 1j + 1e-12)
        assert not square_relation_holds(0.0, 1.0, 1j + 1e-6, 1 + 1j + 1e-6, tol=1e-9)


class TestSweptAreas:
    def test_real_decay_closed_form(self):
        # edge (1, i) under z -> z e^{at} with a real sweeps the region
        # between two right triangles: area 0.5 (1 - e^{2 a T})
        a1, a2 = swept_area_pair((1.0, 1j), -0.5, 20.0, steps=4000)
        expect = 0.5 * (1.0 - np.exp(-20.0))
        assert a1 == pytest.approx(expect, abs=1e-9)
        assert a2 == pytest.approx(expect, abs=1e-9)

    def test_coincident_endpoints_sweep_nothing(self):
        assert swept_area_pair((1 + 1j, 1 + 1j), -0.3, 10.0) == (0.0, 0.0)

    def test_growth_rejected(self):
        with pytest.raises(ValueError):
            swept_area_pair((1.0, 1j), 0.1 + 1j, 10.0)

    def test_too_few_steps_rejected(self):
        with pytest.raises(ValueError):
            swept_area_pair((1.0, 1j), -0.5, 10.0, steps=100)

    def test_quarter_turn_edge_gap(self):
        a1, a2 = swept_area_pair((1.0, 1j), -0.2 + 1j, 40.0)
        assert abs(a1 - a2) / max(a1, a2) < 5e-3

    @pytest.mark.parametrize("seed", [100, 103])
    def test_quarter_turn_family_spot_check(self, seed):
        r = np.random.default_rng(seed)
        x1 = r.uniform(0.3, 2.0) * np.exp(2j * np.pi * r.uniform())
        a = complex(-r.uniform(0.1, 0.6), r.uniform(0.5, 2.0))
        t_max = r.uniform(10.0, 30.0)
        a1, a2 = swept_area_pair((x1, 1j * x1), a, t_max)
        assert abs(a1 - a2) / max(a1, a2) < 5e-3
