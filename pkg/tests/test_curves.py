import numpy as np
import pytest

from squarescope import (
    ClosedCurve,
    DegenerateSamples,
    NotSimple,
    SignField,
    circle_curve,
    curve_from_csv,
    curve_from_json,
    curve_to_csv,
    curve_to_json,
    ellipse_curve,
    load_curve,
    random_generic_curve,
    save_curve,
    validate_curve,
)


def figure_eight():
    t = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    return ClosedCurve(np.column_stack([np.sin(2 * t), np.sin(t)]))


class TestClosedCurve:
    def test_requires_min_samples(self):
        with pytest.raises(DegenerateSamples):
            ClosedCurve([[0, 0], [1, 0], [1, 1]])

    def test_rejects_repeated_consecutive(self):
        pts = circle_curve(1.0, 16).samples.copy()
        pts[5] = pts[6]
        with pytest.raises(DegenerateSamples):
            ClosedCurve(pts)

    def test_rejects_bad_shape(self):
        with pytest.raises(DegenerateSamples):
            ClosedCurve(np.zeros((10, 3)))

    def test_points_at_wraps(self):
        c = circle_curve(1.0, 64)
        assert np.allclose(c.points_at(0.0), c.points_at(1.0))
        assert np.allclose(c.points_at(0.25), [0.0, 1.0], atol=1e-3)

    def test_points_at_interpolates_segments(self):
        c = ClosedCurve([[float(k), 0.0] for k in range(8)] + [[7.0, 1.0]])
        mid = c.points_at(0.5 / 9)
        assert np.allclose(mid, [0.5, 0.0])

    def test_diameter_is_bbox_diagonal(self):
        c = ellipse_curve(2.0, 1.0, 64)
        assert c.diameter == pytest.approx(np.hypot(4.0, 2.0), rel=1e-3)

    def test_tangents_unit_length(self):
        c = ellipse_curve(2.0, 1.0, 128)
        t = c.tangents_at(np.linspace(0, 1, 50))
        assert np.allclose(np.hypot(*t.T), 1.0)


class TestValidation:
    def test_circle_valid(self):
        c = circle_curve(1.0, 360)
        _, rep = validate_curve(c)
        assert rep.simple and rep.ccw
        assert rep.area == pytest.approx(np.pi, rel=1e-3)

    def test_figure_eight_not_simple(self):
        with pytest.raises(NotSimple):
            validate_curve(figure_eight())

    def test_clockwise_detected(self):
        cw = ClosedCurve(circle_curve(1.0, 64).samples[::-1])
        _, rep = validate_curve(cw)
        assert rep.simple and not rep.ccw

    def test_clockwise_normalized(self):
        cw = ClosedCurve(circle_curve(1.0, 64).samples[::-1])
        fixed, rep = validate_curve(cw, normalize=True)
        assert rep.ccw and rep.area > 0
        assert np.array_equal(fixed.samples, cw.samples[::-1])


class TestSignField:
    def test_circle_values(self):
        f = SignField(circle_curve(1.0, 360))
        assert f.value(np.array([0.0, 0.0])) == pytest.approx(-1.0, abs=1e-3)
        assert f.value(np.array([2.0, 0.0])) == pytest.approx(1.0, abs=1e-3)

    def test_on_curve_zero(self):
        c = circle_curve(1.0, 360)
        f = SignField(c)
        assert abs(f.value(c.samples[10])) < 1e-12

    def test_sign_convention_ellipse(self):
        f = SignField(ellipse_curve(2.0, 1.0, 256))
        inside = f.values(np.array([[0.0, 0.0], [1.0, 0.3]]))
        outside = f.values(np.array([[3.0, 0.0], [0.0, 2.0]]))
        assert (inside < 0).all() and (outside > 0).all()

    def test_values_continuous_across_curve(self):
        f = SignField(circle_curve(1.0, 720))
        xs = np.linspace(0.9, 1.1, 41)
        vals = f.values(np.column_stack([xs, np.zeros_like(xs)]))
        assert np.all(np.diff(vals) > 0)
        assert abs(vals[20]) < 2e-5


class TestRandomCurves:
    def test_deterministic_in_seed(self):
        a = random_generic_curve(5, n_samples=256)
        b = random_generic_curve(5, n_samples=256)
        assert np.array_equal(a.samples, b.samples)

    def test_simple_and_ccw(self):
        for seed in range(4):
            c = random_generic_curve(seed, n_samples=512)
            _, rep = validate_curve(c)
            assert rep.simple and rep.ccw


class TestFileFormats:
    def test_json_roundtrip_byte_identical(self):
        c = random_generic_curve(2, n_samples=128)
        text = curve_to_json(c)
        again = curve_to_json(curve_from_json(text))
        assert text == again

    def test_csv_roundtrip(self):
        c = random_generic_curve(3, n_samples=128)
        back = curve_from_csv(curve_to_csv(c))
        assert np.array_equal(c.samples, back.samples)

    def test_json_requires_samples_key(self):
        with pytest.raises(DegenerateSamples):
            curve_from_json('{"nope": 1}')

    def test_csv_requires_two_columns(self):
        with pytest.raises(DegenerateSamples):
            curve_from_csv("x,y\n1,2,3\n")

    def test_load_save_by_extension(self, tmp_path):
        c = ellipse_curve(2.0, 1.0, 64)
        for name in ("c.json", "c.csv"):
            p = tmp_path / name
            save_curve(c, str(p))
            back = load_curve(str(p))
            assert np.allclose(c.samples, back.samples)

    def test_load_curve_bad_json_diagnostic(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("not json at all")
        with pytest.raises(DegenerateSamples, match="bad.json"):
            load_curve(str(p))
