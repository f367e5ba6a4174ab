import json
import math

import numpy as np
import pytest
from hypothesis import given

from projgeom.errors import DegenerateGeodesicError, DimensionError, NormalizationError, ZeroVectorError
from projgeom.fubini_study import (
    DiscreteCurve,
    curve_length,
    fs_distance,
    fs_line_element_sq,
    geodesic_arc,
    geodesic_interpolate,
    overlap_modulus,
)
from projgeom.hilbert import normalize, random_states

from strategies import nonzero_scalars, states

S = 1 / math.sqrt(2)


def brute_force_length(a, b, n):
    """Chord sum along the great circle built directly from the overlap, independent of the library."""
    a = np.asarray(a, complex) / np.linalg.norm(a)
    b = np.asarray(b, complex) / np.linalg.norm(b)
    ov = np.vdot(a, b)
    if abs(ov) > 0:
        b = b * np.conj(ov) / abs(ov)
    cos = min(1.0, abs(ov))
    theta = math.acos(cos)
    u = b - cos * a
    u /= np.linalg.norm(u)
    ts = np.linspace(0, theta, n)
    pts = np.cos(ts)[:, None] * a + np.sin(ts)[:, None] * u
    total = 0.0
    for p, q in zip(pts[:-1], pts[1:]):
        total += math.sqrt(max(0.0, 4 * (1 - abs(np.vdot(p, q)) ** 2)))
    return total


class TestLineElement:
    def test_identical(self):
        assert fs_line_element_sq([S, S], [S, S]) == 0

    def test_orthogonal_is_four(self):
        assert fs_line_element_sq([1, 0], [0, 1]) == 4

    def test_half_overlap(self):
        assert fs_line_element_sq([1, 0], [S, S]) == pytest.approx(2, abs=1e-14)

    def test_requires_normalized(self):
        with pytest.raises(NormalizationError):
            fs_line_element_sq([2, 0], [1, 0])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            fs_line_element_sq([1, 0], [1, 0, 0])

    @given(states(), states(), st_phase := nonzero_scalars())
    def test_gauge_and_symmetry(self, a, b, lam):
        a, b = normalize(a).amplitudes, normalize(b).amplitudes
        ph = lam / abs(lam)
        d = fs_line_element_sq(a, b)
        assert 0 <= d <= 4
        assert fs_line_element_sq(b, a) == pytest.approx(d, abs=1e-14)
        assert fs_line_element_sq(ph * a, b) == pytest.approx(d, abs=1e-14)


class TestDistance:
    def test_identical(self):
        assert fs_distance([0.3, 0.4j], [0.3, 0.4j]) == 0

    def test_orthogonal_is_pi(self):
        assert abs(fs_distance([1, 0], [0, 1]) - math.pi) <= 1e-12

    def test_quarter(self):
        b = [math.cos(math.pi / 4), math.sin(math.pi / 4)]
        assert fs_distance([1, 0], b) == pytest.approx(math.pi / 2, abs=1e-14)

    def test_zero_vector(self):
        with pytest.raises(ZeroVectorError):
            fs_distance([0, 0], [1, 0])

    def test_scale_free(self):
        assert fs_distance([3, 0], [1, 1]) == pytest.approx(math.pi / 2, abs=1e-14)

    def test_small_distance_accuracy(self):
        # arccos would lose half the digits here
        eps = 1e-9
        assert fs_distance([1, 0], [1, eps]) == pytest.approx(2 * eps, rel=1e-12)

    def test_overlap_modulus(self):
        assert overlap_modulus([1, 0], [S, S]) == pytest.approx(S, abs=1e-15)

    @pytest.mark.parametrize("b", [[0, 1], [S, S], [0.6, 0.8j], [1, 0.1]])
    def test_matches_refinement_oracle(self, b):
        assert abs(fs_distance([1, 0], b) - brute_force_length([1, 0], b, 10_000)) <= 1e-6

    def test_chord_below_arc(self, rng):
        vs = random_states(rng, 2000, 2)
        for a, b in zip(vs[::2], vs[1::2]):
            assert math.sqrt(fs_line_element_sq(a, b)) <= fs_distance(a, b) + 1e-14

    def test_triangle_inequality(self, rng):
        vs = random_states(rng, 3000, 3)
        worst = min(fs_distance(a, c) + fs_distance(c, b) - fs_distance(a, b)
                    for a, b, c in zip(vs[::3], vs[1::3], vs[2::3]))
        assert worst >= -1e-12

    @given(states(3), states(3), nonzero_scalars(), nonzero_scalars())
    def test_gauge_invariance(self, a, b, la, lb):
        d = fs_distance(a, b)
        assert 0 <= d <= math.pi
        assert fs_distance(la * a, lb * b) == pytest.approx(d, abs=1e-12)


class TestInterpolate:
    def test_endpoints(self):
        a, b = np.array([1, 0]), np.array([0.6, 0.8j])
        assert np.allclose(geodesic_interpolate(a, b, 0).amplitudes, a, atol=1e-15)
        end = geodesic_interpolate(a, b, 1).amplitudes
        assert abs(abs(np.vdot(end, b)) - 1) <= 1e-14

    def test_orthogonal_midpoint(self):
        mid = geodesic_interpolate([1, 0], [0, 1], 0.5).amplitudes
        assert np.allclose(mid, [S, S], atol=1e-15, rtol=0)

    def test_same_ray_rejected(self):
        with pytest.raises(DegenerateGeodesicError):
            geodesic_interpolate([1, 0], [1j, 0], 0.3)

    def test_additivity(self, rng):
        a, b = random_states(rng, 2, 3)
        ts = [0, 0.25, 0.5, 0.75, 1]
        pts = [geodesic_interpolate(a, b, t) for t in ts]
        parts = sum(fs_distance(p, q) for p, q in zip(pts[:-1], pts[1:]))
        assert abs(parts - fs_distance(a, b)) <= 1e-10
        for t, p in zip(ts, pts):
            assert abs(fs_distance(a, p) - t * fs_distance(a, b)) <= 1e-10


class TestCurves:
    def test_constant_curve(self):
        assert curve_length(DiscreteCurve([[S, S]] * 3)) == 0

    def test_single_chord(self):
        assert curve_length(DiscreteCurve([[1, 0], [0, 1]])) == 2

    def test_arc_converges_to_pi(self):
        assert abs(curve_length(geodesic_arc([1, 0], [0, 1], 10_000)) - math.pi) <= 1e-6

    def test_refinement_monotone_second_order(self):
        a, b = [1, 0], [0.6, 0.8j]
        exact = fs_distance(a, b)
        errs = [exact - curve_length(geodesic_arc(a, b, n)) for n in (10, 100, 1000, 10_000)]
        assert all(e > 0 for e in errs[:-1]) and errs[-1] >= -1e-12
        assert all(e1 < e0 for e0, e1 in zip(errs[:-1], errs[1:]))
        # error ratio ~100 per decade for O(1/n^2)
        assert errs[0] / errs[1] > 50 and errs[1] / errs[2] > 50

    def test_needs_two_points(self):
        with pytest.raises(ValueError):
            DiscreteCurve([[1, 0]])

    def test_rejects_zero_point(self):
        with pytest.raises(ZeroVectorError):
            DiscreteCurve([[1, 0], [0, 0]])

    def test_mixed_dimensions(self):
        with pytest.raises((DimensionError, ValueError)):
            DiscreteCurve([[1, 0], [1, 0, 0]])

    def test_closed_predicate(self):
        assert DiscreteCurve([[1, 0], [S, S], [1j, 0]]).closed()
        assert not DiscreteCurve([[1, 0], [S, S]]).closed()

    def test_json_round_trip(self):
        c = geodesic_arc([1, 0], [0.6, 0.8j], 5)
        back = DiscreteCurve.from_json(json.loads(json.dumps(c.to_json())))
        assert np.array_equal(back.points, c.points)
