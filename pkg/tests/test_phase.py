import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from projgeom.complex_coords import bloch_map, bloch_to_state
from projgeom.errors import DegenerateGeodesicError, DimensionError, OrthogonalSegmentError
from projgeom.hilbert import random_states
from projgeom.phase import (
    ClosedLoop,
    bargmann_invariant,
    lhuilier_excess,
    holonomy_check,
    pancharatnam_phase,
    solid_angle,
    spherical_excess,
    wrap_phase,
)

from strategies import nonzero_scalars, states

S = 1 / math.sqrt(2)
# Bloch points (1,0,0), (0,1,0), (0,0,-1)
OCTANT = [[S, S], [S, 1j * S], [1, 0]]


def oosterom_strackee(n0, n1, n2):
    """Signed triangle solid angle, oriented to match the library convention."""
    num = np.dot(n0, np.cross(n1, n2))
    den = 1 + np.dot(n0, n1) + np.dot(n1, n2) + np.dot(n2, n0)
    return -2 * math.atan2(num, den)


def nonorthogonal_triples(rng, count):
    out = []
    while len(out) < count:
        tri = random_states(rng, 3)
        try:
            out.append(ClosedLoop(tuple(tri)))
        except OrthogonalSegmentError:
            continue
    return out


class TestPhase:
    def test_octant_hand_value(self):
        # product of overlaps is (1+i)/2 * S * S = (1+i)/4, argument pi/4
        assert bargmann_invariant(OCTANT) == pytest.approx((1 + 1j) / 4, abs=1e-15)
        assert abs(pancharatnam_phase(OCTANT) + math.pi / 4) <= 1e-12

    def test_single_ray(self):
        assert pancharatnam_phase([[0.6, 0.8j], [1.2j, -1.6], [-0.6, -0.8j]]) == 0

    def test_reversal(self, rng):
        for loop in nonorthogonal_triples(rng, 50):
            p = pancharatnam_phase(loop)
            if abs(abs(p) - math.pi) > 1e-9:
                assert pancharatnam_phase(loop.reversed()) == pytest.approx(-p, abs=1e-14)

    def test_cyclic_shift(self, rng):
        verts = random_states(rng, 5)
        p = pancharatnam_phase(verts)
        for k in range(1, 5):
            assert abs(wrap_phase(pancharatnam_phase(verts[k:] + verts[:k]) - p)) <= 1e-14

    @given(st.lists(nonzero_scalars(), min_size=3, max_size=3))
    def test_gauge_invariance(self, lams):
        scaled = [lam * np.array(v) for lam, v in zip(lams, OCTANT)]
        assert abs(pancharatnam_phase(scaled) - pancharatnam_phase(OCTANT)) <= 1e-14

    def test_higher_dimension(self, rng):
        verts = random_states(rng, 4, dim=5)
        p = pancharatnam_phase(verts)
        assert -math.pi < p <= math.pi
        with pytest.raises(DimensionError):
            solid_angle(verts)

    def test_orthogonal_segment(self):
        with pytest.raises(OrthogonalSegmentError):
            ClosedLoop(([1, 0], [0, 1], [S, S]))

    def test_too_short(self):
        with pytest.raises(ValueError):
            ClosedLoop(([1, 0], [S, S]))

    def test_wrap(self):
        assert wrap_phase(-math.pi) == math.pi
        assert wrap_phase(3 * math.pi) == pytest.approx(math.pi)
        assert wrap_phase(0.5) == 0.5


class TestSolidAngle:
    def test_octant(self):
        assert abs(solid_angle(OCTANT) - math.pi / 2) <= 1e-12
        assert abs(solid_angle(OCTANT[::-1]) + math.pi / 2) <= 1e-12

    def test_octant_excess_closed_form(self):
        # three right angles: 3 pi/2 - pi
        e = spherical_excess(np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), np.array([0, 0, -1.0]))
        assert e == pytest.approx(math.pi / 2, abs=1e-15)

    def test_degenerate_loop(self):
        assert solid_angle([[1, 0], [1j, 0], [2, 0]]) == 0

    def test_antipodal_images(self):
        with pytest.raises(DegenerateGeodesicError):
            solid_angle([[1, 0], [0, 1], [S, S]])

    def test_against_oracle(self, rng):
        for _ in range(200):
            tri = random_states(rng, 3)
            ns = [bloch_map(v) for v in tri]
            if min(np.dot(ns[k], ns[(k + 1) % 3]) for k in range(3)) < -0.999:
                continue
            assert solid_angle(tri) == pytest.approx(oosterom_strackee(*ns), abs=1e-11)

    def test_equator_polygon(self):
        # vertices on one great circle bound a hemisphere: 2 pi up to orientation
        # (odd count, so no fan diagonal joins antipodal points)
        pts = [bloch_to_state((math.cos(t), math.sin(t), 0.0)) for t in np.linspace(0, 2 * np.pi, 14)[:-1]]
        assert abs(abs(solid_angle(pts)) - 2 * math.pi) <= 1e-12
        assert holonomy_check(pts) <= 1e-12

    def test_latitude_polygon(self):
        # fan from vertex 0 against a fan from the enclosed pole
        z = 0.5
        ring = [np.array([math.sqrt(1 - z * z) * math.cos(t), math.sqrt(1 - z * z) * math.sin(t), z])
                for t in np.linspace(0, 2 * np.pi, 9)[:-1]]
        pole = np.array([0.0, 0.0, 1.0])
        expected = sum(oosterom_strackee(pole, ring[k], ring[(k + 1) % 8]) for k in range(8))
        assert solid_angle([bloch_to_state(n) for n in ring]) == pytest.approx(expected, abs=1e-12)

    def test_excess_forms_agree(self, rng):
        for _ in range(200):
            a, b, c = (v / np.linalg.norm(v) for v in rng.normal(size=(3, 3)))
            assert spherical_excess(a, b, c) == pytest.approx(lhuilier_excess(a, b, c), abs=1e-7)

    def test_girard_oracle(self, rng):
        # excess = sum of interior angles - pi, angles from tangent vectors at each vertex
        def angle(p, q, r):
            t1 = q - (p @ q) * p
            t2 = r - (p @ r) * p
            return math.acos(np.clip(t1 @ t2 / np.linalg.norm(t1) / np.linalg.norm(t2), -1, 1))
        for _ in range(200):
            a, b, c = (v / np.linalg.norm(v) for v in rng.normal(size=(3, 3)))
            girard = angle(a, b, c) + angle(b, c, a) + angle(c, a, b) - math.pi
            assert spherical_excess(a, b, c) == pytest.approx(girard, abs=1e-10)

    def test_sliver_is_flat(self):
        a, b, c = np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), np.array([-S, S, 0])
        assert spherical_excess(a, b, c) == 0

    def test_great_circle_triangle(self):
        a, b, c = np.array([0, 0, 1.0]), np.array([-0.8, 0, -0.6]), np.array([1.0, 0, 0])
        assert spherical_excess(a, b, c) == 2 * math.pi


class TestHolonomy:
    def test_octant(self):
        assert holonomy_check(OCTANT) <= 1e-12

    def test_random_triangles(self, rng):
        assert max(holonomy_check(loop) for loop in nonorthogonal_triples(rng, 100)) <= 1e-10

    def test_tiny_triangle(self):
        n0 = np.array([0.3, -0.4, math.sqrt(1 - 0.25)])
        e1 = np.cross(n0, [0, 0, 1.0])
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(n0, e1)
        h = 1e-3
        ns = [n0, n0 * math.cos(h) + e1 * math.sin(h), n0 * math.cos(h) + e2 * math.sin(h)]
        loop = [bloch_to_state(n) for n in ns]
        omega = solid_angle(loop)
        assert abs(omega) == pytest.approx(h * h / 2, rel=1e-3)
        assert abs(pancharatnam_phase(loop)) <= 1e-6
        assert holonomy_check(loop) <= 1e-10

    def test_random_polygons(self, rng):
        # small star-shaped polygons around a random centre
        for _ in range(30):
            c = random_states(rng, 1)[0]
            nc = bloch_map(c)
            e1 = np.cross(nc, rng.normal(size=3))
            e1 /= np.linalg.norm(e1)
            e2 = np.cross(nc, e1)
            angles = np.sort(rng.uniform(0, 2 * np.pi, 6))
            rad = rng.uniform(0.2, 1.0, 6)
            ns = [nc * math.cos(r) + math.sin(r) * (math.cos(t) * e1 + math.sin(t) * e2)
                  for r, t in zip(rad, angles)]
            loop = [bloch_to_state(n) for n in ns]
            try:
                assert holonomy_check(loop) <= 1e-10
            except OrthogonalSegmentError:
                continue

    @given(states(), states(), states())
    def test_identity_property(self, a, b, c):
        try:
            loop = ClosedLoop((a, b, c))
        except OrthogonalSegmentError:
            return
        ns = [bloch_map(v) for v in (a, b, c)]
        if min(np.dot(ns[k], ns[(k + 1) % 3]) for k in range(3)) < -1 + 1e-6:
            return
        assert holonomy_check(loop) <= 1e-9
