"""Discrete geometric phase of closed loops in ray space.

The phase of a loop ``v_0, ..., v_{m-1}`` is ``-arg prod_k <v_k | v_{k+1}>``
(indices mod m), the Bargmann invariant. Rescaling any vertex by a nonzero
complex number multiplies the product by a positive real, so the phase
depends only on the rays.

For qubits the phase is tied to the solid angle of the geodesic polygon
traced by the Bloch vectors, ``phase = -solid_angle / 2 (mod 2 pi)``. The
solid angle is computed independently here by fan triangulation.
Orientation: with the Bloch map of this package (where ``(1, 0)`` is the
south pole) a triangle counts positive when ``n0 . (n1 x n2) <= 0``.

Each triangle's excess comes from
``tan(E / 2) = |a . (b x c)| / (1 + a.b + b.c + c.a)``. L'Huilier's formula
(``lhuilier_excess``) gives the same number but takes square roots of
quantities that vanish for thin slivers and near-hemispheres, which costs it
half the significant digits there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .complex_coords import bloch_map, great_circle_angle
from .errors import DegenerateGeodesicError, DimensionError, OrthogonalSegmentError
from .hilbert import StateLike, StateVector, _check_same_dim, as_state, normalize

ORTHOGONAL_TOL = 1e-12


def wrap_phase(a: float) -> float:
    """Principal value in ``(-pi, pi]``."""
    r = math.remainder(a, 2.0 * math.pi)
    if r <= -math.pi:
        r += 2.0 * math.pi
    return r


@dataclass(frozen=True, eq=False)
class ClosedLoop:
    """At least three states; the last one connects back to the first."""

    vertices: tuple[StateVector, ...]

    def __post_init__(self):
        verts = tuple(as_state(v) for v in self.vertices)
        if len(verts) < 3:
            raise ValueError("a closed loop needs at least three vertices")
        for v in verts[1:]:
            _check_same_dim(verts[0], v)
        object.__setattr__(self, "vertices", verts)
        for k, ov in enumerate(_overlaps(verts)):
            if abs(ov) <= ORTHOGONAL_TOL:
                raise OrthogonalSegmentError(
                    f"vertices {k} and {(k + 1) % len(verts)} are orthogonal")

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def dim(self) -> int:
        return self.vertices[0].dim

    def reversed(self) -> "ClosedLoop":
        return ClosedLoop(self.vertices[::-1])


def _overlaps(verts: Sequence[StateVector]) -> list[complex]:
    unit = [normalize(v).amplitudes for v in verts]
    return [complex(np.vdot(unit[k], unit[(k + 1) % len(unit)])) for k in range(len(unit))]


def _as_loop(loop) -> ClosedLoop:
    return loop if isinstance(loop, ClosedLoop) else ClosedLoop(tuple(loop))


def bargmann_invariant(loop) -> complex:
    prod = 1.0 + 0.0j
    for ov in _overlaps(_as_loop(loop).vertices):
        prod *= ov
    return prod


def pancharatnam_phase(loop: ClosedLoop | Sequence[StateLike]) -> float:
    """``-arg`` of the Bargmann product, in ``(-pi, pi]``."""
    # multiply unit phasors rather than raw overlaps to stay away from underflow
    loop = _as_loop(loop)
    total = 1.0 + 0.0j
    for ov in _overlaps(loop.vertices):
        total *= ov / abs(ov)
    return wrap_phase(-math.atan2(total.imag, total.real))


def spherical_excess(a, b, c) -> float:
    """Unsigned area of the geodesic triangle with unit-vector vertices a, b, c."""
    den = 1.0 + float(np.dot(a, b) + np.dot(b, c) + np.dot(c, a))
    return 2.0 * math.atan2(abs(float(np.dot(a, np.cross(b, c)))), den)


def lhuilier_excess(a, b, c) -> float:
    """L'Huilier's formula from the three side lengths."""
    sa = great_circle_angle(b, c)
    sb = great_circle_angle(a, c)
    sc = great_circle_angle(a, b)
    s = 0.5 * (sa + sb + sc)
    prod = (math.tan(0.5 * s) * math.tan(0.5 * (s - sa))
            * math.tan(0.5 * (s - sb)) * math.tan(0.5 * (s - sc)))
    return 4.0 * math.atan(math.sqrt(max(prod, 0.0)))


def _orientation(a, b, c) -> float:
    return -1.0 if float(np.dot(a, np.cross(b, c))) > 0 else 1.0


def solid_angle(loop: ClosedLoop | Sequence[StateLike]) -> float:
    """Signed solid angle enclosed by the Bloch images of a qubit loop.

    Fan-triangulated from vertex 0, so the result is exact for loops that
    are star-shaped about their first vertex; self-intersecting loops are
    not handled.
    """
    verts = loop.vertices if isinstance(loop, ClosedLoop) else tuple(as_state(v) for v in loop)
    if len(verts) < 3:
        raise ValueError("a closed loop needs at least three vertices")
    if any(v.dim != 2 for v in verts):
        raise DimensionError("solid angles are defined for two-level states only")
    ns = [bloch_map(v) for v in verts]
    m = len(ns)
    for k in range(m):
        if float(np.dot(ns[k], ns[(k + 1) % m])) <= -1.0 + ORTHOGONAL_TOL:
            raise DegenerateGeodesicError(
                f"Bloch images of vertices {k} and {(k + 1) % m} are antipodal")
    total = 0.0
    for k in range(1, m - 1):
        a, b, c = ns[0], ns[k], ns[k + 1]
        total += _orientation(a, b, c) * spherical_excess(a, b, c)
    return total


def holonomy_check(loop: ClosedLoop | Sequence[StateLike]) -> float:
    """``|phase - wrap(-solid_angle / 2)|`` measured on the circle."""
    loop = _as_loop(loop)
    diff = pancharatnam_phase(loop) - wrap_phase(-0.5 * solid_angle(loop))
    return abs(wrap_phase(diff))
