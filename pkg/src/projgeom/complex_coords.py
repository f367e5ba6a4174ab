"""Complex coordinates on the plane, the round-sphere metric and the Bloch map.

Points of the plane are handled as complex numbers ``Z = x + iy`` (numpy
arrays broadcast throughout). Points of the unit sphere are arrays whose last
axis has length 3. Stereographic projection is taken from the north pole
``(0, 0, 1)``, which corresponds to ``Z = infinity`` and is excluded.

The Bloch map sends ``(alpha, beta)`` to the sphere point whose stereographic
coordinate is ``beta / alpha``; the basis state ``(1, 0)`` lands on the south
pole and ``(0, 1)`` on the excluded north pole.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike

from .errors import DimensionError, PoleSingularityError
from .fubini_study import fs_distance
from .hilbert import StateLike, normalize

POLE_TOL = 1e-12
NORTH_POLE = np.array([0.0, 0.0, 1.0])


class PlanePoint(NamedTuple):
    x: float
    y: float


def complexify(p) -> complex | np.ndarray:
    """``(x, y) -> Z = x + iy``. Accepts a PlanePoint, a pair, or arrays."""
    x, y = p
    if np.ndim(x) == 0 and np.ndim(y) == 0:
        return complex(x, y)
    return np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)


def realify(z) -> PlanePoint:
    if np.ndim(z) == 0:
        z = complex(z)
        return PlanePoint(z.real, z.imag)
    z = np.asarray(z)
    return PlanePoint(z.real, z.imag)


JACOBIAN = np.array([[1, 1j], [1, -1j]])


def jacobian_det() -> complex:
    """Determinant of d(Z, Zbar)/d(x, y); the exact value is -2i."""
    (a, b), (c, d) = JACOBIAN
    return complex(a * d - b * c)


def euclidean_metric_sq(p, dp) -> float | np.ndarray:
    """``dx^2 + dy^2``; independent of the base point ``p``."""
    dx, dy = (np.asarray(c, dtype=float) for c in dp)
    out = dx * dx + dy * dy
    return float(out) if out.ndim == 0 else out


def complex_metric_sq(dz) -> float | np.ndarray:
    """``dZ dZbar`` evaluated as a complex product."""
    dz = np.asarray(dz, dtype=complex)
    out = (dz * np.conj(dz)).real
    return float(out) if out.ndim == 0 else out


def conformal_factor(z) -> float | np.ndarray:
    """``4 / (1 + |Z|^2)^2``."""
    z = np.asarray(z, dtype=complex)
    out = 4.0 / (1.0 + (z * np.conj(z)).real) ** 2
    return float(out) if out.ndim == 0 else out


def sphere_metric_sq(at, dz) -> float | np.ndarray:
    """Round-sphere line element ``4 |dZ|^2 / (1 + |Z|^2)^2``."""
    out = conformal_factor(at) * complex_metric_sq(dz)
    return float(out) if np.ndim(out) == 0 else out


def inverse_stereographic(z) -> np.ndarray:
    """Map ``Z`` to the unit sphere: ``(2 Re Z, 2 Im Z, |Z|^2 - 1) / (1 + |Z|^2)``."""
    z = np.asarray(z, dtype=complex)
    s = (z * np.conj(z)).real
    out = np.stack([2.0 * z.real, 2.0 * z.imag, s - 1.0], axis=-1)
    return out / (1.0 + s)[..., None]


def stereographic(n: ArrayLike) -> complex | np.ndarray:
    """Stereographic coordinate ``Z = (n1 + i n2) / (1 - n3)`` of a sphere point.

    Raises PoleSingularityError for points within ``POLE_TOL`` of the north
    pole. On the northern hemisphere the equivalent form
    ``(1 + n3) / (n1 - i n2)`` is used to avoid cancellation in ``1 - n3``.
    """
    n = np.asarray(n, dtype=float)
    if n.shape[-1] != 3:
        raise DimensionError("sphere points need three components")
    if np.any(np.linalg.norm(n - NORTH_POLE, axis=-1) <= POLE_TOL):
        raise PoleSingularityError("the north pole has no stereographic coordinate")
    n1, n2, n3 = n[..., 0], n[..., 1], n[..., 2]
    south = n3 <= 0
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(
            south,
            (n1 + 1j * n2) / (1.0 - n3),
            (1.0 + n3) / (n1 - 1j * n2),
        )
    if z.ndim == 0:
        return complex(z)
    return z


def bloch_map(s: StateLike) -> np.ndarray:
    """Bloch vector ``(2 Re(a* b), 2 Im(a* b), |b|^2 - |a|^2)`` of a qubit state."""
    s = normalize(s)
    if s.dim != 2:
        raise DimensionError(f"the Bloch map needs a two-level state, got dimension {s.dim}")
    a, b = s.amplitudes
    c = np.conj(a) * b
    return np.array([2.0 * c.real, 2.0 * c.imag, abs(b) ** 2 - abs(a) ** 2])


def bloch_to_state(n: ArrayLike) -> np.ndarray:
    """A unit qubit vector whose Bloch vector is ``n`` (inverse of bloch_map up to phase)."""
    n = np.asarray(n, dtype=float)
    n = n / np.linalg.norm(n)
    # polar angle measured from the south pole, where (1, 0) sits
    half = 0.5 * math.atan2(math.hypot(n[0], n[1]), -n[2])
    phi = math.atan2(n[1], n[0])
    return np.array([math.cos(half), math.sin(half) * np.exp(1j * phi)])


def great_circle_angle(na: ArrayLike, nb: ArrayLike) -> float | np.ndarray:
    """Angle between unit vectors, ``arccos(na . nb)`` evaluated via atan2."""
    na, nb = np.asarray(na, dtype=float), np.asarray(nb, dtype=float)
    cross = np.linalg.norm(np.cross(na, nb), axis=-1)
    dot = np.sum(na * nb, axis=-1)
    out = np.arctan2(cross, dot)
    return float(out) if np.ndim(out) == 0 else out


def fs_vs_sphere_consistency(a: StateLike, b: StateLike) -> float:
    """``|fs_distance(a, b) - angle(bloch(a), bloch(b))|``; zero for a radius-1 sphere."""
    return abs(fs_distance(a, b) - great_circle_angle(bloch_map(a), bloch_map(b)))


def pushforward_sq(z, dz, step: float = 1e-6) -> float | np.ndarray:
    """Squared length of the image of ``dz`` under inverse_stereographic.

    Central finite differences with the given step; an independent check of
    the analytic sphere metric.
    """
    z = np.asarray(z, dtype=complex)
    dz = np.asarray(dz, dtype=complex)
    d = (inverse_stereographic(z + step * dz) - inverse_stereographic(z - step * dz)) / (2.0 * step)
    out = np.sum(d * d, axis=-1)
    return float(out) if np.ndim(out) == 0 else out
