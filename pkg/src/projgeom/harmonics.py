"""The l=1, m=+-1 angular functions and the circle cut out by a level set of |psi|^2.

``psi_1_1(x, y; r) = -c (x + iy) / r`` and its partner
``psi_1_m1 = +c (x - iy) / r``. Both have ``|psi|^2 = c^2 (x^2 + y^2) / r^2``,
so the level set ``|psi|^2 = k^2`` at fixed ``r`` is the circle of radius
``R = k r / c``.

The coefficient defaults to the literal ``3 / (8 pi)``. The normalized
spherical harmonic uses ``sqrt(3 / (8 pi))``; pass ``STANDARD_COEFF`` to get it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .atlas import Atlas, circle_points, four_chart_atlas
from .errors import DomainError

DEFAULT_COEFF = 3.0 / (8.0 * math.pi)
STANDARD_COEFF = math.sqrt(3.0 / (8.0 * math.pi))


def _check_radius(r: float) -> None:
    if not (np.isfinite(r) and r > 0):
        raise DomainError(f"radial coordinate must be positive and finite, got {r}")


def psi_1_1(p, r: float, c: float = DEFAULT_COEFF):
    """``-c (x + iy) / r``; vectorized over the point coordinates."""
    _check_radius(r)
    x, y = p
    out = -c * (np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)) / r
    return complex(out) if np.ndim(out) == 0 else out


def psi_1_m1(p, r: float, c: float = DEFAULT_COEFF):
    """``+c (x - iy) / r``, equal to ``-conj(psi_1_1)``."""
    _check_radius(r)
    x, y = p
    out = c * (np.asarray(x, dtype=float) - 1j * np.asarray(y, dtype=float)) / r
    return complex(out) if np.ndim(out) == 0 else out


def density(p, r: float, c: float = DEFAULT_COEFF):
    """``psi* psi`` for ``psi_1_1``."""
    psi = psi_1_1(p, r, c)
    out = (np.conj(psi) * psi).real
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class LocusSpec:
    k: float
    r: float
    c: float = DEFAULT_COEFF

    def __post_init__(self):
        for name in ("k", "r", "c"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive and finite, got {v}")


def level_set_radius(spec: LocusSpec) -> float:
    return spec.k * spec.r / spec.c


def locus_points(spec: LocusSpec, n: int):
    """``n`` equally spaced points on the level-set circle."""
    _, x, y = circle_points(n, level_set_radius(spec))
    return x, y


def max_level_residual(spec: LocusSpec, n: int = 1000) -> float:
    """Largest ``|psi* psi - k^2|`` over ``n`` points of the computed circle."""
    x, y = locus_points(spec, n)
    return float(np.max(np.abs(density((x, y), spec.r, spec.c) - spec.k ** 2)))


def locus_as_manifold(spec: LocusSpec) -> Atlas:
    """The four half-circle charts on the level-set circle of radius ``R``."""
    return four_chart_atlas(level_set_radius(spec))
