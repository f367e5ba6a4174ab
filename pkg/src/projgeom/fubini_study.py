"""Fubini-Study line element, curve length and geodesic distance on rays.

With the normalization ``ds^2 = 4 (1 - |<a|b>|^2)`` the space of rays of a
qubit is the unit 2-sphere: orthogonal states sit at distance pi and the
finite distance between two rays is ``2 arccos |<a|b>|``.

Numerically, ``1 - |<a|b>|^2`` is evaluated as the squared norm of the part
of ``b`` orthogonal to ``a``. For unit vectors this is the same quantity, but
it does not cancel catastrophically when the two states are close. In low
dimension that norm comes from the 2x2 minors ``a_i b_j - a_j b_i``
(Lagrange's identity), which vanish exactly for identical inputs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateGeodesicError, NormalizationError, ZeroVectorError
from .hilbert import (
    StateLike,
    StateVector,
    _check_same_dim,
    as_state,
    normalize,
    project_to_ray,
    rays_equal,
    state_from_json,
    state_to_json,
)

NORMALIZATION_TOL = 1e-10
MINOR_DIM_LIMIT = 16


def _perp_norm(p: np.ndarray, q: np.ndarray, ov: np.ndarray) -> np.ndarray:
    """``|q - <p|q> p|`` for unit rows p, q (last axis is the amplitude index)."""
    n = p.shape[-1]
    if n > MINOR_DIM_LIMIT:
        return np.linalg.norm(q - ov[..., None] * p, axis=-1)
    i, j = np.triu_indices(n, 1)
    minors = p[..., i] * q[..., j] - p[..., j] * q[..., i]
    return np.sqrt(np.sum((minors * np.conj(minors)).real, axis=-1))


def _overlap_split(a: StateVector, b: StateVector) -> tuple[complex, float]:
    """Return ``(<a|b>, |b - <a|b> a|)`` for unit vectors a, b."""
    ov = np.vdot(a.amplitudes, b.amplitudes)
    return complex(ov), float(_perp_norm(a.amplitudes, b.amplitudes, ov))


def _require_normalized(v: StateVector) -> None:
    if not v.is_normalized(NORMALIZATION_TOL):
        raise NormalizationError(
            f"state has norm {v.norm():.17g}; normalize it first"
        )


def fs_line_element_sq(a: StateLike, b: StateLike) -> float:
    """Squared Fubini-Study separation ``4 (1 - |<a|b>|^2)`` of two unit states."""
    a, b = as_state(a), as_state(b)
    _check_same_dim(a, b)
    _require_normalized(a)
    _require_normalized(b)
    _, perp = _overlap_split(a, b)
    return min(4.0, 4.0 * perp * perp)


def fs_distance(a: StateLike, b: StateLike) -> float:
    """Geodesic distance between the rays of ``a`` and ``b``, in ``[0, pi]``.

    Equal to ``2 arccos(min(1, |<a|b>|))`` after normalization; evaluated as
    ``2 atan2(|b_perp|, |<a|b>|)`` which keeps full accuracy at both ends.
    """
    a, b = normalize(a), normalize(b)
    _check_same_dim(a, b)
    ov, perp = _overlap_split(a, b)
    return 2.0 * math.atan2(perp, abs(ov))


def overlap_modulus(a: StateLike, b: StateLike) -> float:
    a, b = normalize(a), normalize(b)
    _check_same_dim(a, b)
    return min(1.0, abs(complex(np.vdot(a.amplitudes, b.amplitudes))))


def _aligned_endpoints(a: StateLike, b: StateLike):
    a, b = normalize(a), normalize(b)
    _check_same_dim(a, b)
    ov, perp = _overlap_split(a, b)
    if perp <= 1e-15:
        raise DegenerateGeodesicError("endpoints lie on the same ray")
    bp = b.amplitudes
    if ov != 0:
        bp = bp * (abs(ov) / ov)
    return a.amplitudes, bp, math.atan2(perp, abs(ov))


def _great_circle(a: np.ndarray, bp: np.ndarray, theta: float, ts: np.ndarray) -> np.ndarray:
    ts = np.asarray(ts, dtype=float)[:, None]
    return (np.sin((1.0 - ts) * theta) * a + np.sin(ts * theta) * bp) / math.sin(theta)


def geodesic_interpolate(a: StateLike, b: StateLike, t: float) -> StateVector:
    """Point at fraction ``t`` of the great circle from ray(a) to ray(b).

    ``b`` is first re-phased so that <a|b'> is real and non-negative; for
    exactly orthogonal inputs no phase is defined and ``b`` is used as given.
    Returns ``a`` at t=0 and ``b'`` at t=1.
    """
    a_, bp, theta = _aligned_endpoints(a, b)
    return StateVector(_great_circle(a_, bp, theta, np.array([t]))[0])


@dataclass(frozen=True, eq=False)
class DiscreteCurve:
    """Ordered samples of a curve of states, stored row-wise in ``points``.

    Open in Hilbert space in general; :meth:`closed` tells whether first and
    last samples are the same ray.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = self.points
        if not isinstance(pts, np.ndarray):
            pts = [np.asarray(as_state(p)) for p in pts]
        pts = np.array(pts, dtype=np.complex128)
        if pts.ndim != 2 or pts.shape[0] < 2 or pts.shape[1] < 1:
            raise ValueError("a discrete curve needs at least two points of equal dimension")
        if np.any(~np.any(pts != 0, axis=1)):
            raise ZeroVectorError("curve contains the zero vector")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def states(self) -> list[StateVector]:
        return [StateVector(row) for row in self.points]

    def closed(self, tol: float = 1e-12) -> bool:
        return rays_equal(project_to_ray(self.points[0]), project_to_ray(self.points[-1]), tol)

    def to_json(self) -> list:
        return [state_to_json(p) for p in self.points]

    @classmethod
    def from_json(cls, data) -> "DiscreteCurve":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        if not isinstance(data, list):
            raise ValueError("a curve must be an array of states")
        return cls([state_from_json(item) for item in data])


def curve_length(c: DiscreteCurve | Sequence[StateLike]) -> float:
    """Sum of Fubini-Study chord lengths ``sqrt(ds^2)`` between consecutive samples."""
    if not isinstance(c, DiscreteCurve):
        c = DiscreteCurve(c)
    pts = c.points / np.linalg.norm(c.points, axis=1, keepdims=True)
    p, q = pts[:-1], pts[1:]
    ov = np.sum(np.conj(p) * q, axis=1)
    perp = _perp_norm(p, q, ov)
    return math.fsum(2.0 * np.minimum(perp, 1.0))


def geodesic_arc(a: StateLike, b: StateLike, n_points: int) -> DiscreteCurve:
    """Sample the great-circle arc from ray(a) to ray(b) at ``n_points`` equally spaced parameters."""
    if n_points < 2:
        raise ValueError("n_points must be at least 2")
    a_, bp, theta = _aligned_endpoints(a, b)
    return DiscreteCurve(_great_circle(a_, bp, theta, np.linspace(0.0, 1.0, n_points)))
