"""Geodesics of the round-sphere metric found by minimizing a discrete energy.

A curve in the stereographic plane is a complex array ``Z_0 .. Z_{n-1}``. Its
discrete energy is

    E = sum_k G(m_k) |Z_{k+1} - Z_k|^2,   G(W) = 4 / (1 + |W|^2)^2,

with ``m_k`` the segment midpoint. Minimizing E with the endpoints held
fixed gives a discretized, nearly constant-speed great-circle arc. The
analytic arc (slerp between the embedded endpoints) serves as the reference
solution.

The solver is gradient descent with a halving/growing backtracking step. By
default the descent direction is the gradient taken in the metric of the
weighted discrete Laplacian (the energy Hessian with the conformal factor
frozen), which removes the O(n^2) conditioning of plain gradient descent.
Each step is also capped so that no point moves more than ``max_move`` in
sphere distance. This keeps iterates away from the spurious low-energy
shortcut through ``Z = infinity`` that the midpoint rule admits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .complex_coords import great_circle_angle, inverse_stereographic, stereographic
from .errors import ConvergenceError, DegenerateGeodesicError, PoleSingularityError

ANTIPODAL_TOL = 1e-6
# midpoint-rule segment lengths must match the exact chord angle to this relative accuracy
RESOLUTION_TOL = 1e-2


@dataclass(frozen=True)
class SolverConfig:
    max_iterations: int = 100_000
    step_size: float = 0.1
    gradient_tolerance: float = 1e-8
    n_points: int = 256
    preconditioned: bool = True
    max_move: float = 0.1

    def __post_init__(self):
        if self.max_iterations < 1 or self.step_size <= 0 or self.gradient_tolerance <= 0:
            raise ValueError("solver settings must be positive")
        if self.n_points < 3:
            raise ValueError("a curve needs at least three points")
        if self.max_move <= 0:
            raise ValueError("max_move must be positive")


@dataclass(frozen=True, eq=False)
class PlanarCurve:
    """Points ``Z_k`` of a curve in the stereographic plane; the endpoints are fixed."""

    points: np.ndarray
    iterations: int = 0
    gradient_norm: float = math.nan
    energy_history: tuple[float, ...] = field(default=(), repr=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.complex128).reshape(-1)
        if pts.size < 2:
            raise ValueError("a planar curve needs at least two points")
        if not np.all(np.isfinite(pts)):
            raise ValueError("curve points must be finite")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.size

    def embedded(self) -> np.ndarray:
        return inverse_stereographic(self.points)


def _points(c) -> np.ndarray:
    if isinstance(c, PlanarCurve):
        return c.points
    return np.asarray(c, dtype=np.complex128).reshape(-1)


def _segments(z: np.ndarray):
    d = z[1:] - z[:-1]
    m = 0.5 * (z[1:] + z[:-1])
    s = (m * np.conj(m)).real
    return d, m, s


def _segment_energies(z: np.ndarray) -> np.ndarray:
    d, _, s = _segments(z)
    return 4.0 * (d * np.conj(d)).real / (1.0 + s) ** 2


def discrete_energy(c) -> float:
    return math.fsum(_segment_energies(_points(c)))


def discrete_length(c) -> float:
    """``sum_k sqrt(G(m_k)) |Z_{k+1} - Z_k|``, the sphere length of the polyline."""
    d, _, s = _segments(_points(c))
    return math.fsum(2.0 * np.abs(d) / (1.0 + s))


def energy_gradient(c) -> np.ndarray:
    """Gradient of the discrete energy w.r.t. the interior points.

    Returned as ``dE/dx + i dE/dy`` for each interior point.
    """
    z = _points(c)
    d, m, s = _segments(z)
    G = 4.0 / (1.0 + s) ** 2
    dG = -16.0 * m / (1.0 + s) ** 3
    d2 = (d * np.conj(d)).real
    g = np.zeros_like(z)
    g[:-1] += 0.5 * dG * d2 - 2.0 * G * d
    g[1:] += 0.5 * dG * d2 + 2.0 * G * d
    return g[1:-1]


def _precondition(z: np.ndarray, g: np.ndarray) -> np.ndarray:
    _, _, s = _segments(z)
    G = 4.0 / (1.0 + s) ** 2
    n = g.size
    ab = np.zeros((3, n))
    ab[0, 1:] = -2.0 * G[1:-1]
    ab[1] = 2.0 * (G[:-1] + G[1:])
    ab[2, :-1] = -2.0 * G[1:-1]
    return solve_banded((1, 1), ab, g)


def _check_endpoints(a: complex, b: complex) -> tuple[np.ndarray, np.ndarray]:
    if not (np.isfinite(a) and np.isfinite(b)):
        raise ValueError("endpoints must be finite")
    if a == b:
        raise DegenerateGeodesicError("endpoints coincide")
    na, nb = inverse_stereographic(a), inverse_stereographic(b)
    if float(na @ nb) <= -1.0 + ANTIPODAL_TOL:
        raise DegenerateGeodesicError("endpoints are antipodal; the geodesic is not unique")
    return na, nb


def resolution_defect(c) -> float:
    """Largest relative gap between midpoint-rule and exact sphere length over segments."""
    z = _points(c)
    d, _, s = _segments(z)
    approx = 2.0 * np.abs(d) / (1.0 + s)
    n = inverse_stereographic(z)
    exact = great_circle_angle(n[:-1], n[1:])
    keep = exact > 0
    if not np.any(keep):
        return 0.0
    return float(np.max(np.abs(approx[keep] - exact[keep]) / exact[keep]))


def _check_resolution(z: np.ndarray) -> None:
    if resolution_defect(z) > RESOLUTION_TOL:
        raise PoleSingularityError(
            "the curve runs too close to the excluded pole for the planar discretization")


def minimize_geodesic(a: complex, b: complex, cfg: SolverConfig | None = None) -> PlanarCurve:
    """Minimize the discrete energy between fixed endpoints, starting from the straight chord.

    Raises DegenerateGeodesicError for coincident or antipodal endpoints,
    ConvergenceError when the gradient tolerance is not met, and
    PoleSingularityError when the converged polyline is too coarse to
    represent the curve near the excluded pole (see ``resolution_defect``).
    """
    cfg = cfg or SolverConfig()
    a, b = complex(a), complex(b)
    _check_endpoints(a, b)

    z = a + (b - a) * np.linspace(0.0, 1.0, cfg.n_points) + 0j
    z[-1] = b
    terms = _segment_energies(z)
    history = [math.fsum(terms)]
    step = cfg.step_size
    scale = 1.0 + float(np.max(np.abs(z)))
    gnorm = math.inf
    for it in range(cfg.max_iterations):
        g = energy_gradient(z)
        gnorm = float(np.max(np.abs(g)))
        if gnorm <= cfg.gradient_tolerance:
            _check_resolution(z)
            return PlanarCurve(z, it, gnorm, tuple(history))
        d = _precondition(z, g) if cfg.preconditioned else g
        speed = float(np.max(np.abs(d) * 2.0 / (1.0 + (z[1:-1] * np.conj(z[1:-1])).real)))
        t = min(step, cfg.max_move / speed) if speed > 0 else step
        while True:
            trial = z.copy()
            trial[1:-1] -= t * d
            new_terms = _segment_energies(trial)
            delta = math.fsum(new_terms - terms)
            if delta < 0:
                break
            t *= 0.5
            if t * float(np.max(np.abs(d))) < 1e-17 * scale:
                raise ConvergenceError(
                    f"line search stalled at gradient norm {gnorm:.3e}", gnorm)
        z, terms = trial, new_terms
        history.append(history[-1] + delta)
        step = 1.5 * t
        if cfg.preconditioned:
            step = min(step, 1.0)
    raise ConvergenceError(
        f"no convergence after {cfg.max_iterations} iterations (gradient norm {gnorm:.3e})", gnorm)


def analytic_geodesic(a: complex, b: complex, n_points: int) -> PlanarCurve:
    """Great-circle arc between the embedded endpoints, sampled uniformly in arc length."""
    na, nb = _check_endpoints(complex(a), complex(b))
    omega = great_circle_angle(na, nb)
    t = np.linspace(0.0, 1.0, n_points)[:, None]
    pts = (np.sin((1.0 - t) * omega) * na + np.sin(t * omega) * nb) / math.sin(omega)
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    z = stereographic(pts)
    z[0], z[-1] = a, b
    return PlanarCurve(z)


def analytic_length(a: complex, b: complex) -> float:
    return great_circle_angle(inverse_stereographic(a), inverse_stereographic(b))


def arc_deviation(c, a: complex, b: complex) -> float:
    """Largest embedded distance from the curve's points to the great-circle arc a -> b."""
    na, nb = inverse_stereographic(a), inverse_stereographic(b)
    pts = inverse_stereographic(_points(c))
    normal = np.cross(na, nb)
    normal /= np.linalg.norm(normal)
    q = pts - np.outer(pts @ normal, normal)
    qn = np.linalg.norm(q, axis=1)
    ends = np.minimum(np.linalg.norm(pts - na, axis=1), np.linalg.norm(pts - nb, axis=1))
    safe = qn > 1e-300
    qhat = np.where(safe[:, None], q / np.where(safe, qn, 1.0)[:, None], 0.0)
    total = great_circle_angle(na, nb)
    on_arc = safe & (
        great_circle_angle(na, qhat) + great_circle_angle(qhat, nb) <= total + 1e-12
    )
    dist = np.where(on_arc, np.linalg.norm(pts - qhat, axis=1), ends)
    return float(np.max(dist))
