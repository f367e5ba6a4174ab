"""Charts and atlases on the circle ``x^2 + y^2 = R^2``.

Two atlases are built in:

* :func:`four_chart_atlas` -- the open half-circles ``y > 0``, ``y < 0``,
  ``x > 0``, ``x < 0`` with projections onto the x or y axis as coordinates;
* :func:`angular_atlas` -- the circle punctured at ``(-R, 0)`` with the angle
  in ``(-pi, pi)``, and punctured at ``(R, 0)`` with the angle in ``(0, 2pi)``.

Chart maps are vectorized over numpy arrays. Domains are open sets given by
strict predicates. Each chart also records the open angular arc its domain
occupies, which the verification routines use for sampling.

Projection charts lose accuracy near their boundary: a float coordinate
``u`` near ``R`` pins the other coordinate only to about ``ulp(u) / y``.
Round-trip checks therefore sample the interior of each chart, keeping a
relative ``margin`` away from the boundary.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .errors import ChartDomainError, OffManifoldError

TWO_PI = 2.0 * math.pi
MANIFOLD_TOL = 1e-9


@dataclass(frozen=True)
class Chart:
    """An open set of the circle with a coordinate map onto an open interval.

    ``domain(x, y)`` is a vectorized predicate, ``forward(x, y) -> u`` and
    ``inverse(u) -> (x, y)`` are the coordinate map and its inverse, and
    ``arc = (start, stop)`` is the open range of polar angles the domain
    covers (``stop > start``).
    """

    name: str
    domain: Callable
    forward: Callable
    inverse: Callable
    codomain: tuple[float, float]
    arc: tuple[float, float]
    radius: float = 1.0

    def contains(self, x, y):
        return self.domain(np.asarray(x, dtype=float), np.asarray(y, dtype=float))

    def to_local(self, x, y):
        """Local coordinate of a point on the circle; raises outside the chart."""
        _check_on_circle(x, y, self.radius)
        if not np.all(self.contains(x, y)):
            raise ChartDomainError(f"point ({x}, {y}) is outside chart {self.name}")
        u = self.forward(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        return float(u) if np.ndim(u) == 0 else u

    def from_local(self, u):
        lo, hi = self.codomain
        u_arr = np.asarray(u, dtype=float)
        if not np.all((u_arr > lo) & (u_arr < hi)):
            raise ChartDomainError(f"coordinate {u} outside ({lo}, {hi}) of chart {self.name}")
        x, y = self.inverse(u_arr)
        if np.ndim(x) == 0:
            return float(x), float(y)
        return x, y

    def interior(self, theta, margin: float = 0.0):
        """True for angles inside the chart arc, at least ``margin * arc length`` from its ends."""
        start, stop = self.arc
        width = stop - start
        t = np.mod(np.asarray(theta, dtype=float) - start, TWO_PI)
        delta = margin * width
        return (t > delta) & (t < width - delta)


@dataclass(frozen=True)
class Atlas:
    charts: tuple[Chart, ...]
    manifold_dim: int = 1
    radius: float = 1.0
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "charts", tuple(self.charts))
        names = [c.name for c in self.charts]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate chart names in {names}")

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.charts]

    def chart(self, name: str) -> Chart:
        for c in self.charts:
            if c.name == name:
                return c
        raise KeyError(f"no chart named {name!r}; have {self.names}")


def _check_on_circle(x, y, radius: float) -> None:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    resid = np.abs(x * x + y * y - radius * radius)
    if not np.all(resid <= MANIFOLD_TOL * max(1.0, radius * radius)):
        raise OffManifoldError(f"point ({x}, {y}) is not on the circle of radius {radius}")


def _half_chord(u, radius: float):
    # sqrt(R^2 - u^2) without the cancellation of R^2 - u^2
    u = np.asarray(u, dtype=float)
    return np.sqrt(np.maximum((radius - u) * (radius + u), 0.0))


def four_chart_atlas(radius: float = 1.0) -> Atlas:
    """Half-circle charts with axis projections as coordinates."""
    R = float(radius)
    if not R > 0:
        raise ValueError("radius must be positive")
    cod = (-R, R)
    charts = (
        Chart("U1", lambda x, y: y > 0, lambda x, y: x + 0.0 * y,
              lambda u: (u, _half_chord(u, R)), cod, (0.0, math.pi), R),
        Chart("U2", lambda x, y: y < 0, lambda x, y: x + 0.0 * y,
              lambda u: (u, -_half_chord(u, R)), cod, (-math.pi, 0.0), R),
        Chart("U3", lambda x, y: x > 0, lambda x, y: y + 0.0 * x,
              lambda u: (_half_chord(u, R), u), cod, (-math.pi / 2, math.pi / 2), R),
        Chart("U4", lambda x, y: x < 0, lambda x, y: y + 0.0 * x,
              lambda u: (-_half_chord(u, R), u), cod, (math.pi / 2, 3 * math.pi / 2), R),
    )
    return Atlas(charts, 1, R, "four-chart")


def angular_atlas(radius: float = 1.0) -> Atlas:
    """Two polar-angle charts, punctured at ``(-R, 0)`` and ``(R, 0)`` respectively."""
    R = float(radius)
    if not R > 0:
        raise ValueError("radius must be positive")

    def inv(u):
        u = np.asarray(u, dtype=float)
        return R * np.cos(u), R * np.sin(u)

    charts = (
        Chart("U1", lambda x, y: ~((y == 0) & (x < 0)), lambda x, y: np.arctan2(y, x),
              inv, (-math.pi, math.pi), (-math.pi, math.pi), R),
        Chart("U2", lambda x, y: ~((y == 0) & (x > 0)),
              lambda x, y: np.mod(np.arctan2(y, x), TWO_PI),
              inv, (0.0, TWO_PI), (0.0, TWO_PI), R),
    )
    return Atlas(charts, 1, R, "angular")


def circle_points(n: int, radius: float = 1.0, offset: float = 0.0):
    """``n`` equally spaced points ``R (cos t, sin t)``, ``t = 2 pi (k + offset) / n``.

    With ``offset = 0``, samples landing on a coordinate axis are set to exact
    values so that the excluded points of the charts are hit exactly.
    """
    k = np.arange(n, dtype=float)
    theta = TWO_PI * (k + offset) / n
    x, y = radius * np.cos(theta), radius * np.sin(theta)
    if offset == 0.0:
        quarter = (4 * np.arange(n)) % n == 0
        q = (4 * np.arange(n)[quarter]) // n
        x[quarter] = radius * np.array([1.0, 0.0, -1.0, 0.0])[q % 4]
        y[quarter] = radius * np.array([0.0, 1.0, 0.0, -1.0])[q % 4]
    return theta, x, y


def locate(atlas: Atlas, p) -> list[tuple[str, float]]:
    """Every ``(chart name, local coordinate)`` pair available at point ``p``."""
    x, y = (float(c) for c in p)
    _check_on_circle(x, y, atlas.radius)
    return [(c.name, float(c.forward(np.float64(x), np.float64(y))))
            for c in atlas.charts if bool(c.contains(x, y))]


@dataclass(frozen=True)
class HomeomorphismReport:
    chart: str
    samples: int
    domain_roundtrip_error: float
    codomain_roundtrip_error: float
    continuity_modulus: float
    inverse_continuity_modulus: float
    domain_violations: int
    tol: float = 1e-12

    @property
    def max_roundtrip_error(self) -> float:
        return max(self.domain_roundtrip_error, self.codomain_roundtrip_error)

    @property
    def ok(self) -> bool:
        return (
            self.max_roundtrip_error <= self.tol
            and self.domain_violations == 0
            and math.isfinite(self.continuity_modulus)
        )

    @property
    def flagged(self) -> bool:
        return not self.ok


def _max_ratio(num, den) -> float:
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    keep = den > 0
    if not np.any(keep):
        return 0.0
    return float(np.max(num[keep] / den[keep]))


def verify_homeomorphism(chart: Chart, n_samples: int, margin: float = 1e-3,
                         tol: float = 1e-12) -> HomeomorphismReport:
    """Sample the chart interior and its coordinate interval and test both round trips.

    Reports the largest ``|inverse(forward(p)) - p|`` and
    ``|forward(inverse(u)) - u|``, the number of coordinates whose inverse
    image falls outside the domain, and the largest ratio of coordinate to
    point separation between neighbouring samples (and the reverse ratio) as
    a sampled continuity modulus.
    """
    if n_samples < 2:
        raise ValueError("need at least two samples")
    R = chart.radius
    start, stop = chart.arc
    width = stop - start
    frac = (np.arange(n_samples) + 0.5) / n_samples
    theta = start + margin * width + (1.0 - 2.0 * margin) * width * frac
    x, y = R * np.cos(theta), R * np.sin(theta)

    u = chart.forward(x, y)
    xb, yb = chart.inverse(u)
    dom_err = float(np.max(np.hypot(xb - x, yb - y)))

    lo, hi = chart.codomain
    us = lo + margin * (hi - lo) + (1.0 - 2.0 * margin) * (hi - lo) * frac
    xs, ys = chart.inverse(us)
    cod_err = float(np.max(np.abs(chart.forward(xs, ys) - us)))
    violations = int(np.count_nonzero(~chart.contains(xs, ys)))

    step = np.hypot(np.diff(x), np.diff(y))
    modulus = _max_ratio(np.abs(np.diff(u)), step)
    inv_modulus = _max_ratio(np.hypot(np.diff(xs), np.diff(ys)), np.abs(np.diff(us)))
    return HomeomorphismReport(chart.name, n_samples, dom_err, cod_err, modulus,
                               inv_modulus, violations, tol * max(1.0, R))


@dataclass(frozen=True)
class CoverageReport:
    samples: int
    uncovered_points: np.ndarray = field(repr=False)

    @property
    def uncovered_count(self) -> int:
        return int(self.uncovered_points.shape[0])


def _covered(atlas: Atlas, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    covered = np.zeros(x.shape, dtype=bool)
    for c in atlas.charts:
        covered |= np.asarray(c.contains(x, y), dtype=bool)
    return covered


def _chunks(n: int, parts: int) -> list[tuple[int, int]]:
    edges = np.linspace(0, n, parts + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def verify_coverage(atlas: Atlas, n_samples: int, points: Sequence | None = None,
                    workers: int = 1) -> CoverageReport:
    """List the sampled circle points that lie in no chart.

    Samples ``n_samples`` equally spaced angles starting at 0 (axis points are
    hit exactly), or checks the explicit ``points`` if given. With
    ``workers > 1`` the samples are split into ordered chunks; the result does
    not depend on the number of workers.
    """
    if points is not None:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        x, y = pts[:, 0], pts[:, 1]
        _check_on_circle(x, y, atlas.radius)
    else:
        if n_samples < 1:
            raise ValueError("need at least one sample")
        _, x, y = circle_points(n_samples, atlas.radius)
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda ab: _covered(atlas, x[ab[0]:ab[1]], y[ab[0]:ab[1]]),
                                _chunks(x.size, workers)))
        covered = np.concatenate(parts)
    else:
        covered = _covered(atlas, x, y)
    bad = ~covered
    return CoverageReport(int(x.size), np.column_stack([x[bad], y[bad]]))


def transition(atlas: Atlas, from_chart: str, to_chart: str, u):
    """Coordinate change ``forward_to(inverse_from(u))`` on the overlap of two charts."""
    a, b = atlas.chart(from_chart), atlas.chart(to_chart)
    x, y = a.from_local(u)
    if not (np.all(a.contains(x, y)) and np.all(b.contains(x, y))):
        raise ChartDomainError(f"coordinate {u} of {from_chart} is not in the overlap with {to_chart}")
    out = b.forward(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class TransitionReport:
    samples: int
    roundtrip_error: float
    cocycle_error: float
    pairs_checked: int

    @property
    def max_error(self) -> float:
        return max(self.roundtrip_error, self.cocycle_error)


def verify_transitions(atlas: Atlas, n_samples: int, margin: float = 1e-3) -> TransitionReport:
    """Round-trip and cocycle consistency of all transition maps on sampled overlaps.

    For every ordered chart pair, ``T_ba(T_ab(u))`` is compared with ``u``;
    for every chart triple, ``T_bc(T_ab(u))`` with ``T_ac(u)``. Only points
    in the margin-trimmed interior of every chart involved are used.
    """
    R = atlas.radius
    theta, x, y = circle_points(n_samples, R, offset=0.5)
    inside = {c.name: c.interior(theta, margin) & c.contains(x, y) for c in atlas.charts}
    local = {c.name: c.forward(x, y) for c in atlas.charts}

    def T(a: Chart, b: Chart, u):
        xi, yi = a.inverse(u)
        return b.forward(xi, yi)

    rt, cc, pairs = 0.0, 0.0, 0
    for a in atlas.charts:
        for b in atlas.charts:
            m = inside[a.name] & inside[b.name]
            if a is b or not np.any(m):
                continue
            pairs += 1
            u = local[a.name][m]
            back = T(b, a, T(a, b, u))
            rt = max(rt, float(np.max(np.abs(back - u))))
            for c in atlas.charts:
                if c is a or c is b:
                    continue
                mm = m & inside[c.name]
                if not np.any(mm):
                    continue
                uu = local[a.name][mm]
                cc = max(cc, float(np.max(np.abs(T(b, c, T(a, b, uu)) - T(a, c, uu)))))
    return TransitionReport(n_samples, rt, cc, pairs)


def angular_rule_error(n_samples: int, radius: float = 1.0, margin: float = 1e-3) -> float:
    """Largest deviation of the angular-atlas transition from its closed form.

    On the lower semicircle the coordinate of the first chart is the second
    one minus 2 pi; on the upper semicircle they agree.
    """
    atlas = angular_atlas(radius)
    frac = (np.arange(n_samples) + 0.5) / n_samples
    u2 = margin * TWO_PI + (1.0 - 2.0 * margin) * TWO_PI * frac
    u2 = u2[np.abs(u2 - math.pi) > margin * TWO_PI]
    u1 = transition(atlas, "U2", "U1", u2)
    expected = np.where(u2 > math.pi, u2 - TWO_PI, u2)
    return float(np.max(np.abs(u1 - expected)))


def rename(atlas: Atlas, prefix: str) -> Atlas:
    """Copy of ``atlas`` with chart names prefixed, for merging atlases."""
    return replace(atlas, charts=tuple(replace(c, name=prefix + c.name) for c in atlas.charts))


def merge(*atlases: Atlas) -> Atlas:
    radii = {a.radius for a in atlases}
    if len(radii) != 1:
        raise ValueError("atlases live on circles of different radius")
    charts = tuple(c for a in atlases for c in a.charts)
    return Atlas(charts, 1, radii.pop(), "+".join(a.name for a in atlases))
