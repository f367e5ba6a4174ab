"""State vectors, inner products and the projection onto rays.

A :class:`StateVector` is a nonzero point of a finite-dimensional complex
Hilbert space. Two state vectors that differ by a nonzero complex factor
describe the same physical state; the equivalence class is a :class:`Ray`.
Rays are stored through a single representative in a fixed gauge (unit norm,
first significant amplitude real and positive), so that equal rays have equal
representatives up to rounding.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.typing import ArrayLike

from .errors import DimensionError, ZeroVectorError

# amplitudes below this fraction of the largest one are treated as zero when
# choosing the gauge
GAUGE_THRESHOLD = 1e-12


@dataclass(frozen=True, eq=False)
class StateVector:
    """A nonzero complex amplitude vector.

    The amplitudes are copied into a read-only ``complex128`` array.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size == 0:
            raise DimensionError("a state vector needs at least one amplitude")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        if not np.any(amps != 0):
            raise ZeroVectorError("the zero vector does not define a state")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = 1e-10) -> bool:
        """True when the vector lies on the unit sphere (within ``tol``)."""
        return abs(self.norm() - 1.0) <= tol

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.amplitudes.copy()
        return self.amplitudes.astype(dtype)

    def __len__(self) -> int:
        return self.dim

    def __repr__(self) -> str:
        return f"StateVector({self.amplitudes.tolist()!r})"

    def to_json(self) -> list[list[float]]:
        return state_to_json(self)


StateLike = Union[StateVector, ArrayLike]


@dataclass(frozen=True, eq=False)
class Ray:
    """A point of projective Hilbert space, held by its canonical representative."""

    representative: StateVector

    @property
    def dim(self) -> int:
        return self.representative.dim

    def __repr__(self) -> str:
        return f"Ray({self.representative.amplitudes.tolist()!r})"


def as_state(v: StateLike) -> StateVector:
    if isinstance(v, StateVector):
        return v
    if isinstance(v, Ray):
        return v.representative
    return StateVector(np.asarray(v))


def _check_same_dim(a: StateVector, b: StateVector) -> None:
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")


def inner_product(a: StateLike, b: StateLike) -> complex:
    """Return <a|b> = sum_k conj(a_k) b_k (antilinear in the first slot)."""
    a, b = as_state(a), as_state(b)
    _check_same_dim(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def normalize(v: StateLike) -> StateVector:
    v = as_state(v)
    amps = v.amplitudes
    # rescale by the largest modulus first so tiny or huge vectors do not
    # under/overflow in the norm
    scaled = amps / np.max(np.abs(amps))
    return StateVector(scaled / np.linalg.norm(scaled))


def _gauge_index(amps: np.ndarray) -> int:
    mags = np.abs(amps)
    return int(np.argmax(mags > GAUGE_THRESHOLD * mags.max()))


def project_to_ray(v: StateLike) -> Ray:
    """Projection onto ray space.

    The representative is normalized and its first significant amplitude
    (relative threshold ``GAUGE_THRESHOLD``) is rotated onto the positive
    real axis.
    """
    u = normalize(v).amplitudes
    k = _gauge_index(u)
    phase = u[k] / abs(u[k])
    rep = u * np.conj(phase)
    rep[k] = abs(u[k])
    return Ray(StateVector(rep))


def rays_equal(p: Ray, q: Ray, tol: float = 1e-12) -> bool:
    _check_same_dim(p.representative, q.representative)
    overlap = abs(inner_product(p.representative, q.representative))
    return 1.0 - overlap <= tol


def state_from_json(data) -> StateVector:
    """Parse the ``[[re, im], ...]`` state format (a JSON string or parsed list)."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    if not isinstance(data, list) or not data:
        raise ValueError("a state must be a non-empty array of [re, im] pairs")
    amps = []
    for pair in data:
        if (
            not isinstance(pair, (list, tuple))
            or len(pair) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
        ):
            raise ValueError(f"malformed amplitude {pair!r}; expected [re, im]")
        amps.append(complex(pair[0], pair[1]))
    return StateVector(np.array(amps))


def state_to_json(v: StateLike) -> list[list[float]]:
    v = as_state(v)
    return [[float(a.real), float(a.imag)] for a in v.amplitudes]


def states_from_json(data) -> list[StateVector]:
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    if not isinstance(data, list):
        raise ValueError("expected an array of states")
    return [state_from_json(item) for item in data]


def random_state(rng: np.random.Generator, dim: int = 2) -> StateVector:
    """Draw a unit vector uniformly (unitarily invariant) from the sphere."""
    z = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return normalize(z)


def random_states(rng: np.random.Generator, count: int, dim: int = 2) -> list[StateVector]:
    return [random_state(rng, dim) for _ in range(count)]

