"""Probability vectors and the (bi)stochastic matrix semigroup acting on them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    ConvergenceError,
    DimensionError,
    OscillationError,
    SingularMatrixError,
    ValidationError,
)

SUM_TOL = 1e-10
CLAMP_TOL = 1e-12
PERRON_TOL = 1e-12
PERRON_MAX_ITER = 1_000_000
# number of trailing iterates searched for a periodic window in the fallback
CESARO_WINDOW = 256


def _frozen(arr):
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ProbabilityVector:
    components: np.ndarray

    def __post_init__(self):
        p = np.array(self.components, dtype=float)
        if p.ndim != 1 or p.size < 1:
            raise ValidationError(f"probability: expected a non-empty vector, got shape {p.shape}")
        if not np.all(np.isfinite(p)):
            raise ValidationError("probability: non-finite component")
        low = np.flatnonzero(p < -CLAMP_TOL)
        if low.size:
            raise ValidationError(f"probability: component {low[0]} is negative ({p[low[0]]:.3e})")
        p[p < 0] = 0.0
        total = p.sum()
        if abs(total - 1.0) > SUM_TOL:
            raise ValidationError(f"probability: components sum to {total:.12g}, not 1")
        object.__setattr__(self, "components", _frozen(p))

    def __array__(self, dtype=None, copy=None):
        return self.components if dtype is None else self.components.astype(dtype)

    def __len__(self):
        return self.components.size

    @classmethod
    def uniform(cls, n: int) -> "ProbabilityVector":
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def vertex(cls, n: int, k: int) -> "ProbabilityVector":
        e = np.zeros(n)
        e[k] = 1.0
        return cls(e)


@dataclass(frozen=True, eq=False)
class StochasticMatrix:
    """Column-stochastic matrix.  Build through :func:`validate_stochastic`."""

    entries: np.ndarray
    is_bistochastic: bool
    is_orthostochastic: bool = False

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def shape(self):
        return self.entries.shape


def validate_stochastic(m, orthostochastic: bool = False) -> StochasticMatrix:
    """Check nonnegativity and unit column sums; classify bistochasticity."""
    if isinstance(m, StochasticMatrix):
        return m
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionError(f"stochastic: expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("stochastic: non-finite entry")
    neg = np.argwhere(a < -CLAMP_TOL)
    if neg.size:
        i, j = neg[0]
        raise ValidationError(f"stochastic: negative entry {a[i, j]:.3e} at row {i}, column {j}")
    a[a < 0] = 0.0
    cols = a.sum(axis=0)
    bad = np.flatnonzero(np.abs(cols - 1.0) > SUM_TOL)
    if bad.size:
        raise ValidationError(f"stochastic: column {bad[0]} sums to {cols[bad[0]]:.12g}, not 1")
    rows = a.sum(axis=1)
    bistochastic = bool(np.all(np.abs(rows - 1.0) <= SUM_TOL))
    if orthostochastic and not bistochastic:
        raise ValidationError("stochastic: orthostochastic matrix with non-unit row sums")
    return StochasticMatrix(_frozen(a), bistochastic, bool(orthostochastic))


def _as_prob(p) -> ProbabilityVector:
    return p if isinstance(p, ProbabilityVector) else ProbabilityVector(p)


def apply(m, p) -> ProbabilityVector:
    m = validate_stochastic(m)
    p = _as_prob(p)
    if m.dim != len(p):
        raise DimensionError(f"apply: matrix is {m.dim}x{m.dim}, vector has length {len(p)}")
    return ProbabilityVector(m.entries @ p.components)


def compose(m1, m2) -> StochasticMatrix:
    """Matrix product M1 @ M2, revalidated."""
    m1 = validate_stochastic(m1)
    m2 = validate_stochastic(m2)
    if m1.dim != m2.dim:
        raise DimensionError(f"compose: dimensions {m1.dim} and {m2.dim} differ")
    return validate_stochastic(m1.entries @ m2.entries)


def convex_combine(m1, m2, lam: float) -> StochasticMatrix:
    if not 0.0 <= lam <= 1.0:
        raise ValidationError(f"convex_combine: lambda = {lam} outside [0, 1]")
    m1 = validate_stochastic(m1)
    m2 = validate_stochastic(m2)
    if m1.dim != m2.dim:
        raise DimensionError(f"convex_combine: dimensions {m1.dim} and {m2.dim} differ")
    return validate_stochastic(lam * m1.entries + (1.0 - lam) * m2.entries)


def perron_vector(m, tol: float = PERRON_TOL, max_iter: int = PERRON_MAX_ITER) -> ProbabilityVector:
    """Probability vector fixed by M.

    Power iteration from the uniform vector.  If the iterates do not settle
    (a periodic peripheral spectrum), the mean over each trailing window of
    length 1..CESARO_WINDOW is tried as a Cesàro average and the first one
    fixed by M within ``tol`` is returned.
    """
    m = validate_stochastic(m)
    a = np.ascontiguousarray(m.entries)
    n = m.dim
    p0 = np.full(n, 1.0 / n)
    p, _, ok, tail = _kernels.power_iterate(a, p0, tol, max_iter, CESARO_WINDOW)
    if ok:
        return ProbabilityVector(_clean(p))
    for width in range(1, tail.shape[0] + 1):
        avg = tail[-width:].mean(axis=0)
        avg = avg / avg.sum()
        if np.max(np.abs(a @ avg - avg)) <= tol:
            return ProbabilityVector(_clean(avg))
    raise ConvergenceError(
        f"perron_vector: no fixed point within {tol:g} after {max_iter} iterations "
        f"and Cesàro windows up to {CESARO_WINDOW}"
    )


def _clean(p):
    p = np.where(np.abs(p) < CLAMP_TOL, 0.0, p)
    return p / p.sum()


@dataclass(frozen=True, eq=False)
class PowerLimit:
    matrix: StochasticMatrix
    perron: ProbabilityVector
    steps: int


def power_limit(m, tol: float = 1e-10, max_k: int = 10_000) -> PowerLimit:
    """Rank-one limit L = p e0^T of M^k, with the first k where it is reached.

    Raises OscillationError when M^k stays away from L (e.g. a permutation);
    use :func:`cesaro_limit` for such matrices.
    """
    m = validate_stochastic(m)
    try:
        p = perron_vector(m, tol=min(tol * 1e-3, 1e-13))
    except ConvergenceError as exc:
        raise OscillationError(f"power_limit: {exc}; use cesaro_limit") from exc
    limit = np.outer(p.components, np.ones(m.dim))
    power = m.entries.copy()
    for k in range(1, max_k + 1):
        if np.max(np.abs(power - limit)) <= tol:
            return PowerLimit(validate_stochastic(limit), p, k)
        power = m.entries @ power
    raise OscillationError(
        f"power_limit: ||M^k - L|| stayed above {tol:g} up to k = {max_k} "
        "(oscillating powers); use cesaro_limit"
    )


def cesaro_limit(m, count: int) -> np.ndarray:
    """(1/N) sum_{k=1..N} M^k."""
    if count < 1:
        raise ValidationError("cesaro_limit: N must be >= 1")
    m = validate_stochastic(m)
    acc = _kernels.power_sum(np.ascontiguousarray(m.entries), int(count))
    return acc / count


def inverse_if_exists(m) -> np.ndarray:
    """Inverse in the group of unit-column-sum matrices; entries may be negative."""
    m = validate_stochastic(m)
    det = np.linalg.det(m.entries)
    if abs(det) <= 1e-12:
        raise SingularMatrixError(f"inverse_if_exists: determinant {det:.3e} is numerically zero")
    return np.linalg.inv(m.entries)


def bistochastic_orbit_contains(v, w, tol: float = 1e-12) -> bool:
    """True iff w is in the convex hull of the permutations of v (w majorized by v)."""
    v = _as_prob(v)
    w = _as_prob(w)
    if len(v) != len(w):
        raise DimensionError(f"orbit: lengths {len(v)} and {len(w)} differ")
    sv = np.cumsum(np.sort(v.components)[::-1])
    sw = np.cumsum(np.sort(w.components)[::-1])
    return bool(np.all(sw <= sv + tol))


def is_permutation(m, tol: float = 1e-12) -> bool:
    a = np.asarray(m, dtype=float)
    ones = np.abs(a - 1.0) <= tol
    zeros = np.abs(a) <= tol
    return bool(np.all(ones | zeros) and np.all(ones.sum(0) == 1) and np.all(ones.sum(1) == 1))


def random_stochastic(n: int, rng: np.random.Generator, positive: bool = False) -> StochasticMatrix:
    """Columns drawn uniformly from the simplex (Dirichlet(1,...,1))."""
    a = rng.dirichlet(np.ones(n), size=n).T
    if positive:
        a = np.maximum(a, 1e-3)
        a /= a.sum(axis=0)
    return validate_stochastic(a)


def random_bistochastic(n: int, rng: np.random.Generator, terms: int | None = None) -> StochasticMatrix:
    """Random point of the Birkhoff polytope as a convex sum of permutation matrices."""
    terms = terms or n * n
    weights = rng.dirichlet(np.ones(terms))
    eye = np.eye(n)
    a = sum(wt * eye[rng.permutation(n)] for wt in weights)
    return validate_stochastic(a)
