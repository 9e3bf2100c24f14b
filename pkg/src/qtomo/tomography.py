"""Spin tomograms, the orthostochastic factorization, and linear-inversion reconstruction."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .errors import (
    DimensionError,
    InconsistentSamplesError,
    RankDeficiencyError,
    ValidationError,
)
from .hermitian import DensityMatrix, UnitaryMatrix, eig_hermitian, tensor_product
from .simplex import ProbabilityVector, StochasticMatrix, apply, validate_stochastic

IMAG_TOL = 1e-12
RESIDUAL_TOL = 1e-6


def spin_labels(dim: int) -> list:
    """m = j, j-1, ..., -j for dim = 2j + 1."""
    j = Fraction(dim - 1, 2)
    return [j - k for k in range(dim)]


@dataclass(frozen=True, eq=False)
class Tomogram:
    probabilities: ProbabilityVector
    frame: UnitaryMatrix
    dims: tuple

    @property
    def labels(self) -> list:
        """Row labels: m for one system, (m1, m2) with m1 outer for two."""
        if len(self.dims) == 1:
            return spin_labels(self.dims[0])
        return list(product(*(spin_labels(d) for d in self.dims)))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.probabilities, dtype=dtype)


@dataclass(frozen=True, eq=False)
class TomogramSample:
    frame: UnitaryMatrix
    probabilities: ProbabilityVector

    def __post_init__(self):
        if not isinstance(self.frame, UnitaryMatrix):
            object.__setattr__(self, "frame", UnitaryMatrix(self.frame))
        if not isinstance(self.probabilities, ProbabilityVector):
            object.__setattr__(self, "probabilities", ProbabilityVector(self.probabilities))
        if self.frame.dim != len(self.probabilities):
            raise DimensionError(
                f"sample: frame is {self.frame.dim}x{self.frame.dim}, "
                f"probabilities have length {len(self.probabilities)}"
            )


def _density(rho):
    return rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)


def _unitary(u):
    return u if isinstance(u, UnitaryMatrix) else UnitaryMatrix(u)


def _diag_probabilities(rotated):
    d = np.diag(rotated)
    worst = np.max(np.abs(d.imag))
    if worst > IMAG_TOL:
        raise ValidationError(f"tomogram: diagonal has imaginary part {worst:.3e}")
    return ProbabilityVector(np.clip(d.real, 0.0, None))


def tomogram(rho, u) -> Tomogram:
    """W(m, U) = <m| U rho U^dagger |m>, m descending."""
    rho = _density(rho)
    u = _unitary(u)
    if rho.dim != u.dim:
        raise DimensionError(f"tomogram: state is {rho.dim}-dimensional, frame is {u.dim}-dimensional")
    rotated = u.data @ rho.data @ u.H
    return Tomogram(_diag_probabilities(rotated), u, (u.dim,))


def joint_tomogram(rho, u_h, u_k) -> Tomogram:
    """Tomogram in the product frame U_h (x) U_k, labels (m1, m2) with m1 outer."""
    rho = _density(rho)
    u_h = _unitary(u_h)
    u_k = _unitary(u_k)
    if rho.dim != u_h.dim * u_k.dim:
        raise DimensionError(f"joint_tomogram: state dim {rho.dim} != {u_h.dim} * {u_k.dim}")
    u = UnitaryMatrix(tensor_product(u_h.data, u_k.data))
    t = tomogram(rho, u)
    return Tomogram(t.probabilities, u, (u_h.dim, u_k.dim))


def orthostochastic_from(u, u0) -> StochasticMatrix:
    """M_kh = |(U U0)_kh|^2."""
    u = _unitary(u)
    u0 = _unitary(u0)
    if u.dim != u0.dim:
        raise DimensionError(f"orthostochastic_from: dimensions {u.dim} and {u0.dim} differ")
    return validate_stochastic(np.abs(u.data @ u0.data) ** 2, orthostochastic=True)


def tomogram_via_spectrum(pair, u) -> Tomogram:
    """Tomogram as the orthostochastic image of the spectrum, W = |U U0|^2 rho~."""
    u = _unitary(u)
    if pair.frame.dim != u.dim:
        raise DimensionError(f"tomogram_via_spectrum: pair is {pair.frame.dim}-dimensional, frame is {u.dim}-dimensional")
    m = orthostochastic_from(u, pair.frame)
    return Tomogram(apply(m, pair.spectrum), u, (u.dim,))


def hermitian_basis(dim: int) -> np.ndarray:
    """Orthonormal (Hilbert-Schmidt) basis of traceless Hermitian matrices, shape (dim^2 - 1, dim, dim)."""
    out = []
    for j in range(dim):
        for k in range(j + 1, dim):
            s = np.zeros((dim, dim), dtype=complex)
            s[j, k] = s[k, j] = 1 / np.sqrt(2)
            out.append(s)
            a = np.zeros((dim, dim), dtype=complex)
            a[j, k] = -1j / np.sqrt(2)
            a[k, j] = 1j / np.sqrt(2)
            out.append(a)
    for l in range(1, dim):
        d = np.zeros((dim, dim), dtype=complex)
        d[np.arange(l), np.arange(l)] = 1.0
        d[l, l] = -l
        out.append(d / np.sqrt(l * (l + 1)))
    return np.array(out).reshape(-1, dim, dim)


@dataclass(frozen=True, eq=False)
class Reconstruction:
    state: DensityMatrix
    residual: float
    projection_distance: float
    rank: int


def reconstruct(samples, dim: int) -> Reconstruction:
    """Least-squares density matrix from tomogram samples.

    Solves <m|U rho U^dagger|m> = W(m, U) over rho = I/dim + sum_a c_a G_a with
    G_a the traceless orthonormal basis, then clips negative eigenvalues.
    ``projection_distance`` is the Frobenius distance moved by the clipping.
    """
    samples = [s if isinstance(s, TomogramSample) else TomogramSample(*s) for s in samples]
    if dim < 1:
        raise ValidationError("reconstruct: dim must be >= 1")
    basis = hermitian_basis(dim)
    required = dim * dim - 1
    rows = []
    rhs = []
    for idx, s in enumerate(samples):
        if s.frame.dim != dim:
            raise DimensionError(f"reconstruct: sample {idx} has dimension {s.frame.dim}, expected {dim}")
        u = s.frame.data
        # rotated[a] = U G_a U^dagger, only the diagonal is needed
        diag = np.einsum("mi,aij,mj->am", u, basis, u.conj()).real
        rows.append(diag.T)
        rhs.append(s.probabilities.components - 1.0 / dim)
    if required == 0:
        return Reconstruction(DensityMatrix(np.eye(1)), 0.0, 0.0, 0)
    if not rows:
        raise RankDeficiencyError(f"reconstruct: no samples; need rank {required}", 0, required)
    design = np.vstack(rows)
    target = np.concatenate(rhs)
    rank = int(np.linalg.matrix_rank(design, tol=1e-10))
    if rank < required:
        raise RankDeficiencyError(
            f"reconstruct: design matrix has rank {rank}, need {required} for dim {dim}",
            rank,
            required,
        )
    coef, *_ = np.linalg.lstsq(design, target, rcond=None)
    residual = float(np.max(np.abs(design @ coef - target)))
    if residual > RESIDUAL_TOL:
        raise InconsistentSamplesError(
            f"reconstruct: samples are inconsistent, residual {residual:.3e} > {RESIDUAL_TOL:g}",
            residual,
        )
    rho = np.eye(dim) / dim + np.tensordot(coef, basis, axes=1)
    rho = 0.5 * (rho + rho.conj().T)
    w, v = eig_hermitian(rho)
    if w[-1] < 0:
        w = np.clip(w, 0.0, None)
        w = w / w.sum()
        projected = (v * w) @ v.conj().T
        projected = 0.5 * (projected + projected.conj().T)
    else:
        projected = rho
    distance = float(np.linalg.norm(projected - rho))
    return Reconstruction(DensityMatrix(projected), residual, distance, rank)
