"""Complex-matrix substrate: validated wrappers, Jacobi eigensolver, SU(2)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import ConvergenceError, DimensionError, ValidationError
from .simplex import ProbabilityVector

VALIDATION_TOL = 1e-10
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
# eigenvalues closer than this are treated as one eigenspace
DEGENERACY_TOL = 1e-12
# moduli within this of the column maximum count as tied for the phase rule
_PHASE_TIE_TOL = 1e-12


def as_complex_matrix(a, name="matrix"):
    """Return ``a`` as a finite 2-D complex128 array."""
    arr = np.array(a, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValidationError(f"{name}: expected a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        bad = tuple(int(i) for i in np.argwhere(~np.isfinite(arr))[0])
        raise ValidationError(f"{name}: non-finite entry at {bad}")
    return arr


def _as_square(a, name):
    arr = as_complex_matrix(a, name)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name}: expected a square matrix, got shape {arr.shape}")
    return arr


def _frozen(arr):
    arr = np.array(arr)
    arr.setflags(write=False)
    return arr


class _MatrixWrapper:
    data: np.ndarray

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.data
        return self.data.astype(dtype)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self):
        return self.data.shape


@dataclass(frozen=True, eq=False)
class UnitaryMatrix(_MatrixWrapper):
    data: np.ndarray

    def __post_init__(self):
        u = _as_square(self.data, "unitary")
        err = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
        if err > VALIDATION_TOL:
            raise ValidationError(f"unitary: max |U^dagger U - I| = {err:.3e} exceeds {VALIDATION_TOL:g}")
        object.__setattr__(self, "data", _frozen(u))

    @property
    def H(self) -> np.ndarray:
        return self.data.conj().T


@dataclass(frozen=True, eq=False)
class DensityMatrix(_MatrixWrapper):
    data: np.ndarray

    def __post_init__(self):
        rho = _as_square(self.data, "density")
        herm = np.max(np.abs(rho - rho.conj().T))
        if herm > VALIDATION_TOL:
            i, j = np.unravel_index(np.argmax(np.abs(rho - rho.conj().T)), rho.shape)
            raise ValidationError(f"density: not Hermitian at ({i}, {j}), deviation {herm:.3e}")
        tr = np.trace(rho)
        if abs(tr - 1.0) > VALIDATION_TOL:
            raise ValidationError(f"density: trace {tr.real:.12g} differs from 1")
        lam = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
        if lam[0] < -VALIDATION_TOL:
            raise ValidationError(f"density: negative eigenvalue {lam[0]:.3e}")
        object.__setattr__(self, "data", _frozen(rho))


class Eigh(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray


def _fix_phases(vectors):
    """Make the largest-modulus entry of each column real and nonnegative."""
    out = vectors.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        mod = np.abs(col)
        lead = int(np.flatnonzero(mod >= mod.max() - _PHASE_TIE_TOL)[0])
        if mod[lead] > 0:
            out[:, k] = col * (abs(col[lead]) / col[lead])
            out[lead, k] = abs(col[lead])
    return out


def _canonical_eigenspace(block):
    """Orthonormal basis of span(block) built from projected standard vectors.

    Depends only on the subspace, so any eigensolver basis of a degenerate
    eigenspace maps to the same frame (up to rounding).
    """
    n, k = block.shape
    proj = block @ block.conj().T
    basis = []
    for i in range(n):
        vec = proj[:, i].copy()
        for b in basis:
            vec -= (b.conj() @ vec) * b
        for b in basis:
            vec -= (b.conj() @ vec) * b
        norm = np.linalg.norm(vec)
        if norm > 1e-8:
            basis.append(vec / norm)
        if len(basis) == k:
            break
    return np.column_stack(basis)


def eig_hermitian(h) -> Eigh:
    """Eigendecomposition of a Hermitian matrix in the module gauge.

    Eigenvalues come back descending.  Degenerate eigenspaces get the
    projected-standard-basis frame, then every column is phase-fixed so its
    largest-modulus entry is real and nonnegative (lowest row index on ties).
    """
    a = _as_square(h, "hermitian")
    dev = np.max(np.abs(a - a.conj().T))
    if dev > VALIDATION_TOL:
        raise ValidationError(f"hermitian: input deviates from its adjoint by {dev:.3e}")
    a = 0.5 * (a + a.conj().T)
    w, v, sweeps, ok = _kernels.jacobi_hermitian(a, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    if not ok:
        raise ConvergenceError(f"Jacobi eigensolver did not converge in {sweeps} sweeps")
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    scale = max(1.0, float(np.max(np.abs(w))))
    start = 0
    n = len(w)
    while start < n:
        stop = start + 1
        while stop < n and w[start] - w[stop] <= DEGENERACY_TOL * scale:
            stop += 1
        if stop - start > 1:
            v[:, start:stop] = _canonical_eigenspace(v[:, start:stop])
        start = stop
    return Eigh(w, _fix_phases(v))


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product, (A (x) B)[i*p + k, j*q + l] = A[i, j] * B[k, l]."""
    return np.kron(np.asarray(a), np.asarray(b))


def su2_from_euler(phi: float, theta: float, psi: float) -> UnitaryMatrix:
    """z-y-z Euler angles to SU(2).

    Equals diag(e^{i phi/2}, e^{-i phi/2}) @ R(theta) @ diag(e^{i psi/2}, e^{-i psi/2})
    with R(theta) = [[cos, sin], [-sin, cos]] of theta/2.  The left phase factor
    commutes with J_z, so tomograms depend on (theta, psi) only.
    """
    for name, x in (("phi", phi), ("theta", theta), ("psi", psi)):
        if not np.isfinite(x):
            raise ValidationError(f"su2_from_euler: {name} is not finite")
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    u = np.array(
        [
            [c * np.exp(0.5j * (phi + psi)), s * np.exp(0.5j * (phi - psi))],
            [-s * np.exp(-0.5j * (phi - psi)), c * np.exp(-0.5j * (phi + psi))],
        ]
    )
    return UnitaryMatrix(u)


def measurement_frame(theta: float, azimuth: float) -> UnitaryMatrix:
    """Qubit frame measuring spin along polar angle ``theta``, azimuth ``azimuth``."""
    return su2_from_euler(0.0, theta, azimuth)


def random_unitary(dim: int, seed: int) -> UnitaryMatrix:
    """Haar-distributed unitary from a seeded complex Ginibre matrix."""
    if dim < 1:
        raise ValidationError("random_unitary: dim must be >= 1")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    q = q * (d / np.abs(d))
    return UnitaryMatrix(q)


def random_density(dim: int, seed: int, rank: int | None = None) -> DensityMatrix:
    """Seeded random state, G G^dagger / Tr with G a dim x rank Ginibre matrix."""
    rng = np.random.default_rng(seed)
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho = rho / np.trace(rho).real
    return DensityMatrix(0.5 * (rho + rho.conj().T))


@dataclass(frozen=True, eq=False)
class SpectralPair:
    """Eigenframe (columns) and descending eigenvalue probability vector of a state."""

    frame: UnitaryMatrix
    spectrum: ProbabilityVector

    def __post_init__(self):
        if not isinstance(self.frame, UnitaryMatrix):
            object.__setattr__(self, "frame", UnitaryMatrix(self.frame))
        if not isinstance(self.spectrum, ProbabilityVector):
            object.__setattr__(self, "spectrum", ProbabilityVector(self.spectrum))
        if self.frame.dim != len(self.spectrum):
            raise DimensionError(f"pair: frame is {self.frame.dim}x{self.frame.dim}, spectrum has length {len(self.spectrum)}")
        p = self.spectrum.components
        if np.any(np.diff(p) > VALIDATION_TOL):
            raise ValidationError("pair: spectrum is not sorted descending")
        u = self.frame.data
        fixed = _fix_phases(u)
        if np.max(np.abs(fixed - u)) > VALIDATION_TOL:
            k = int(np.argmax(np.max(np.abs(fixed - u), axis=0)))
            raise ValidationError(f"pair: column {k} violates the phase gauge")

    @classmethod
    def canonical(cls, frame, spectrum) -> "SpectralPair":
        """Sort the spectrum descending (columns follow) and phase-fix the frame."""
        u = np.array(frame, dtype=complex)
        p = np.array(spectrum, dtype=float)
        order = np.argsort(-p, kind="stable")
        return cls(UnitaryMatrix(_fix_phases(u[:, order])), p[order])
