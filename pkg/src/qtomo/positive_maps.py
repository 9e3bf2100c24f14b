"""States as (frame, spectrum) pairs and positive maps acting on the pair.

The map (U0, p) -> (V U0, M p) moves the eigenframe by a unitary and the
eigenvalue point by a stochastic matrix.  For qubits the spectral data also
have closed forms in the matrix entries, implemented here next to the generic
path so the two can be cross-checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionError, ValidationError
from .hermitian import (
    VALIDATION_TOL,
    DensityMatrix,
    SpectralPair,
    UnitaryMatrix,
    eig_hermitian,
)
from .simplex import ProbabilityVector, StochasticMatrix, apply, validate_stochastic

# |rho_12| at or below this takes the generic eigensolver branch
OFFDIAG_TOL = 1e-14


def _density(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)


@dataclass(frozen=True, eq=False)
class PositiveMapSpec:
    V: UnitaryMatrix
    M: StochasticMatrix

    def __post_init__(self):
        if not isinstance(self.V, UnitaryMatrix):
            object.__setattr__(self, "V", UnitaryMatrix(self.V))
        object.__setattr__(self, "M", validate_stochastic(self.M))
        if self.V.dim != self.M.dim:
            raise DimensionError(f"map: V is {self.V.dim}x{self.V.dim}, M is {self.M.dim}x{self.M.dim}")


def decompose(rho) -> SpectralPair:
    rho = _density(rho)
    w, v = eig_hermitian(rho.data)
    # a valid state may carry eigenvalues down to -VALIDATION_TOL
    w = np.where(w < 0, 0.0, w)
    return SpectralPair(UnitaryMatrix(v), w)


def recompose(pair: SpectralPair) -> DensityMatrix:
    u = pair.frame.data
    rho = (u * pair.spectrum.components) @ u.conj().T
    return DensityMatrix(0.5 * (rho + rho.conj().T))


def apply_positive_map(pair: SpectralPair, spec: PositiveMapSpec) -> DensityMatrix:
    """Density matrix of the pair (V U0, M p)."""
    if pair.frame.dim != spec.V.dim:
        raise DimensionError(f"map: pair is {pair.frame.dim}-dimensional, map is {spec.V.dim}-dimensional")
    frame = spec.V.data @ pair.frame.data
    p = apply(spec.M, pair.spectrum).components
    rho = (frame * p) @ frame.conj().T
    return DensityMatrix(0.5 * (rho + rho.conj().T))


def map_state(rho, spec: PositiveMapSpec) -> DensityMatrix:
    """apply_positive_map(decompose(rho), spec).

    Gauge-dependent when rho has a degenerate spectrum and M does not act
    the same way on the degenerate components.
    """
    return apply_positive_map(decompose(rho), spec)


def _qubit(rho) -> np.ndarray:
    rho = _density(rho)
    if rho.dim != 2:
        raise DimensionError(f"expected a qubit (2x2) state, got {rho.dim}x{rho.dim}")
    return rho.data


def _discriminant(rho) -> float:
    det = (rho[0, 0] * rho[1, 1] - rho[0, 1] * rho[1, 0]).real
    if det < -1e-12 or det > 0.25 + 1e-12:
        raise ValidationError(f"qubit: det rho = {det:.3e} outside [0, 1/4]")
    return max(0.0, 1.0 - 4.0 * det)


def qubit_spectrum(rho) -> ProbabilityVector:
    """Eigenvalues 1/2 +- sqrt(1 - 4 det rho)/2, descending."""
    rho = _qubit(rho)
    root = np.sqrt(_discriminant(rho))
    return ProbabilityVector([0.5 + 0.5 * root, 0.5 - 0.5 * root])


class QubitFrame(NamedTuple):
    frame: UnitaryMatrix
    branch: str  # "closed-form" or "fallback"


def qubit_eigenvectors(rho) -> QubitFrame:
    """Eigenvector frame with real nonnegative second components (zero phases).

    Column k is (2 rho_12 / d_k, 1) normalized, where
    d_k = 1 +- sqrt(1 - 4 det rho) - 2 rho_11.  Whichever d_k suffers
    cancellation is recovered from d_1 d_2 = -4 |rho_12|^2.  Diagonal or
    maximally mixed input has no such form and goes through eig_hermitian.
    """
    rho = _qubit(rho)
    r12 = rho[0, 1]
    root = np.sqrt(_discriminant(rho))
    if abs(r12) <= OFFDIAG_TOL or root == 0.0:
        return QubitFrame(UnitaryMatrix(eig_hermitian(rho).vectors), "fallback")
    base = 1.0 - 2.0 * rho[0, 0].real
    d1 = base + root
    d2 = base - root
    if abs(d1) < abs(d2):
        d1 = -4.0 * abs(r12) ** 2 / d2
    else:
        d2 = -4.0 * abs(r12) ** 2 / d1
    cols = []
    for d in (d1, d2):
        ratio = 2.0 * r12 / d
        y = 1.0 / np.sqrt(abs(ratio) ** 2 + 1.0)
        cols.append([ratio * y, y])
    return QubitFrame(UnitaryMatrix(np.array(cols).T), "closed-form")


def mixture_spectrum(rho1, rho2, lam: float) -> ProbabilityVector:
    """Spectrum of lam rho1 + (1 - lam) rho2 from the determinants of the parts."""
    if not 0.0 <= lam <= 1.0:
        raise ValidationError(f"mixture_spectrum: lambda = {lam} outside [0, 1]")
    a = _qubit(rho1)
    b = _qubit(rho2)
    mu = 1.0 - lam
    det_a = (a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]).real
    det_b = (b[0, 0] * b[1, 1] - b[0, 1] * b[1, 0]).real
    gamma = (a[0, 0] * b[1, 1] + b[0, 0] * a[1, 1] - a[0, 1] * b[1, 0] - b[0, 1] * a[1, 0]).real
    disc = 1.0 - 4.0 * lam**2 * det_a - 4.0 * mu**2 * det_b - 4.0 * lam * mu * gamma
    if disc < -VALIDATION_TOL:
        raise ValidationError(f"mixture_spectrum: negative discriminant {disc:.3e}")
    root = np.sqrt(max(disc, 0.0))
    return ProbabilityVector([0.5 + 0.5 * root, 0.5 - 0.5 * root])
