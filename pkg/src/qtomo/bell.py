"""Two-qubit CHSH analysis through the four-setting stochastic matrix.

Columns of the setting matrix are joint tomograms in the frames
(a, b), (a, c), (d, b), (d, c).  With E the fixed sign matrix,
B = Tr(M E) = E_ab + E_ac + E_db - E_dc where E_hk = W++ - W+- - W-+ + W--.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DimensionError, ValidationError
from .hermitian import DensityMatrix, UnitaryMatrix, measurement_frame
from .simplex import StochasticMatrix, validate_stochastic
from .tomography import joint_tomogram

E_MATRIX = np.array(
    [
        [1, -1, -1, 1],
        [1, -1, -1, 1],
        [1, -1, -1, 1],
        [-1, 1, 1, -1],
    ],
    dtype=float,
)
E_MATRIX.setflags(write=False)

SQRT2 = np.sqrt(2.0)
CIRELSON = 2 * SQRT2
# per-outcome signs of the correlator, outcome order (++, +-, -+, --)
_PARITY = np.array([1.0, -1.0, -1.0, 1.0])
REFINE_MIN_STEP = 1e-6


@dataclass(frozen=True, eq=False)
class BellSetting:
    U_a: UnitaryMatrix
    U_b: UnitaryMatrix
    U_c: UnitaryMatrix
    U_d: UnitaryMatrix

    def __post_init__(self):
        for name in ("U_a", "U_b", "U_c", "U_d"):
            u = getattr(self, name)
            if not isinstance(u, UnitaryMatrix):
                u = UnitaryMatrix(u)
                object.__setattr__(self, name, u)
            if u.dim != 2:
                raise DimensionError(f"setting: {name} must be 2x2")

    @classmethod
    def from_angles(cls, azimuths, polars=(np.pi / 2,) * 4) -> "BellSetting":
        """Frames measuring along (polar, azimuth) for a, b, c, d in that order."""
        frames = [measurement_frame(t, f) for t, f in zip(polars, azimuths)]
        return cls(*frames)


def bell_state() -> DensityMatrix:
    """(|+-> + |-+>)/sqrt(2) as a density matrix."""
    rho = np.zeros((4, 4))
    rho[1:3, 1:3] = 0.5
    return DensityMatrix(rho)


def universal_matrix() -> StochasticMatrix:
    hi = (2 + SQRT2) / 8
    lo = (2 - SQRT2) / 8
    col = np.array([hi, lo, lo, hi])
    flipped = np.array([lo, hi, hi, lo])
    return validate_stochastic(np.column_stack([col, col, col, flipped]))


def setting_matrix(rho, s: BellSetting) -> StochasticMatrix:
    rho = rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)
    if rho.dim != 4:
        raise DimensionError(f"setting_matrix: expected a two-qubit state, got dim {rho.dim}")
    pairs = ((s.U_a, s.U_b), (s.U_a, s.U_c), (s.U_d, s.U_b), (s.U_d, s.U_c))
    cols = [joint_tomogram(rho, h, k).probabilities.components for h, k in pairs]
    return validate_stochastic(np.column_stack(cols))


def bell_number(m) -> float:
    """B = Tr(M E)."""
    a = np.asarray(m, dtype=float)
    if a.shape != (4, 4):
        raise DimensionError(f"bell_number: expected 4x4, got {a.shape}")
    return float(np.trace(a @ E_MATRIX))


def correlation_table(rho, frames_h, frames_k) -> np.ndarray:
    """corr[i, j] = sum_m parity(m) W(m; frames_h[i] (x) frames_k[j])."""
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    uh = np.asarray(frames_h, dtype=complex)
    uk = np.asarray(frames_k, dtype=complex)
    # W[i, j, m1, m2] = <m1 m2| (Uh_i (x) Uk_j) rho (...)^dagger |m1 m2>
    w = np.einsum("ipa,jqb,abcd,ipc,jqd->ijpq", uh, uk, r, uh.conj(), uk.conj(), optimize=True).real
    return np.einsum("ijpq,pq->ij", w, _PARITY.reshape(2, 2))


@dataclass(frozen=True, eq=False)
class ChshResult:
    max_b: float
    setting: BellSetting
    azimuths: tuple
    polars: tuple
    grid_b: float
    grid_azimuths: tuple
    grid_polars: tuple
    grid_index: tuple


def _scan_points(grid: int, full: bool):
    azimuths = 2 * np.pi * np.arange(grid) / grid
    if not full:
        return [(np.pi / 2, f) for f in azimuths]
    # polar grid includes both poles
    polars = np.pi * np.arange(grid) / (grid - 1)
    return [(t, f) for t in polars for f in azimuths]


def _objective(rho, azimuths, polars) -> float:
    return bell_number(setting_matrix(rho, BellSetting.from_angles(azimuths, polars)))


_PAULI = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]])
_Z = np.diag([1.0, -1.0])


def _correlation_tensor(rho) -> np.ndarray:
    """T[i, j] = Tr(rho sigma_i (x) sigma_j)."""
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    return np.einsum("abcd,ica,jdb->ij", r, _PAULI, _PAULI).real


def _direction(theta, azimuth) -> np.ndarray:
    # U^dagger Z U = n . sigma for the frame U
    u = measurement_frame(theta, azimuth).data
    obs = u.conj().T @ _Z @ u
    return np.einsum("ab,iba->i", obs, _PAULI).real / 2


def _fast_objective(t, angles) -> float:
    a, b, c, d = (_direction(angles[4 + k], angles[k]) for k in range(4))
    return float(a @ t @ b + a @ t @ c + d @ t @ b - d @ t @ c)


def _refine(rho, azimuths, polars, step, full):
    """Coordinate ascent with step halving down to REFINE_MIN_STEP."""
    t = _correlation_tensor(rho.data)
    angles = list(azimuths) + list(polars)
    free = 8 if full else 4
    best = _fast_objective(t, angles)
    while step >= REFINE_MIN_STEP:
        improved = False
        for i in range(free):
            for delta in (step, -step):
                trial = list(angles)
                trial[i] += delta
                val = _fast_objective(t, trial)
                if val > best:
                    best, angles, improved = val, trial, True
                    break
        if not improved:
            step /= 2
    az = tuple(float(x) for x in angles[:4])
    po = tuple(float(x) for x in angles[4:])
    return _objective(rho, az, po), az, po


def chsh_scan(rho, grid_per_angle: int = 64, refine: bool = False, full: bool = False) -> ChshResult:
    """Maximize B over measurement frames.

    The default scans four equatorial frames (azimuth grid on [0, 2pi)).  With
    ``full`` each frame also scans its polar angle on [0, pi].  Ties resolve to
    the lowest lexicographic (a, b, c, d) grid index.
    """
    if grid_per_angle < 2:
        raise ValidationError("chsh_scan: grid_per_angle must be >= 2")
    rho = rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)
    if rho.dim != 4:
        raise DimensionError(f"chsh_scan: expected a two-qubit state, got dim {rho.dim}")
    points = _scan_points(grid_per_angle, full)
    frames = np.array([measurement_frame(t, f).data for t, f in points])
    corr = np.ascontiguousarray(correlation_table(rho.data, frames, frames))
    _, ia, ib, ic, id_ = _kernels.chsh_grid_argmax(corr)
    index = (int(ia), int(ib), int(ic), int(id_))
    grid_po = tuple(float(points[i][0]) for i in index)
    grid_az = tuple(float(points[i][1]) for i in index)
    grid_b = _objective(rho, grid_az, grid_po)
    best, az, po = grid_b, grid_az, grid_po
    if refine:
        step = np.pi / grid_per_angle
        best, az, po = _refine(rho, grid_az, grid_po, step, full)
    setting = BellSetting.from_angles(az, po)
    return ChshResult(best, setting, az, po, grid_b, grid_az, grid_po, index)
