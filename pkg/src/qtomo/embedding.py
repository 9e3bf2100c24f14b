"""Block form of unit-column-sum matrices: GL(n-1) and IGL(n-1) coordinates.

A frame O is orthogonal with O e0/sqrt(n) = last basis vector.  Conjugating a
matrix with e0^T M = e0^T gives O M O^T = [[linear, translation], [0, 1]]; the
translation vanishes exactly when M also fixes e0 (bistochastic case).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ValidationError

_S2 = np.sqrt(2.0)
_S3 = np.sqrt(3.0)
_S6 = np.sqrt(6.0)

QUTRIT_FRAME = np.array(
    [
        [1 / _S2, -1 / _S2, 0.0],
        [1 / _S6, 1 / _S6, -2 / _S6],
        [1 / _S3, 1 / _S3, 1 / _S3],
    ]
)


@dataclass(frozen=True, eq=False)
class EmbeddingFrame:
    n: int
    O: np.ndarray

    def __post_init__(self):
        o = np.array(self.O, dtype=float)
        if o.shape != (self.n, self.n):
            raise DimensionError(f"frame: expected {self.n}x{self.n}, got {o.shape}")
        if np.max(np.abs(o @ o.T - np.eye(self.n))) > 1e-12:
            raise ValidationError("frame: O is not orthogonal")
        target = np.zeros(self.n)
        target[-1] = 1.0
        if np.max(np.abs(o @ np.full(self.n, 1 / np.sqrt(self.n)) - target)) > 1e-12:
            raise ValidationError("frame: O does not send e0/sqrt(n) to the last basis vector")
        o.setflags(write=False)
        object.__setattr__(self, "O", o)


@dataclass(frozen=True, eq=False)
class AffineBlock:
    linear: np.ndarray
    translation: np.ndarray

    @property
    def n(self) -> int:
        return self.linear.shape[0] + 1

    def matrix(self) -> np.ndarray:
        """The full (n x n) block matrix [[linear, translation], [0, 1]]."""
        n = self.n
        out = np.zeros((n, n))
        out[:-1, :-1] = self.linear
        out[:-1, -1] = self.translation
        out[-1, -1] = 1.0
        return out

    def compose(self, other: "AffineBlock") -> "AffineBlock":
        """Block of M1 @ M2 given self = embed(M1), other = embed(M2)."""
        return AffineBlock(
            self.linear @ other.linear,
            self.linear @ other.translation + self.translation,
        )


def householder_frame(n: int) -> EmbeddingFrame:
    """Reflection mapping e0/sqrt(n) to e_n, first row negated to make det = +1."""
    if n < 2:
        raise ValidationError("frame: n must be >= 2")
    u = np.full(n, 1 / np.sqrt(n))
    target = np.zeros(n)
    target[-1] = 1.0
    v = u - target
    o = np.eye(n) - 2.0 * np.outer(v, v) / (v @ v)
    o[0] = -o[0]
    return EmbeddingFrame(n, o)


def frame_for(n: int) -> EmbeddingFrame:
    if n == 3:
        return EmbeddingFrame(3, QUTRIT_FRAME)
    return householder_frame(n)


def embed(m, frame: EmbeddingFrame | None = None) -> AffineBlock:
    """O M O^T split into its linear block and translation column."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"embed: expected a square matrix, got {a.shape}")
    n = a.shape[0]
    frame = frame or frame_for(n)
    if frame.n != n:
        raise DimensionError(f"embed: frame is for n={frame.n}, matrix is {n}x{n}")
    rot = frame.O @ a @ frame.O.T
    last = np.zeros(n)
    last[-1] = 1.0
    dev = np.max(np.abs(rot[-1] - last))
    if dev > 1e-10:
        raise ValidationError(f"embed: last row of O M O^T deviates from (0,...,0,1) by {dev:.3e}; columns do not sum to 1")
    return AffineBlock(rot[:-1, :-1].copy(), rot[:-1, -1].copy())


def extract(block: AffineBlock, frame: EmbeddingFrame | None = None) -> np.ndarray:
    """Inverse of :func:`embed`.  No nonnegativity check: group elements may leave the semigroup."""
    n = block.n
    frame = frame or frame_for(n)
    if frame.n != n:
        raise DimensionError(f"extract: frame is for n={frame.n}, block is for n={n}")
    if n == 3 and np.array_equal(frame.O, QUTRIT_FRAME):
        (A, B), (C, D) = block.linear
        m, nn = block.translation
        return qutrit_from_coefficients(A, B, C, D, m, nn)
    return frame.O.T @ block.matrix() @ frame.O


def qutrit_coefficients(m) -> dict:
    """Closed-form entries of O M O^T for the 3x3 frame, from the entries of M.

    Columns of M are (x, y, z); rows are indices 1..3.
    """
    (x1, y1, z1), (x2, y2, z2), (x3, y3, z3) = np.asarray(m, dtype=float)
    return {
        "A": 0.5 * (x1 - x2 - y1 + y2),
        "B": (x1 + y1 - 2 * z1 - x2 - y2 + 2 * z2) / (2 * _S3),
        "C": _S3 / 2 * (y3 - x3),
        "D": 0.5 * (2 * z3 - x3 - y3),
        "m": (x1 + y1 + z1 - x2 - y2 - z2) / _S6,
        "n": (1 - x3 - y3 - z3) / _S2,
    }


def qutrit_from_coefficients(A, B, C, D, m, n) -> np.ndarray:
    """Inverse closed forms; the third row follows from the column-sum relations."""
    x1 = (3 * A + _S3 * B + _S3 * C + D + _S6 * m + _S2 * n + 2) / 6
    x2 = (-3 * A - _S3 * B + _S3 * C + D - _S6 * m + _S2 * n + 2) / 6
    y1 = (-3 * A + _S3 * B - _S3 * C + D + _S6 * m + _S2 * n + 2) / 6
    y2 = (3 * A - _S3 * B - _S3 * C + D - _S6 * m + _S2 * n + 2) / 6
    z1 = (-2 * _S3 * B - 2 * D + _S6 * m + _S2 * n + 2) / 6
    z2 = (2 * _S3 * B - 2 * D - _S6 * m + _S2 * n + 2) / 6
    # third row: y3 - x3 = 2C/sqrt(3), 3 z3 = 2D + s, s = x3 + y3 + z3 = 1 - sqrt(2) n
    s = 1 - _S2 * n
    z3 = (2 * D + s) / 3
    x3 = 0.5 * (s - z3 - 2 * C / _S3)
    y3 = 0.5 * (s - z3 + 2 * C / _S3)
    return np.array([[x1, y1, z1], [x2, y2, z2], [x3, y3, z3]])
