"""
UCERT - Linear algebra over GF(2)

Row-oriented helpers used by the stabilizer code: every matrix row is one Pauli
string in symplectic (x | z) form.
"""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np


@dataclass(frozen=True)
class RowEchelon:
    """
    Reduced row echelon form R = T·M (mod 2).

    Attributes:
        reduced: R, same shape as M
        pivots: pivot column of each non-zero row of R
        transform: invertible T recording which input rows built each row of R
    """
    reduced: np.ndarray
    pivots: tuple
    transform: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.pivots)


def gf2_rref(matrix: np.ndarray) -> RowEchelon:
    """Gauss-Jordan elimination mod 2 with the row-operation record."""
    R = (np.asarray(matrix, dtype=np.uint8) & 1).copy()
    n_rows, n_cols = R.shape
    T = np.eye(n_rows, dtype=np.uint8)
    pivots: List[int] = []

    row = 0
    for col in range(n_cols):
        if row >= n_rows:
            break
        candidates = np.nonzero(R[row:, col])[0]
        if candidates.size == 0:
            continue
        pivot = row + int(candidates[0])
        if pivot != row:
            R[[row, pivot]] = R[[pivot, row]]
            T[[row, pivot]] = T[[pivot, row]]
        # clear the column everywhere else
        others = np.nonzero(R[:, col])[0]
        others = others[others != row]
        if others.size:
            R[others] ^= R[row]
            T[others] ^= T[row]
        pivots.append(col)
        row += 1

    return RowEchelon(reduced=R, pivots=tuple(pivots), transform=T)


def gf2_rank(matrix: np.ndarray) -> int:
    if np.asarray(matrix).size == 0:
        return 0
    return gf2_rref(matrix).rank


def gf2_left_nullspace(matrix: np.ndarray) -> np.ndarray:
    """Basis (as rows) of {c : c·M = 0 mod 2}."""
    echelon = gf2_rref(matrix)
    return echelon.transform[echelon.rank:].copy()


def gf2_solve_left(echelon: RowEchelon, target: np.ndarray) -> Optional[np.ndarray]:
    """
    Find c with c·M = target (mod 2), M being the matrix behind ``echelon``.

    Returns:
        The coefficient vector, or None when target is outside the row space.
    """
    target = np.asarray(target, dtype=np.uint8) & 1
    pivots = list(echelon.pivots)
    if not pivots:
        return np.zeros(echelon.transform.shape[0], dtype=np.uint8) if not target.any() else None

    coeffs_reduced = target[pivots].astype(np.int64)
    rebuilt = (coeffs_reduced @ echelon.reduced[:len(pivots)].astype(np.int64)) & 1
    if not np.array_equal(rebuilt.astype(np.uint8), target):
        return None

    coeffs = (coeffs_reduced @ echelon.transform[:len(pivots)].astype(np.int64)) & 1
    return coeffs.astype(np.uint8)
