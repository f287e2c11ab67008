"""Cut matrices, log-det capacities and diagonal-dominance bounds.

For a cut Omega and an alignment pattern the relevant channel block has
rows indexed by the receiving side Omega^c and columns by the source
side Omega.  The block is rearranged so that the aligned cross-cut
links sit on the leading diagonal (ordered by transmitter), and
conjugate-transposed whenever that makes it wide: the Gram matrix
``I + P M M^H`` then lives in the smaller dimension and its determinant
is unchanged by either step.

``log_det_capacity`` evaluates log2 det(I + P M M^H) through a Cholesky
factorization, ``logdet = 2 * sum(log2(diag(L)))``.  The Ostrowski and
Hadamard-Fischer determinant bounds sandwich that determinant whenever
the Gram matrix is diagonally dominant, which is what the gap analysis
runs on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .model import AlignmentPattern, Cut, NetworkInstance, effective_channel

__all__ = [
    "CutStateMatrix",
    "OstrowskiBound",
    "cut_submatrix",
    "cut_state_matrix",
    "gram_matrix",
    "log_det_capacity",
    "dominance_ratio",
    "cut_dominance_ratio",
    "ostrowski_lower_bound",
    "hadamard_upper_bound",
]

@dataclass(frozen=True)
class CutStateMatrix:
    """Arranged channel block for one (pattern, cut) pair.

    ``row_labels`` / ``col_labels`` name the nodes behind each row and
    column of ``m`` after arrangement; when ``transposed`` is set the
    rows are transmitters and the columns receivers.  The first
    ``aligned_count`` diagonal entries carry the aligned (alpha-scaled)
    coefficients.
    """

    m: np.ndarray
    row_labels: tuple[int, ...]
    col_labels: tuple[int, ...]
    aligned_count: int
    oriented_wide: bool
    transposed: bool


def cut_submatrix(inst: NetworkInstance, cut: Cut) -> np.ndarray:
    """Raw channel block: rows Omega^c ascending, columns Omega ascending."""
    rows = list(cut.complement)
    cols = list(cut.omega)
    return inst.channel[np.ix_(rows, cols)].copy()


def cut_state_matrix(
    inst: NetworkInstance, pattern: AlignmentPattern, cut: Cut
) -> CutStateMatrix:
    """Effective channel block with aligned links on the leading diagonal."""
    h_eff = effective_channel(inst, pattern)
    omega = set(cut.omega)
    comp = set(cut.complement)

    aligned = sorted((i, j) for i, j in pattern if i in omega and j in comp)
    rows = [j for _, j in aligned] + sorted(comp - {j for _, j in aligned})
    cols = [i for i, _ in aligned] + sorted(omega - {i for i, _ in aligned})

    m = h_eff[np.ix_(rows, cols)]
    transposed = False
    if m.shape[0] > m.shape[1]:
        m = m.conj().T
        rows, cols = cols, rows
        transposed = True
    return CutStateMatrix(
        m=m,
        row_labels=tuple(rows),
        col_labels=tuple(cols),
        aligned_count=len(aligned),
        oriented_wide=m.shape[0] <= m.shape[1],
        transposed=transposed,
    )


def gram_matrix(csm: CutStateMatrix, power: float) -> np.ndarray:
    """Hermitian Gram matrix A = I + P M M^H over the smaller dimension."""
    m = csm.m
    return np.eye(m.shape[0]) + power * (m @ m.conj().T)


def log_det_capacity(csm: CutStateMatrix, power: float) -> float:
    """log2 det(I + P M M^H) in bits; exactly 0 for an all-zero block."""
    a = gram_matrix(csm, power)
    try:
        chol = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:  # A >= I, so this is a genuine fault
        raise np.linalg.LinAlgError(
            f"gram matrix unexpectedly not positive definite: {exc}"
        ) from exc
    return float(2.0 * np.sum(np.log2(np.real(np.diag(chol)))))


def dominance_ratio(a: np.ndarray) -> float:
    """Worst row ratio of off-diagonal mass to the diagonal entry.

    A ratio <= 1 means every row is (weakly) diagonally dominant.  Zero
    for 1x1 and diagonal matrices.
    """
    a = np.asarray(a)
    n = a.shape[0]
    if n <= 1:
        return 0.0
    abs_a = np.abs(a)
    off = abs_a.sum(axis=1) - np.diag(abs_a)
    return float(np.max(off / np.diag(abs_a)))


def cut_dominance_ratio(csm: CutStateMatrix, power: float) -> float:
    """Dominance ratio of the Gram matrix I + P M M^H."""
    return dominance_ratio(gram_matrix(csm, power))


class OstrowskiBound(NamedTuple):
    value: float
    dominance_ok: bool


def ostrowski_lower_bound(a: np.ndarray) -> OstrowskiBound:
    """Ostrowski-style determinant lower bound (1 - rho)^n * prod(diag).

    For a Hermitian matrix with positive diagonal and dominance ratio
    rho < 1 this lower-bounds det(A).  When rho >= 1 the formula value
    (zero or negative) is still returned, flagged as not dominant.
    """
    a = np.asarray(a)
    rho = dominance_ratio(a)
    value = float((1.0 - rho) ** a.shape[0] * np.prod(np.real(np.diag(a))))
    return OstrowskiBound(value=value, dominance_ok=rho < 1.0)


def hadamard_upper_bound(a: np.ndarray) -> float:
    """Hadamard-Fischer determinant upper bound: the diagonal product."""
    a = np.asarray(a)
    return float(np.prod(np.real(np.diag(a))))
