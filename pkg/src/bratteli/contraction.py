"""Variation seminorm and contraction coefficients of Markovian matrices.

A Markovian matrix (rows indexed by J, columns by I, nonnegative, unit row
sums) contracts the variation seminorm var(f) = max f - min f at rate
1 - epsilon, where epsilon is the minimum over row pairs (j, j') and
column subsets I_1 of

    sum_{i in I_1} b(j, i) + sum_{i not in I_1} b(j', i).

The subset minimum is attained pointwise (take i in I_1 iff
b(j, i) <= b(j', i)), which collapses the formula to the Dobrushin-style
closed form  min_{j,j'} sum_i min(b(j,i), b(j',i)).  The exponential scan
survives only as a test oracle.
"""

from __future__ import annotations

import numpy as np

from .errors import CapacityError, InvalidArgumentError

ROW_SUM_TOL = 1e-12
_BRUTEFORCE_MAX_COLS = 16


def _clamp01(x: float) -> float:
    # Row sums are only unit within tolerance; keep the documented range.
    return min(max(x, 0.0), 1.0)


def variation(f) -> float:
    """max - min of a nonempty vector."""
    v = np.asarray(f, dtype=float)
    if v.size == 0:
        raise InvalidArgumentError("variation of an empty vector is undefined")
    return float(v.max() - v.min())


def check_markovian(b: np.ndarray, tol: float = ROW_SUM_TOL) -> np.ndarray:
    """Validate entries >= 0 and unit row sums within ``tol``.

    Inputs outside tolerance are rejected rather than renormalized, so
    upstream normalization bugs surface here.
    """
    mat = np.asarray(b, dtype=float)
    if mat.ndim != 2 or mat.size == 0:
        raise InvalidArgumentError("a Markovian matrix must be 2-d and nonempty")
    if np.any(mat < 0.0):
        raise InvalidArgumentError("a Markovian matrix must be entrywise nonnegative")
    sums = mat.sum(axis=1)
    worst = float(np.abs(sums - 1.0).max())
    if worst > tol:
        raise InvalidArgumentError(f"row sums deviate from 1 by {worst:.3e} (> {tol:.0e})")
    return mat


def contraction_epsilon(b) -> float:
    """Variation-contraction coefficient of a Markovian matrix, in [0, 1].

    Closed form of the subset minimization: the minimum over ordered row
    pairs of the summed pointwise minima.
    """
    mat = check_markovian(b)
    # (j, j', i) tensor of pointwise minima, reduced over the contiguous
    # last axis exactly like the oracle's per-subset reduction.
    m = np.minimum(mat[:, None, :], mat[None, :, :])
    return _clamp01(float(m.sum(axis=2).min()))


def contraction_epsilon_bruteforce(b) -> float:
    """Literal subset minimization over all 2^|I| column subsets; oracle
    for :func:`contraction_epsilon`."""
    mat = check_markovian(b)
    n_rows, n_cols = mat.shape
    if n_cols > _BRUTEFORCE_MAX_COLS:
        raise CapacityError(
            f"brute force supports at most {_BRUTEFORCE_MAX_COLS} columns, got {n_cols}"
        )
    # masks[s, i] selects row j on column i, row j' otherwise.
    masks = (np.arange(1 << n_cols)[:, None] >> np.arange(n_cols)[None, :]) & 1
    masks = masks.astype(bool)
    best = np.inf
    for j in range(n_rows):
        for j2 in range(n_rows):
            chosen = np.where(masks, mat[j][None, :], mat[j2][None, :])
            best = min(best, float(chosen.sum(axis=1).min()))
    return _clamp01(float(best))


def ratio_bound(a) -> float:
    """min/max entry ratio of a strictly positive matrix; a lower bound for
    the contraction coefficient of any of its Markovianizations."""
    mat = np.asarray(a, dtype=float)
    if mat.size == 0:
        raise InvalidArgumentError("ratio_bound needs a nonempty matrix")
    if np.any(mat <= 0.0):
        raise InvalidArgumentError("ratio_bound needs strictly positive entries")
    return float(mat.min() / mat.max())


def markovianize_matrix(a, u) -> np.ndarray:
    """Row-normalize a strongly positive matrix against a strictly positive
    scaling vector:  b(j, i) = a(j, i) u(i) / (a u)(j)."""
    mat = np.asarray(a, dtype=float)
    vec = np.asarray(u, dtype=float)
    if mat.ndim != 2 or mat.shape[1] != vec.shape[0]:
        raise InvalidArgumentError("matrix and scaling vector shapes do not match")
    if np.any(mat < 0.0):
        raise InvalidArgumentError("matrix must be nonnegative")
    if np.any(vec <= 0.0):
        raise InvalidArgumentError("scaling vector must be strictly positive")
    weighted = mat * vec[None, :]
    row_mass = weighted.sum(axis=1)
    if np.any(row_mass <= 0.0):
        raise InvalidArgumentError("matrix has a zero row; cannot Markovianize")
    return weighted / row_mass[:, None]
