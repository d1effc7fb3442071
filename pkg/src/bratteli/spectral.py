"""Perron-Frobenius data for primitive nonnegative matrices.

The computational route is normalized power iteration on the transpose
(the probability-vector fixed point), certified by the variation
contraction of the Markovianized L-step matrix: once some power A^L is
entrywise positive, each block of L iterations contracts variation-type
error by at least 1 - min(A^L)/max(A^L).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contraction import ratio_bound
from .errors import InvalidArgumentError, UnsupportedInputError


@dataclass(frozen=True)
class PerronResult:
    eigenvalue: float
    left_vector: np.ndarray  # probability vector mu with A^T mu = eigenvalue * mu
    residual: float  # l1 norm of A^T mu - eigenvalue * mu
    iterations: int
    contraction_bound: float  # 1 - min/max entry ratio of A^L
    primitivity_exponent: int
    converged: bool


def _square_nonnegative(a) -> np.ndarray:
    mat = np.asarray(a, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.size == 0:
        raise InvalidArgumentError("need a nonempty square matrix")
    if np.any(mat < 0.0):
        raise InvalidArgumentError("matrix must be entrywise nonnegative")
    return mat


def wielandt_bound(dim: int) -> int:
    """Largest primitivity exponent possible for a dim x dim matrix."""
    return (dim - 1) ** 2 + 1


def primitivity_exponent(a) -> int | None:
    """Smallest L with A^L entrywise positive, or None if no such L exists
    within the Wielandt bound (the matrix is then not primitive).

    Computed on the boolean support; zero rows or columns are rejected.
    """
    mat = _square_nonnegative(a)
    support = mat > 0.0
    if not support.any(axis=1).all():
        raise InvalidArgumentError("matrix has a zero row")
    if not support.any(axis=0).all():
        raise InvalidArgumentError("matrix has a zero column")
    power = support.copy()
    for exponent in range(1, wielandt_bound(mat.shape[0]) + 1):
        if power.all():
            return exponent
        power = (power.astype(np.int64) @ support.astype(np.int64)) > 0
    return None


def perron(a, tol: float = 1e-10, max_iter: int = 100_000, start=None) -> PerronResult:
    """Perron eigenvalue and left probability eigenvector of a primitive
    nonnegative matrix.

    Power iteration on A^T: renormalize to a probability vector each step,
    with the eigenvalue estimated by the pre-normalization mass.  Stops
    when the l1 residual of the returned pair is <= tol; hitting max_iter
    first returns the best pair flagged as not converged.
    """
    mat = _square_nonnegative(a)
    exponent = primitivity_exponent(mat)
    if exponent is None:
        raise UnsupportedInputError(
            "matrix is not primitive within the Wielandt bound; "
            "Perron data for imprimitive matrices is out of scope"
        )
    power = np.linalg.matrix_power(mat, exponent)
    bound = 1.0 - ratio_bound(power)

    if start is None:
        mu = np.full(mat.shape[0], 1.0 / mat.shape[0])
    else:
        mu = np.asarray(start, dtype=float)
        if mu.shape != (mat.shape[0],) or not np.all(mu > 0.0):
            raise InvalidArgumentError("start vector must be strictly positive of matching size")
        mu = mu / mu.sum()

    at = mat.T
    lam = float("nan")
    residual = float("inf")
    iterations = 0
    for iterations in range(max_iter + 1):
        image = at @ mu
        lam = float(image.sum())
        residual = float(np.abs(image - lam * mu).sum())
        if residual <= tol:
            return PerronResult(lam, mu, residual, iterations, bound, exponent, True)
        if iterations == max_iter:
            break
        mu = image / lam
    return PerronResult(lam, mu, residual, iterations, bound, exponent, False)
