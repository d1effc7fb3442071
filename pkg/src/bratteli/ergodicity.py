"""Unique-ergodicity checks for a weighted system.

Two routes:

* the necessary-and-sufficient variation test: for every basis vector on
  V(m), push through the Markovianized matrices B_{m+1}, ..., B_N and watch
  the variation of the image decay;
* the divergent-series sufficient test on the per-level min/max entry
  ratios of the transition matrices.

Verdicts are tolerance-and-horizon-qualified.  Divergence of an infinite
series is not machine-decidable from finitely many terms, so the series
test never claims it from data alone: the caller either declares
divergence or the system is detected stationary with a positive ratio.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .cocycle import CylinderFunction, WeightedSystem, expectation_sequence
from .contraction import variation
from .errors import InvalidArgumentError


class ErgodicityStatus(str, enum.Enum):
    UNIQUE_AT_TOLERANCE = "unique_at_tolerance"
    SUFFICIENT_CONDITION_MET = "sufficient_condition_met"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ErgodicityVerdict:
    """Outcome of a check: a status, the per-level diagnostic trace
    (variations or partial sums), and the horizon/tolerance it is
    qualified by.  Inconclusive carries no uniqueness claim."""

    status: ErgodicityStatus
    trace: tuple[float, ...]
    horizon: int
    tolerance: float


def check_variation_condition(
    system: WeightedSystem, base_level: int, horizon: int, tol: float
) -> ErgodicityVerdict:
    """Decay of var(B_n ... B_{m+1} delta_v) uniformly over v in V(m).

    The basis vectors span all functions on V(m), and the image of delta_v
    is exactly the v-th column of the matrix product, so this realizes the
    entrywise variation criterion.  The trace records, for each
    n = m+1..horizon, the worst variation over v; it is non-increasing.
    """
    if not 0 <= base_level < horizon <= system.level_count:
        raise InvalidArgumentError(
            f"need 0 <= base < horizon <= {system.level_count}, "
            f"got base {base_level}, horizon {horizon}"
        )
    product = np.eye(system.diagram.num_vertices(base_level))
    trace = []
    for n in range(base_level + 1, horizon + 1):
        product = system.markov_matrix(n) @ product
        trace.append(float((product.max(axis=0) - product.min(axis=0)).max()))
    status = (
        ErgodicityStatus.UNIQUE_AT_TOLERANCE
        if trace[-1] <= tol
        else ErgodicityStatus.INCONCLUSIVE
    )
    return ErgodicityVerdict(status, tuple(trace), horizon, tol)


def level_entry_ratios(system: WeightedSystem, horizon: int) -> list[float]:
    """Per-level ratio of the smallest entry of A_n over the largest
    (0 when A_n contains a zero)."""
    if not 1 <= horizon <= system.level_count:
        raise InvalidArgumentError(f"horizon {horizon} out of range")
    out = []
    for n in range(1, horizon + 1):
        a = system.transition_matrix(n)
        out.append(float(a.min() / a.max()))
    return out


def check_series_condition(
    system: WeightedSystem, horizon: int, declared_divergent: bool = False
) -> ErgodicityVerdict:
    """Partial sums of the per-level entry ratios eps_n of A_n.

    Sufficient-condition status is granted only when the caller declares
    the series divergent, or the system is stationary with eps_1 > 0
    (constant positive terms).  Otherwise the verdict is Inconclusive with
    the partial-sum trace.
    """
    ratios = level_entry_ratios(system, horizon)
    partial = np.cumsum(ratios)
    met = declared_divergent or (system.is_stationary and ratios[0] > 0.0)
    status = (
        ErgodicityStatus.SUFFICIENT_CONDITION_MET if met else ErgodicityStatus.INCONCLUSIVE
    )
    return ErgodicityVerdict(status, tuple(float(s) for s in partial), horizon, 0.0)


def variation_decay(
    system: WeightedSystem, f: CylinderFunction, base_level: int, horizon: int
) -> list[float]:
    """var(E_n(f)) for n = base_level..horizon; non-increasing."""
    if f.depth > base_level:
        raise InvalidArgumentError(
            f"function depth {f.depth} exceeds base level {base_level}"
        )
    return [variation(vec) for _, vec in expectation_sequence(system, f, base_level, horizon)]
