"""Dimension-group state equations and the resulting Markov measures.

A state sequence is a strictly positive solution (rho_n) of

    rho_{n-1}(v) = sum over edges e with source v of phi(e) rho_n(range(e))
    sum over V(0) of rho_0(v) = 1

truncated at a finite level.  It is found by backward recursion from a
seed vector at the truncation level; under certified unique ergodicity the
seed washes out by the contraction estimates, and the residual seed
dependence is estimated by re-solving from a deeper probe level.

A state sequence determines a Markov measure: an initial distribution
rho_0 together with edge transition probabilities

    p_n(e) = phi(e) rho_n(range(e)) / rho_{n-1}(source(e)),

and cylinder masses are the products rho_0(s(x_1)) p_1(x_1) ... p_n(x_n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cocycle import CylinderFunction, WeightedSystem, _as_path, expectation
from .diagram import BratteliDiagram
from .errors import InvalidArgumentError
from .scaling import ScaledVector


@dataclass(frozen=True)
class StateSequence:
    """Approximate solution of the state equations, levels 0..truncation.

    ``convergence_estimate`` is the seed-dependence estimate (or the
    equation residual for explicitly supplied sequences); the sequence
    carries its seed description and makes no canonicity claim beyond it.
    """

    rho: tuple[ScaledVector, ...]
    truncation_level: int
    convergence_estimate: float
    tolerance: float
    seed_label: str = "uniform"

    @property
    def converged(self) -> bool:
        return self.convergence_estimate <= self.tolerance

    def log_rho(self, level: int, vertex: int) -> float:
        return self.rho[level].log_entry(vertex)


@dataclass(frozen=True)
class MarkovMeasure:
    """Initial distribution on V(0) plus per-edge transition probabilities."""

    diagram: BratteliDiagram
    initial: np.ndarray
    edge_probs: tuple[np.ndarray, ...]

    def log_initial(self, vertex: int) -> float:
        return float(np.log(self.initial[vertex]))

    def log_edge_prob(self, level: int, edge_index: int) -> float:
        return float(np.log(self.edge_probs[level - 1][edge_index]))


def _backward_pass(system: WeightedSystem, depth: int, seed: np.ndarray) -> list[ScaledVector]:
    """Run the state recursion downward from ``seed`` at ``depth`` and
    normalize the whole sequence by the total level-0 mass."""
    levels: list[ScaledVector] = [ScaledVector.from_values(seed)]
    for n in range(depth, 0, -1):
        a = system.transition_matrix(n)
        cur = levels[-1]
        # (A_n^T rho_n)(v) is exactly the sum of phi(e) rho_n(range e)
        # over edges e with source v.
        raw = a.T @ cur.mantissa
        top = float(raw.max())
        levels.append(ScaledVector(raw / top, cur.log_scale + math.log(top)))
    levels.reverse()

    zero = levels[0]
    mass = float(zero.mantissa.sum())
    log_total = zero.log_scale + math.log(mass)
    # Level 0 is divided directly so its mass sums to 1 to roundoff; deeper
    # levels only shift their log-scale.
    out = [ScaledVector(zero.mantissa / mass, 0.0)]
    out.extend(
        ScaledVector(lv.mantissa, lv.log_scale - log_total) for lv in levels[1:]
    )
    return out


def solve_state(
    system: WeightedSystem,
    seed_depth: int,
    probe_depth: int | None = None,
    tol: float = 1e-8,
    seed_values=None,
    compare_levels: int = 0,
) -> StateSequence:
    """Backward recursion from a seed at ``seed_depth``; seed dependence is
    estimated against a second, uniformly seeded run from ``probe_depth``.

    ``seed_values`` overrides the uniform seed (verification mode: feeding
    an exact level-N state reproduces the exact sequence).  The
    convergence estimate is the worst relative disagreement of rho over
    levels 0..``compare_levels`` between the two runs; when it exceeds
    ``tol`` the result is still returned, flagged via ``converged``.
    """
    if not 1 <= seed_depth <= system.level_count:
        raise InvalidArgumentError(f"seed depth {seed_depth} out of range")
    if probe_depth is None:
        probe_depth = min(seed_depth + 5, system.level_count)
    if not seed_depth <= probe_depth <= system.level_count:
        raise InvalidArgumentError(
            f"probe depth must lie in [seed depth, {system.level_count}]"
        )
    if not 0 <= compare_levels <= seed_depth:
        raise InvalidArgumentError("compare_levels must lie in [0, seed_depth]")

    if seed_values is None:
        seed = np.ones(system.diagram.num_vertices(seed_depth))
        label = "uniform"
    else:
        seed = np.asarray(seed_values, dtype=float)
        if seed.shape != (system.diagram.num_vertices(seed_depth),):
            raise InvalidArgumentError("seed vector shape does not match V(seed_depth)")
        if not np.all(seed > 0.0):
            raise InvalidArgumentError("seed vector must be strictly positive")
        label = "custom"

    levels = _backward_pass(system, seed_depth, seed)

    estimate = 0.0
    if probe_depth > seed_depth:
        probe = _backward_pass(
            system, probe_depth, np.ones(system.diagram.num_vertices(probe_depth))
        )
        for n in range(0, compare_levels + 1):
            diff = np.abs(np.exp(levels[n].log_values() - probe[n].log_values()) - 1.0)
            estimate = max(estimate, float(diff.max()))

    return StateSequence(tuple(levels), seed_depth, estimate, tol, label)


def state_equation_residual(system: WeightedSystem, state: StateSequence) -> float:
    """Worst relative violation of the backward state equation over the
    stored levels (roundoff-sized for sequences from :func:`solve_state`)."""
    worst = 0.0
    for n in range(1, state.truncation_level + 1):
        a = system.transition_matrix(n)
        cur, prev = state.rho[n], state.rho[n - 1]
        raw = a.T @ cur.mantissa
        predicted = np.log(raw) + cur.log_scale
        worst = max(worst, float(np.abs(np.expm1(predicted - prev.log_values())).max()))
    return worst


def exact_state(system: WeightedSystem, vectors, tol: float = 1e-8) -> StateSequence:
    """Wrap explicitly given positive level vectors as a StateSequence.

    No solving happens; the convergence estimate reported is the
    state-equation residual of the supplied sequence.
    """
    levels = tuple(ScaledVector.from_values(np.asarray(v, dtype=float)) for v in vectors)
    if not levels:
        raise InvalidArgumentError("need at least the level-0 vector")
    if len(levels) - 1 > system.level_count:
        raise InvalidArgumentError("more level vectors than diagram levels")
    mass = float(levels[0].values().sum())
    if abs(mass - 1.0) > 1e-9:
        raise InvalidArgumentError(f"level-0 mass {mass!r} is not normalized")
    probe = StateSequence(levels, len(levels) - 1, 0.0, tol, "explicit")
    residual = state_equation_residual(system, probe)
    return StateSequence(levels, len(levels) - 1, residual, tol, "explicit")


def edge_probabilities(system: WeightedSystem, state: StateSequence) -> MarkovMeasure:
    """p_n(e) = phi(e) rho_n(range e) / rho_{n-1}(source e); per-source
    probabilities sum to 1 up to the state-equation residual."""
    initial = np.exp(state.rho[0].log_values())
    probs: list[np.ndarray] = []
    for n in range(1, state.truncation_level + 1):
        edges = system.diagram.level_edges(n)
        cur, prev = state.rho[n], state.rho[n - 1]
        srcs = np.fromiter((s for s, _ in edges), dtype=int, count=len(edges))
        rngs = np.fromiter((r for _, r in edges), dtype=int, count=len(edges))
        p = system.phi[n - 1] * np.exp(
            np.log(cur.mantissa[rngs])
            - np.log(prev.mantissa[srcs])
            + (cur.log_scale - prev.log_scale)
        )
        probs.append(p)
    return MarkovMeasure(system.diagram, initial, tuple(probs))


def cylinder_mass(measure: MarkovMeasure, path) -> float:
    """Measure of the cylinder of a path from level 0, accumulated in log
    space."""
    p = _as_path(path)
    if p.start_level != 0:
        raise InvalidArgumentError("cylinder paths must start at level 0")
    p.check_admissible(measure.diagram)
    if p.end_level > len(measure.edge_probs):
        raise InvalidArgumentError(
            f"path reaches level {p.end_level}, measure stores {len(measure.edge_probs)}"
        )
    log_mass = measure.log_initial(p.source_vertex(measure.diagram))
    for level, k in enumerate(p.edge_indices, start=1):
        log_mass += measure.log_edge_prob(level, k)
    return math.exp(log_mass)


def level_masses(measure: MarkovMeasure, level: int) -> np.ndarray:
    """Total cylinder mass per end vertex at ``level``, by per-level
    accumulation (no path enumeration)."""
    if not 0 <= level <= len(measure.edge_probs):
        raise InvalidArgumentError(f"level {level} out of range for this measure")
    mass = measure.initial.copy()
    for n in range(1, level + 1):
        nxt = np.zeros(measure.diagram.num_vertices(n))
        for idx, (s, r) in enumerate(measure.diagram.level_edges(n)):
            nxt[r] += mass[s] * measure.edge_probs[n - 1][idx]
        mass = nxt
    return mass


def integrate(measure: MarkovMeasure, f: CylinderFunction) -> float:
    """mu(f) as the finite sum of f against the masses of its defining
    depth-d cylinders."""
    if f.depth == 0:
        return f(()) * float(measure.initial.sum())
    total = 0.0
    for key in sorted(f.values):
        total += cylinder_mass(measure, key) * f.values[key]
    return total


def g_measure_residual(
    measure: MarkovMeasure, system: WeightedSystem, f: CylinderFunction, n: int
) -> float:
    """|mu(f) - mu(E_n f)|, both integrals evaluated as finite sums; small
    residual certifies the conditional-expectation fixed-point property at
    level n."""
    if not f.depth <= n <= len(measure.edge_probs):
        raise InvalidArgumentError(
            f"need depth <= n <= truncation, got depth {f.depth}, n {n}"
        )
    cond = expectation(system, f, n)
    mu_cond = float(level_masses(measure, n) @ cond)
    return abs(integrate(measure, f) - mu_cond)
