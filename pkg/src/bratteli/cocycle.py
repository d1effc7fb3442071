"""Quasi-product cocycle machinery on a weighted Bratteli diagram.

A strictly positive edge weighting phi determines, per level n:

* the transition matrix  A_n(w, v) = sum of phi(e) over edges v -> w,
* the scaled path-sum vector u_n = A_n ... A_1 1 (the partition function:
  u_n(w) is the phi-weighted count of paths from level 0 ending at w),
* the row-stochastic Markovianization
  B_n(w, v) = u_n(w)^-1 A_n(w, v) u_{n-1}(v).

On top of these sit the cocycle values (products of weight ratios), the
normalized and local potentials, and the conditional expectations E_n of
locally constant functions, evaluated by per-level accumulation rather
than path enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .diagram import BratteliDiagram, FinitePath, enumerate_paths, validate
from .errors import InvalidArgumentError
from .scaling import ScaledVector


def _as_path(path, start_level: int = 0) -> FinitePath:
    if isinstance(path, FinitePath):
        return path
    return FinitePath(start_level, tuple(path))


class WeightedSystem:
    """A valid Bratteli diagram with a strictly positive edge weighting.

    All per-level caches (A_n, u_n, B_n) are built eagerly at construction;
    afterwards the object is immutable and safe to share.  Summation order
    over edge multisets is fixed (edge-index order) so results are
    bit-reproducible.
    """

    def __init__(self, diagram: BratteliDiagram, phi: Sequence[Sequence[float]] | None = None):
        violations = validate(diagram)
        if violations:
            raise InvalidArgumentError(
                "diagram is invalid: " + "; ".join(str(v) for v in violations)
            )
        self.diagram = diagram
        n_levels = diagram.level_count
        if phi is None:
            weights = [np.ones(len(diagram.level_edges(n))) for n in range(1, n_levels + 1)]
        else:
            if len(phi) != n_levels:
                raise InvalidArgumentError(
                    f"phi must have {n_levels} levels, got {len(phi)}"
                )
            weights = []
            for n in range(1, n_levels + 1):
                w = np.asarray(phi[n - 1], dtype=float)
                if w.shape != (len(diagram.level_edges(n)),):
                    raise InvalidArgumentError(
                        f"phi level {n} has {w.size} weights for "
                        f"{len(diagram.level_edges(n))} edges"
                    )
                if not np.all(w > 0.0):
                    raise InvalidArgumentError(f"phi level {n} has nonpositive weights")
                weights.append(w)
        self.phi: tuple[np.ndarray, ...] = tuple(w.copy() for w in weights)
        for w in self.phi:
            w.setflags(write=False)

        self._matrices: list[np.ndarray] = []
        self._path_sums: list[ScaledVector] = [ScaledVector.ones(diagram.num_vertices(0))]
        self._markov: list[np.ndarray] = []
        for n in range(1, n_levels + 1):
            a = np.zeros((diagram.num_vertices(n), diagram.num_vertices(n - 1)))
            for (s, r), w in zip(diagram.level_edges(n), self.phi[n - 1]):
                a[r, s] += w
            a.setflags(write=False)
            self._matrices.append(a)

            prev = self._path_sums[n - 1]
            raw = a @ prev.mantissa
            top = float(raw.max())
            u = ScaledVector(raw / top, prev.log_scale + math.log(top))
            self._path_sums.append(u)

            # Scale factors cancel exactly: divide by the raw product, not
            # by exp(log_scale) round trips.
            b = (a * prev.mantissa[None, :]) / raw[:, None]
            b.setflags(write=False)
            self._markov.append(b)

    @property
    def level_count(self) -> int:
        return self.diagram.level_count

    @property
    def is_stationary(self) -> bool:
        """True when every level repeats V(0), E(1) and phi(1)."""
        d = self.diagram
        if d.level_count < 1:
            return False
        if len(set(d.vertex_counts)) != 1:
            return False
        first = d.level_edges(1)
        if any(d.level_edges(n) != first for n in range(2, d.level_count + 1)):
            return False
        return all(np.array_equal(w, self.phi[0]) for w in self.phi[1:])

    def transition_matrix(self, n: int) -> np.ndarray:
        """A_n, indexed V(n) x V(n-1)."""
        if not 1 <= n <= self.level_count:
            raise InvalidArgumentError(f"level {n} out of range")
        return self._matrices[n - 1]

    def scaled_path_sum(self, n: int) -> ScaledVector:
        """u_n = A_n ... A_1 1, log-scaled with max mantissa 1."""
        if not 0 <= n <= self.level_count:
            raise InvalidArgumentError(f"level {n} out of range")
        return self._path_sums[n]

    def markov_matrix(self, n: int) -> np.ndarray:
        """B_n(w, v) = u_n(w)^-1 A_n(w, v) u_{n-1}(v); rows sum to 1."""
        if not 1 <= n <= self.level_count:
            raise InvalidArgumentError(f"level {n} out of range")
        return self._markov[n - 1]

    def log_phi(self, level: int, edge_index: int) -> float:
        return float(math.log(self.phi[level - 1][edge_index]))

    def telescope(self, cut_levels: Sequence[int]) -> "WeightedSystem":
        """Contract the underlying diagram, multiplying weights along the
        collapsed paths."""
        from .diagram import telescope as _telescope

        scoped = _telescope(self.diagram, cut_levels)
        return WeightedSystem(scoped.diagram, scoped.compose_weights(self.phi))


def transition_matrices(system: WeightedSystem) -> tuple[np.ndarray, ...]:
    """The sequence A_1, ..., A_N."""
    return tuple(system.transition_matrix(n) for n in range(1, system.level_count + 1))


def scaled_path_sums(system: WeightedSystem, n: int) -> ScaledVector:
    return system.scaled_path_sum(n)


def markovianize(system: WeightedSystem, n: int) -> np.ndarray:
    return system.markov_matrix(n)


def cocycle_value(system: WeightedSystem, x, y) -> float:
    """Product of phi(x_i)/phi(y_i) for two same-length sibling paths from
    level 0 with a common endpoint; computed in log space."""
    px, py = _as_path(x), _as_path(y)
    if px.start_level != 0 or py.start_level != 0:
        raise InvalidArgumentError("cocycle paths must start at level 0")
    if len(px) != len(py):
        raise InvalidArgumentError("cocycle paths must have equal length")
    px.check_admissible(system.diagram)
    py.check_admissible(system.diagram)
    if px.range_vertex(system.diagram) != py.range_vertex(system.diagram):
        raise InvalidArgumentError("cocycle paths must share their endpoint")
    log_ratio = 0.0
    for level, (kx, ky) in enumerate(zip(px.edge_indices, py.edge_indices), start=1):
        log_ratio += system.log_phi(level, kx) - system.log_phi(level, ky)
    return math.exp(log_ratio)


def log_weight(system: WeightedSystem, path) -> float:
    """log of the phi-product along a path from level 0."""
    p = _as_path(path)
    if p.start_level != 0:
        raise InvalidArgumentError("path must start at level 0")
    p.check_admissible(system.diagram)
    return sum(system.log_phi(level, k) for level, k in enumerate(p.edge_indices, start=1))


def normalized_potential(system: WeightedSystem, path) -> float:
    """phi(x_1)...phi(x_n) / u_n(endpoint); sums to 1 over each fiber."""
    p = _as_path(path)
    lw = log_weight(system, p)
    n = p.end_level
    u = system.scaled_path_sum(n)
    return math.exp(lw - u.log_entry(p.range_vertex(system.diagram)))


def local_potential(system: WeightedSystem, level: int, edge_index: int) -> float:
    """u_n(r(e))^-1 phi(e) u_{n-1}(s(e)) for e in E(level); for each range
    vertex the values over incoming edges sum to 1."""
    if not 1 <= level <= system.level_count:
        raise InvalidArgumentError(f"level {level} out of range")
    edges = system.diagram.level_edges(level)
    if not 0 <= edge_index < len(edges):
        raise InvalidArgumentError(f"edge index {edge_index} out of range in E({level})")
    s, r = edges[edge_index]
    prev = system.scaled_path_sum(level - 1)
    a = system.transition_matrix(level)
    raw = a @ prev.mantissa  # same cancellation as in markov_matrix
    return float(system.phi[level - 1][edge_index] * prev.mantissa[s] / raw[r])


@dataclass(frozen=True)
class CylinderFunction:
    """A locally constant function determined by the first ``depth`` edges
    of a path from level 0; values are keyed by edge-index tuples.

    A depth-0 function is a constant (single value keyed by the empty
    tuple).
    """

    depth: int
    values: Mapping[tuple[int, ...], float]

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise InvalidArgumentError("depth must be >= 0")
        vals = {tuple(int(i) for i in k): float(v) for k, v in self.values.items()}
        for key in vals:
            if len(key) != self.depth:
                raise InvalidArgumentError(
                    f"value key {key} has length {len(key)}, expected depth {self.depth}"
                )
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, value: float) -> "CylinderFunction":
        return cls(0, {(): float(value)})

    @classmethod
    def from_callable(
        cls, diagram: BratteliDiagram, depth: int, fn: Callable[[tuple[int, ...]], float]
    ) -> "CylinderFunction":
        values = {}
        for v in range(diagram.num_vertices(depth)):
            for p in enumerate_paths(diagram, 0, depth, v, max_paths=None):
                values[p.edge_indices] = float(fn(p.edge_indices))
        return cls(depth, values)

    def __call__(self, prefix: tuple[int, ...]) -> float:
        try:
            return self.values[tuple(prefix[: self.depth])]
        except KeyError:
            raise InvalidArgumentError(
                f"cylinder function has no value for prefix {tuple(prefix[: self.depth])}"
            ) from None


def _prefix_accumulators(
    system: WeightedSystem, f: CylinderFunction
) -> tuple[np.ndarray, np.ndarray]:
    """Per-vertex sums over depth-d prefixes of phi-product * f and of the
    bare phi-product (the twin partition accumulator).

    Products are taken directly (not in log space) so that exactly
    representable weights stay exact; cylinder depths are small by
    construction, so no overflow headroom is needed.
    """
    d = f.depth
    diagram = system.diagram
    if d > system.level_count:
        raise InvalidArgumentError(f"depth {d} exceeds diagram depth {system.level_count}")
    if d == 0:
        ones = np.ones(diagram.num_vertices(0))
        return f(()) * ones, ones
    acc = np.zeros(diagram.num_vertices(d))
    mass = np.zeros(diagram.num_vertices(d))
    for v in range(diagram.num_vertices(d)):
        for p in enumerate_paths(diagram, 0, d, v, max_paths=None):
            w = 1.0
            for level, k in enumerate(p.edge_indices, start=1):
                w *= float(system.phi[level - 1][k])
            acc[v] += w * f(p.edge_indices)
            mass[v] += w
    return acc, mass


def expectation_sequence(
    system: WeightedSystem, f: CylinderFunction, n_from: int, n_to: int
) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (n, E_n(f) as a vector on V(n)) for n = n_from..n_to.

    E_n(f)(v) is the normalized-potential average of f over length-n paths
    ending at v.  The f-weighted and bare path-sum accumulators are pushed
    level by level and renormalized by a shared power of two, which is
    exact in IEEE arithmetic: the reported quotient is bitwise the
    quotient of the unscaled accumulations, and E_n(1) is exactly 1.
    """
    d = f.depth
    if not d <= n_from <= n_to:
        raise InvalidArgumentError(
            f"need depth <= n_from <= n_to, got depth {d}, range {n_from}..{n_to}"
        )
    if n_to > system.level_count:
        raise InvalidArgumentError(f"horizon {n_to} exceeds diagram depth {system.level_count}")
    vec, mass = _prefix_accumulators(system, f)
    if n_from == d:
        yield d, vec / mass
    for n in range(d + 1, n_to + 1):
        a = system.transition_matrix(n)
        vec = a @ vec
        mass = a @ mass
        scale = math.ldexp(1.0, -math.frexp(float(mass.max()))[1])
        vec *= scale
        mass *= scale
        if n >= n_from:
            yield n, vec / mass


def expectation(system: WeightedSystem, f: CylinderFunction, n: int) -> np.ndarray:
    """E_n(f) as a vector on V(n); E_n(1) = 1 up to roundoff."""
    out = None
    for _, vec in expectation_sequence(system, f, n, n):
        out = vec
    assert out is not None
    return out
