"""Subshifts of finite type with locally constant potentials.

The shift acts on one-sided infinite edge paths of a finite directed
graph.  A strictly positive potential of depth k (values on admissible
k-edge words) defines a transfer operator

    (L f)(x) = sum over preimages y of x of  g(y) f(y),

which restricts to a finite matrix on depth-k cylinder functions: the
preimages of a point starting with the word c are e c_1 ... c_{k-1} over
edges e feeding the source of c.  Its transposed eigenproblem has a unique
probability solution when the word graph is primitive, and the eigen pair
extends to cylinder masses of arbitrary admissible words.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .cocycle import CylinderFunction
from .errors import InvalidArgumentError, UnsupportedInputError
from .spectral import PerronResult, perron, primitivity_exponent


@dataclass(frozen=True)
class SftGraph:
    """Finite directed graph; every vertex must emit and receive an edge."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.vertex_count < 1:
            raise InvalidArgumentError("graph needs at least one vertex")
        edges = tuple((int(s), int(r)) for s, r in self.edges)
        for s, r in edges:
            if not (0 <= s < self.vertex_count and 0 <= r < self.vertex_count):
                raise InvalidArgumentError(f"edge ({s}, {r}) references a missing vertex")
        emits = {s for s, _ in edges}
        receives = {r for _, r in edges}
        missing_out = set(range(self.vertex_count)) - emits
        missing_in = set(range(self.vertex_count)) - receives
        if missing_out:
            raise InvalidArgumentError(f"vertices {sorted(missing_out)} emit no edge")
        if missing_in:
            raise InvalidArgumentError(f"vertices {sorted(missing_in)} receive no edge")
        object.__setattr__(self, "edges", edges)

    def source(self, e: int) -> int:
        return self.edges[e][0]

    def range(self, e: int) -> int:
        return self.edges[e][1]

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.vertex_count, self.vertex_count))
        for s, r in self.edges:
            adj[s, r] += 1.0
        return adj


def admissible_words(graph: SftGraph, length: int) -> list[tuple[int, ...]]:
    """Connected edge words of the given length, lexicographic in edge
    indices.  The empty word is the single word of length 0."""
    if length < 0:
        raise InvalidArgumentError("word length must be >= 0")
    if length == 0:
        return [()]
    words: list[tuple[int, ...]] = [(e,) for e in range(len(graph.edges))]
    for _ in range(length - 1):
        words = [
            w + (e,)
            for w in words
            for e in range(len(graph.edges))
            if graph.source(e) == graph.range(w[-1])
        ]
    return words


def is_admissible_word(graph: SftGraph, word: Sequence[int]) -> bool:
    word = tuple(int(e) for e in word)
    if any(not 0 <= e < len(graph.edges) for e in word):
        return False
    return all(graph.range(a) == graph.source(b) for a, b in zip(word, word[1:]))


@dataclass(frozen=True)
class SftSystem:
    """Graph plus a strictly positive locally constant potential of depth
    k >= 1, with one value per admissible k-edge word."""

    graph: SftGraph
    depth: int
    potential: Mapping[tuple[int, ...], float]

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise InvalidArgumentError("potential depth must be >= 1")
        values = {tuple(int(e) for e in w): float(g) for w, g in self.potential.items()}
        admissible = set(admissible_words(self.graph, self.depth))
        missing = admissible - set(values)
        if missing:
            raise InvalidArgumentError(
                f"potential misses {len(missing)} admissible words, e.g. {sorted(missing)[0]}"
            )
        extra = set(values) - admissible
        if extra:
            raise InvalidArgumentError(
                f"potential defines inadmissible words, e.g. {sorted(extra)[0]}"
            )
        if any(g <= 0.0 for g in values.values()):
            raise InvalidArgumentError("potential values must be strictly positive")
        object.__setattr__(self, "potential", values)

    def g(self, word: tuple[int, ...]) -> float:
        return self.potential[word]


@dataclass(frozen=True)
class RuelleMatrix:
    """Transfer operator restricted to depth-k cylinder functions.

    ``matrix[c, c']`` equals g(c') when c' = e c_1...c_{k-1} for an edge e
    feeding source(c_1), else 0; so image-function values are matrix @ f.
    """

    words: tuple[tuple[int, ...], ...]
    matrix: np.ndarray

    @property
    def index(self) -> dict[tuple[int, ...], int]:
        return {w: i for i, w in enumerate(self.words)}


def _transfer_matrix(
    graph: SftGraph, depth: int, g: Mapping[tuple[int, ...], float]
) -> RuelleMatrix:
    words = admissible_words(graph, depth)
    if not words:
        raise InvalidArgumentError("the graph admits no words of the requested depth")
    index = {w: i for i, w in enumerate(words)}
    mat = np.zeros((len(words), len(words)))
    for col, pre in enumerate(words):
        weight = g[pre]
        tail = pre[1:]
        last_range = graph.range(pre[-1])
        for e in range(len(graph.edges)):
            if graph.source(e) == last_range:
                row = index[tail + (e,)]
                mat[row, col] = weight
    return RuelleMatrix(tuple(words), mat)


def build_ruelle_matrix(system: SftSystem) -> RuelleMatrix:
    """Transfer matrix of the system's own depth-k potential."""
    return _transfer_matrix(system.graph, system.depth, system.potential)


@dataclass(frozen=True)
class RuelleEigenResult:
    eigenvalue: float
    words: tuple[tuple[int, ...], ...]
    weights: np.ndarray  # probability vector over words
    residual: float
    iterations: int
    converged: bool

    def as_mapping(self) -> dict[tuple[int, ...], float]:
        return {w: float(p) for w, p in zip(self.words, self.weights)}


def eigen_measure(system: SftSystem, tol: float = 1e-10, max_iter: int = 100_000) -> RuelleEigenResult:
    """Unique probability solution mu of the transposed eigenproblem
    L^T mu = lambda mu on depth-k words.

    Requires the word graph (support of the transfer matrix) to be
    primitive, which is the graph-level minimality hypothesis.
    """
    rm = build_ruelle_matrix(system)
    if primitivity_exponent(rm.matrix) is None:
        raise UnsupportedInputError(
            "transfer-matrix support is not primitive; the eigen-measure "
            "problem is out of scope for non-mixing systems"
        )
    result: PerronResult = perron(rm.matrix, tol=tol, max_iter=max_iter)
    return RuelleEigenResult(
        result.eigenvalue,
        rm.words,
        result.left_vector,
        result.residual,
        result.iterations,
        result.converged,
    )


def extend_cylinder_measure(
    system: SftSystem,
    eigenvalue: float,
    mu: Mapping[tuple[int, ...], float],
    word: Sequence[int],
) -> float:
    """mu(Z(w)) for an admissible word of length m >= k, via m - k
    applications of the fixed-point identity mu(f) = lambda^-1 mu(L f):
    each application consumes the leading edge and multiplies by g of the
    consumed k-window."""
    w = tuple(int(e) for e in word)
    k = system.depth
    if len(w) < k:
        raise InvalidArgumentError(f"word length {len(w)} is below the potential depth {k}")
    if not is_admissible_word(system.graph, w):
        raise InvalidArgumentError(f"word {w} is not admissible")
    log_mass = -(len(w) - k) * math.log(eigenvalue)
    for j in range(len(w) - k):
        log_mass += math.log(system.g(w[j : j + k]))
    suffix = w[len(w) - k :]
    try:
        weight = float(mu[suffix])
    except KeyError:
        raise InvalidArgumentError(f"mu carries no weight for the suffix word {suffix}") from None
    return math.exp(log_mass + math.log(weight))


def stationary_expectation(
    system: SftSystem, f: CylinderFunction, n: int
) -> dict[tuple[int, ...], float]:
    """E_n(f) after n one-step weighted-average pushes, reported on the
    lifted word space (values keyed by max(depth f, k)-words; for n >= the
    function depth they depend only on the first k-1 edges).

    Computed as the n-fold transfer push of f divided by the n-fold push
    of 1, with a shared per-step renormalizer, so E_n(1) is exactly 1.
    """
    if n < f.depth:
        raise InvalidArgumentError(f"n = {n} is below the function depth {f.depth}")
    k = system.depth
    lifted_depth = max(f.depth, k)
    lifted_g = {
        w: system.g(w[:k]) for w in admissible_words(system.graph, lifted_depth)
    }
    rm = _transfer_matrix(system.graph, lifted_depth, lifted_g)
    num = np.array([f(w[: f.depth]) for w in rm.words])
    den = np.ones(len(rm.words))
    for _ in range(n):
        num = rm.matrix @ num
        den = rm.matrix @ den
        top = float(den.max())
        num /= top
        den /= top
    values = num / den
    return {w: float(v) for w, v in zip(rm.words, values)}


@dataclass(frozen=True)
class WaltersCertificate:
    """Structural certificate that the n-step potentials of a depth-k
    locally constant potential have zero multiplicative variation over
    cylinders of depth n + window: the product g(x)g(Tx)...g(T^{n-1}x)
    reads exactly the first n + k - 1 edges, so agreement there forces
    ratio 1.  Combined with graph primitivity this yields unique
    ergodicity of the associated weight cocycle."""

    potential_depth: int
    window: int  # k - 1
    multiplicative_variation: float  # exactly 0 by locality
    graph_primitive: bool
    unique_ergodicity: bool

    def coordinates_determining(self, n: int) -> int:
        """Number of leading edges that determine the n-step product."""
        return n + self.window


def walters_check_locally_constant(system: SftSystem) -> WaltersCertificate:
    """Certify the uniform-variation condition for the system's locally
    constant potential; a proof object, not a numeric scan."""
    primitive = primitivity_exponent(system.graph.adjacency()) is not None
    return WaltersCertificate(
        potential_depth=system.depth,
        window=system.depth - 1,
        multiplicative_variation=0.0,
        graph_primitive=primitive,
        unique_ergodicity=primitive,
    )
