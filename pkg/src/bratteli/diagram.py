"""Bratteli diagrams and their finite paths.

A diagram is a leveled multigraph: vertex sets V(0), ..., V(N) and edge
multisets E(1), ..., E(N), every edge running from a vertex of V(n-1) to a
vertex of V(n).  Vertices and edges are identified by (level, ordinal
index); names are optional metadata.  Diagrams are immutable after
construction and all operations here are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CapacityError, InvalidArgumentError

# Hard guard against accidentally materializing astronomically many edges
# when telescoping; ordinary inputs stay far below it.
_TELESCOPE_EDGE_GUARD = 10_000_000


@dataclass(frozen=True)
class BratteliDiagram:
    """Leveled vertex/edge structure.

    ``vertex_counts[n]`` is |V(n)| for n = 0..level_count and
    ``edges[n-1]`` is the tuple of (source, range) index pairs of E(n).
    Parallel edges are permitted and kept distinct.
    """

    vertex_counts: tuple[int, ...]
    edges: tuple[tuple[tuple[int, int], ...], ...]
    vertex_names: tuple[tuple[str, ...], ...] | None = None

    def __post_init__(self) -> None:
        counts = tuple(int(c) for c in self.vertex_counts)
        if len(counts) < 1:
            raise InvalidArgumentError("a diagram needs at least level 0")
        if any(c < 1 for c in counts):
            raise InvalidArgumentError("every level needs at least one vertex")
        levels = tuple(tuple((int(s), int(r)) for s, r in level) for level in self.edges)
        if len(levels) != len(counts) - 1:
            raise InvalidArgumentError(
                f"expected {len(counts) - 1} edge levels, got {len(levels)}"
            )
        object.__setattr__(self, "vertex_counts", counts)
        object.__setattr__(self, "edges", levels)
        if self.vertex_names is not None:
            names = tuple(tuple(str(x) for x in lvl) for lvl in self.vertex_names)
            if tuple(len(lvl) for lvl in names) != counts:
                raise InvalidArgumentError("vertex_names shape must match vertex_counts")
            object.__setattr__(self, "vertex_names", names)

    @property
    def level_count(self) -> int:
        return len(self.vertex_counts) - 1

    def num_vertices(self, level: int) -> int:
        return self.vertex_counts[level]

    def level_edges(self, level: int) -> tuple[tuple[int, int], ...]:
        """Edges of E(level), level in 1..level_count."""
        if not 1 <= level <= self.level_count:
            raise InvalidArgumentError(f"edge level {level} out of range")
        return self.edges[level - 1]

    def edge(self, level: int, index: int) -> tuple[int, int]:
        return self.level_edges(level)[index]

    def vertex_name(self, level: int, index: int) -> str:
        if self.vertex_names is not None:
            return self.vertex_names[level][index]
        return str(index)


@dataclass(frozen=True)
class FinitePath:
    """Connected edges from ``start_level``; identified by edge ordinals.

    An empty path is allowed and identifies a vertex, which must then be
    supplied explicitly.
    """

    start_level: int
    edge_indices: tuple[int, ...]
    vertex: int | None = None

    def __post_init__(self) -> None:
        if self.start_level < 0:
            raise InvalidArgumentError("start_level must be >= 0")
        object.__setattr__(self, "edge_indices", tuple(int(k) for k in self.edge_indices))
        if not self.edge_indices and self.vertex is None:
            raise InvalidArgumentError("an empty path must carry its vertex")

    def __len__(self) -> int:
        return len(self.edge_indices)

    @property
    def end_level(self) -> int:
        return self.start_level + len(self.edge_indices)

    def source_vertex(self, diagram: BratteliDiagram) -> int:
        if not self.edge_indices:
            return int(self.vertex)  # type: ignore[arg-type]
        return diagram.edge(self.start_level + 1, self.edge_indices[0])[0]

    def range_vertex(self, diagram: BratteliDiagram) -> int:
        if not self.edge_indices:
            return int(self.vertex)  # type: ignore[arg-type]
        return diagram.edge(self.end_level, self.edge_indices[-1])[1]

    def check_admissible(self, diagram: BratteliDiagram) -> None:
        """Raise InvalidArgumentError unless the path exists in the diagram."""
        if self.end_level > diagram.level_count:
            raise InvalidArgumentError(
                f"path ends at level {self.end_level}, diagram has {diagram.level_count}"
            )
        if not self.edge_indices:
            if not 0 <= int(self.vertex) < diagram.num_vertices(self.start_level):  # type: ignore[arg-type]
                raise InvalidArgumentError(
                    f"vertex {self.vertex} out of range at level {self.start_level}"
                )
            return
        prev_range: int | None = None
        for offset, k in enumerate(self.edge_indices):
            level = self.start_level + 1 + offset
            if not 0 <= k < len(diagram.level_edges(level)):
                raise InvalidArgumentError(f"edge index {k} out of range in E({level})")
            s, r = diagram.edge(level, k)
            if prev_range is not None and s != prev_range:
                raise InvalidArgumentError(
                    f"path disconnected at level {level}: source {s} != previous range {prev_range}"
                )
            prev_range = r


def path_from_indices(indices: Iterable[int], start_level: int = 0) -> FinitePath:
    """Convenience wrapper for nonempty paths given as bare edge ordinals."""
    return FinitePath(start_level, tuple(indices))


@dataclass(frozen=True)
class Violation:
    """One invariant violation found by :func:`validate`."""

    kind: str
    level: int
    detail: str

    def __str__(self) -> str:
        return f"{self.kind} at level {self.level}: {self.detail}"


def validate(diagram: BratteliDiagram) -> list[Violation]:
    """Check diagram invariants; empty report means a valid diagram.

    Violations are data, not failures: every broken invariant is listed
    with the level and vertex/edge identity it concerns.
    """
    report: list[Violation] = []
    n_levels = diagram.level_count
    for n in range(1, n_levels + 1):
        n_src = diagram.num_vertices(n - 1)
        n_rng = diagram.num_vertices(n)
        emitted = [False] * n_src
        received = [False] * n_rng
        for idx, (s, r) in enumerate(diagram.level_edges(n)):
            bad = False
            if not 0 <= s < n_src:
                report.append(
                    Violation("dangling-source", n, f"edge {idx} has source {s}, V({n - 1}) has {n_src} vertices")
                )
                bad = True
            if not 0 <= r < n_rng:
                report.append(
                    Violation("dangling-range", n, f"edge {idx} has range {r}, V({n}) has {n_rng} vertices")
                )
                bad = True
            if bad:
                continue
            emitted[s] = True
            received[r] = True
        for v in range(n_src):
            if not emitted[v]:
                report.append(
                    Violation("emitting-vertex-missing", n - 1, f"vertex {v} emits no edge into E({n})")
                )
        for w in range(n_rng):
            if not received[w]:
                report.append(
                    Violation("unreached-vertex", n, f"vertex {w} receives no edge from E({n})")
                )
    return report


@dataclass(frozen=True)
class TelescopedDiagram:
    """Result of :func:`telescope`: the contracted diagram plus, for every
    new edge, the original edge ordinals of the path it replaces (so edge
    weights can be multiplied along paths)."""

    diagram: BratteliDiagram
    edge_paths: tuple[tuple[tuple[int, ...], ...], ...]
    cut_levels: tuple[int, ...]

    def compose_weights(self, phi: Sequence[Sequence[float]]) -> list[list[float]]:
        """Multiply per-edge weights of the original diagram along each
        telescoped edge's path.  ``phi[n-1]`` holds the weights of E(n)."""
        out: list[list[float]] = []
        for k, level in enumerate(self.edge_paths):
            cut_base = self.cut_levels[k]
            weights = []
            for path in level:
                w = 1.0
                for offset, e in enumerate(path):
                    w *= float(phi[cut_base + offset][e])
                weights.append(w)
            out.append(weights)
        return out


def telescope(diagram: BratteliDiagram, cut_levels: Sequence[int]) -> TelescopedDiagram:
    """Contract the diagram along ``cut_levels`` (strictly increasing,
    starting at 0).

    V'(k) = V(cut_levels[k]); E'(k) consists of one edge per path of the
    original diagram from level cut_levels[k-1] to cut_levels[k], in
    lexicographic edge-index order.  Levels past the last cut are dropped.
    """
    cuts = [int(c) for c in cut_levels]
    if len(cuts) < 1 or cuts[0] != 0:
        raise InvalidArgumentError("cut_levels must start at 0")
    if any(b <= a for a, b in zip(cuts, cuts[1:])):
        raise InvalidArgumentError("cut_levels must be strictly increasing")
    if cuts[-1] > diagram.level_count:
        raise InvalidArgumentError(
            f"cut level {cuts[-1]} exceeds diagram depth {diagram.level_count}"
        )

    counts = tuple(diagram.num_vertices(c) for c in cuts)
    names = None
    if diagram.vertex_names is not None:
        names = tuple(diagram.vertex_names[c] for c in cuts)

    new_levels: list[tuple[tuple[int, int], ...]] = []
    provenance: list[tuple[tuple[int, ...], ...]] = []
    for a, b in zip(cuts, cuts[1:]):
        combined: list[tuple[int, int]] = []
        paths: list[tuple[int, ...]] = []
        # Iterative product over E(a+1) x ... x E(b), lexicographic in the
        # edge-index tuple, keeping only connected combinations.
        stack: list[tuple[int, tuple[int, ...], int, int]] = []  # (level, prefix, src, rng)
        for idx, (s, r) in enumerate(diagram.level_edges(a + 1)):
            stack.append((a + 1, (idx,), s, r))
        # Depth-first with explicit stack, pushed in reverse for lex order.
        stack.reverse()
        while stack:
            level, prefix, src, rng = stack.pop()
            if level == b:
                combined.append((src, rng))
                paths.append(prefix)
                if len(combined) > _TELESCOPE_EDGE_GUARD:
                    raise CapacityError(
                        f"telescoping would create more than {_TELESCOPE_EDGE_GUARD} edges"
                    )
                continue
            nxt = diagram.level_edges(level + 1)
            for idx in range(len(nxt) - 1, -1, -1):
                s, r = nxt[idx]
                if s == rng:
                    stack.append((level + 1, prefix + (idx,), src, r))
        new_levels.append(tuple(combined))
        provenance.append(tuple(paths))

    contracted = BratteliDiagram(counts, tuple(new_levels), names)
    return TelescopedDiagram(contracted, tuple(provenance), tuple(cuts))


def count_paths(diagram: BratteliDiagram, from_level: int, to_level: int, end_vertex: int) -> int:
    """Number of connected paths from ``from_level`` ending at the given
    vertex of ``to_level``, by per-level accumulation."""
    if not 0 <= from_level <= to_level <= diagram.level_count:
        raise InvalidArgumentError("levels out of range or not ordered")
    if not 0 <= end_vertex < diagram.num_vertices(to_level):
        raise InvalidArgumentError(f"vertex {end_vertex} out of range at level {to_level}")
    counts = [1] * diagram.num_vertices(from_level)
    for n in range(from_level + 1, to_level + 1):
        nxt = [0] * diagram.num_vertices(n)
        for s, r in diagram.level_edges(n):
            nxt[r] += counts[s]
        counts = nxt
    return counts[end_vertex]


def enumerate_paths(
    diagram: BratteliDiagram,
    from_level: int,
    to_level: int,
    end_vertex: int,
    max_paths: int | None = 100_000,
) -> list[FinitePath]:
    """All connected paths from ``from_level`` ending at ``end_vertex`` of
    ``to_level``, in lexicographic edge-index order.

    Raises CapacityError naming the count when it exceeds ``max_paths``.
    """
    total = count_paths(diagram, from_level, to_level, end_vertex)
    if max_paths is not None and total > max_paths:
        raise CapacityError(
            f"{total} paths from level {from_level} to vertex {end_vertex} "
            f"of level {to_level} exceed the cap of {max_paths}"
        )
    if from_level == to_level:
        return [FinitePath(from_level, (), end_vertex)]

    # reach[n][v): does vertex v of level n lead to end_vertex at to_level?
    reach: dict[int, list[bool]] = {
        to_level: [v == end_vertex for v in range(diagram.num_vertices(to_level))]
    }
    for n in range(to_level - 1, from_level - 1, -1):
        cur = [False] * diagram.num_vertices(n)
        nxt = reach[n + 1]
        for s, r in diagram.level_edges(n + 1):
            if nxt[r]:
                cur[s] = True
        reach[n] = cur

    out: list[FinitePath] = []
    prefix: list[int] = []

    def descend(level: int, vertex: int) -> None:
        if level == to_level:
            out.append(FinitePath(from_level, tuple(prefix)))
            return
        for idx, (s, r) in enumerate(diagram.level_edges(level + 1)):
            if s == vertex and reach[level + 1][r]:
                prefix.append(idx)
                descend(level + 1, r)
                prefix.pop()

    # A single pass over first-level edges yields global lexicographic order.
    for idx, (s, r) in enumerate(diagram.level_edges(from_level + 1)):
        if reach[from_level + 1][r]:
            prefix.append(idx)
            descend(from_level + 1, r)
            prefix.pop()
    return out


# -- constructors for common families ---------------------------------------


def pascal_diagram(levels: int) -> BratteliDiagram:
    """Pascal triangle truncated to ``levels`` edge levels: V(n) = {0..n},
    edges k -> k and k -> k+1."""
    if levels < 0:
        raise InvalidArgumentError("levels must be >= 0")
    counts = tuple(n + 1 for n in range(levels + 1))
    edge_levels = []
    for n in range(1, levels + 1):
        level = []
        for k in range(n):  # sources 0..n-1
            level.append((k, k))
            level.append((k, k + 1))
        edge_levels.append(tuple(level))
    return BratteliDiagram(counts, tuple(edge_levels))


def stationary_diagram(
    vertex_count: int,
    level_edges: Sequence[tuple[int, int]],
    levels: int,
) -> BratteliDiagram:
    """Diagram with V(n) = V(0) and E(n) = E(1) for all n."""
    if levels < 1:
        raise InvalidArgumentError("a stationary diagram needs at least one level")
    counts = tuple([vertex_count] * (levels + 1))
    lvl = tuple((int(s), int(r)) for s, r in level_edges)
    return BratteliDiagram(counts, tuple([lvl] * levels))


def full_shift_diagram(symbols: int, levels: int) -> BratteliDiagram:
    """Single vertex per level, ``symbols`` parallel loops."""
    return stationary_diagram(1, [(0, 0)] * symbols, levels)
