"""Shared builders for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from bratteli import BratteliDiagram, WeightedSystem


def crossover_diagram(p_seq, r_seq) -> BratteliDiagram:
    """Two vertices per level: p_n parallel edges v -> v on each vertex and
    r_n edges crosswise in each direction, so A_n = [[p_n, r_n], [r_n, p_n]]
    under the unit weighting."""
    assert len(p_seq) == len(r_seq)
    edge_levels = []
    for p, r in zip(p_seq, r_seq):
        level = [(0, 0)] * p + [(0, 1)] * r + [(1, 1)] * p + [(1, 0)] * r
        edge_levels.append(tuple(level))
    return BratteliDiagram((2,) * (len(p_seq) + 1), tuple(edge_levels))


def fibonacci_diagram(levels: int) -> BratteliDiagram:
    """Stationary diagram of the golden-mean adjacency [[1, 1], [1, 0]]:
    edges 0->0, 0->1, 1->0 at every level."""
    from bratteli import stationary_diagram

    return stationary_diagram(2, [(0, 0), (1, 0), (0, 1)], levels)


def random_diagram(rng: np.random.Generator, max_levels=5, max_vertices=4) -> BratteliDiagram:
    levels = int(rng.integers(2, max_levels + 1))
    counts = [int(rng.integers(1, max_vertices + 1)) for _ in range(levels + 1)]
    edge_levels = []
    for n in range(1, levels + 1):
        edges = []
        for v in range(counts[n - 1]):
            for _ in range(int(rng.integers(1, 3))):
                edges.append((v, int(rng.integers(0, counts[n]))))
        received = {r for _, r in edges}
        for w in range(counts[n]):
            if w not in received:
                edges.append((int(rng.integers(0, counts[n - 1])), w))
        edge_levels.append(tuple(edges))
    return BratteliDiagram(tuple(counts), tuple(edge_levels))


def random_system(
    rng: np.random.Generator, max_levels=5, max_vertices=4, weight_low=0.2, weight_high=3.0
) -> WeightedSystem:
    diagram = random_diagram(rng, max_levels, max_vertices)
    phi = [
        rng.uniform(weight_low, weight_high, size=len(diagram.level_edges(n)))
        for n in range(1, diagram.level_count + 1)
    ]
    return WeightedSystem(diagram, phi)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
