import math

import numpy as np
import pytest

from bratteli import (
    BratteliDiagram,
    CapacityError,
    FinitePath,
    InvalidArgumentError,
    WeightedSystem,
    count_paths,
    enumerate_paths,
    full_shift_diagram,
    pascal_diagram,
    stationary_diagram,
    telescope,
    validate,
)
from conftest import random_diagram


def chain_diagram(levels: int) -> BratteliDiagram:
    return BratteliDiagram((1,) * (levels + 1), tuple((((0, 0),),) * levels))


class TestValidate:
    def test_minimal_chain_is_valid(self):
        assert validate(chain_diagram(4)) == []

    def test_unreached_vertex(self):
        d = BratteliDiagram((1, 2), ((((0, 0)),),))
        report = validate(d)
        assert len(report) == 1
        assert report[0].kind == "unreached-vertex"
        assert report[0].level == 1
        assert "vertex 1" in report[0].detail

    def test_pascal_truncation_is_valid(self):
        assert validate(pascal_diagram(5)) == []

    def test_emitting_vertex_missing(self):
        d = BratteliDiagram((2, 1), ((((0, 0)),),))
        report = validate(d)
        assert [v.kind for v in report] == ["emitting-vertex-missing"]
        assert report[0].level == 0

    def test_dangling_endpoints(self):
        d = BratteliDiagram((1, 1), (((0, 3),),))
        kinds = {v.kind for v in validate(d)}
        assert "dangling-range" in kinds
        assert "unreached-vertex" in kinds


class TestTelescope:
    def test_identity_cuts(self):
        d = pascal_diagram(4)
        scoped = telescope(d, range(5))
        assert scoped.diagram.vertex_counts == d.vertex_counts
        assert scoped.diagram.edges == d.edges
        # each new edge is the one-edge path it came from
        for level in scoped.edge_paths:
            assert all(len(p) == 1 for p in level)

    def test_two_vertex_stationary_two_step_counts(self):
        # 2-cycle with one loop: edges 0->1, 1->0, 0->0
        d = stationary_diagram(2, [(0, 1), (1, 0), (0, 0)], 4)
        scoped = telescope(d, [0, 2, 4])
        # 2-step paths by hand: 0->1->0, 0->0->1, 0->0->0, 1->0->1, 1->0->0
        expected = {(0, 0): 2, (0, 1): 1, (1, 0): 1, (1, 1): 1}
        for level in range(1, 3):
            got = {}
            for e in scoped.diagram.level_edges(level):
                got[e] = got.get(e, 0) + 1
            assert got == expected

    def test_pascal_cut_gives_binomial_multiplicities(self):
        scoped = telescope(pascal_diagram(5), [0, 2])
        mult = {}
        for e in scoped.diagram.level_edges(1):
            mult[e] = mult.get(e, 0) + 1
        assert mult == {(0, 0): 1, (0, 1): 2, (0, 2): 1}

    def test_nested_cuts_compose(self, rng):
        for _ in range(10):
            d = random_diagram(rng, max_levels=5, max_vertices=3)
            if d.level_count < 4:
                continue
            once = telescope(d, [0, 2, 4])
            twice = telescope(once.diagram, [0, 2])
            direct = telescope(d, [0, 4])
            assert twice.diagram.vertex_counts == direct.diagram.vertex_counts
            assert twice.diagram.edges == direct.diagram.edges

    def test_telescoping_preserves_validity(self, rng):
        for _ in range(10):
            d = random_diagram(rng)
            assert validate(d) == []
            cuts = [0, d.level_count]
            assert validate(telescope(d, cuts).diagram) == []

    def test_weight_composition(self):
        d = chain_diagram(3)
        phi = [[2.0], [3.0], [5.0]]
        scoped = telescope(d, [0, 2, 3])
        weights = scoped.compose_weights(phi)
        assert weights == [[6.0], [5.0]]

    @pytest.mark.parametrize(
        "cuts", [[1, 2], [0, 0], [0, 2, 2], [0, 9]], ids=["no-zero", "flat", "repeat", "deep"]
    )
    def test_bad_cuts_rejected(self, cuts):
        with pytest.raises(InvalidArgumentError):
            telescope(pascal_diagram(4), cuts)


class TestEnumeratePaths:
    def test_empty_path_at_vertex(self):
        d = pascal_diagram(3)
        paths = enumerate_paths(d, 2, 2, 1)
        assert paths == [FinitePath(2, (), 1)]

    def test_pascal_binomial_counts(self):
        d = pascal_diagram(6)
        for n in (3, 5, 6):
            for k in range(n + 1):
                assert len(enumerate_paths(d, 0, n, k)) == math.comb(n, k)

    def test_full_two_shift_eight_paths(self):
        d = full_shift_diagram(2, 3)
        paths = enumerate_paths(d, 0, 3, 0)
        assert len(paths) == 8
        assert [p.edge_indices for p in paths[:3]] == [(0, 0, 0), (0, 0, 1), (0, 1, 0)]

    def test_cap_error_names_the_count(self):
        d = full_shift_diagram(2, 3)
        with pytest.raises(CapacityError, match="8 paths"):
            enumerate_paths(d, 0, 3, 0, max_paths=3)

    def test_lexicographic_order(self):
        d = pascal_diagram(4)
        paths = enumerate_paths(d, 0, 4, 2)
        tuples = [p.edge_indices for p in paths]
        assert tuples == sorted(tuples)

    def test_counts_match_unweighted_path_sums(self, rng):
        for _ in range(10):
            d = random_diagram(rng)
            system = WeightedSystem(d)  # phi = 1
            n = d.level_count
            total = sum(count_paths(d, 0, n, v) for v in range(d.num_vertices(n)))
            u = system.scaled_path_sum(n)
            assert np.isclose(float(u.values().sum()), total, rtol=1e-12)
            for v in range(d.num_vertices(n)):
                assert count_paths(d, 0, n, v) == len(
                    enumerate_paths(d, 0, n, v, max_paths=None)
                )


class TestFinitePath:
    def test_empty_path_needs_vertex(self):
        with pytest.raises(InvalidArgumentError):
            FinitePath(0, ())

    def test_admissibility_checks(self):
        d = pascal_diagram(3)
        FinitePath(0, (0, 1)).check_admissible(d)
        with pytest.raises(InvalidArgumentError, match="disconnected"):
            FinitePath(0, (1, 0)).check_admissible(d)
        with pytest.raises(InvalidArgumentError, match="out of range"):
            FinitePath(0, (9,)).check_admissible(d)
