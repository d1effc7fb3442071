import math

import numpy as np
import pytest

from bratteli import (
    BratteliDiagram,
    CylinderFunction,
    FinitePath,
    InvalidArgumentError,
    WeightedSystem,
    cocycle_value,
    enumerate_paths,
    expectation,
    expectation_sequence,
    full_shift_diagram,
    local_potential,
    markovianize,
    normalized_potential,
    pascal_diagram,
    scaled_path_sums,
    transition_matrices,
)
from conftest import crossover_diagram, random_diagram, random_system


def expectation_bruteforce(system, f, n):
    """Independent oracle: explicit sum of rho_n * f over enumerated paths."""
    d = system.diagram
    out = np.zeros(d.num_vertices(n))
    for v in range(d.num_vertices(n)):
        weighted = 0.0
        mass = 0.0
        for p in enumerate_paths(d, 0, n, v, max_paths=None):
            w = 1.0
            for level, k in enumerate(p.edge_indices, start=1):
                w *= float(system.phi[level - 1][k])
            weighted += w * f(p.edge_indices)
            mass += w
        out[v] = weighted / mass
    return out


class TestTransitionMatrices:
    def test_pascal_band_structure(self):
        system = WeightedSystem(pascal_diagram(5))
        for n, a in enumerate(transition_matrices(system), start=1):
            assert a.shape == (n + 1, n)
            expected = np.zeros((n + 1, n))
            for j in range(n):
                expected[j, j] = 1.0
                expected[j + 1, j] = 1.0
            assert np.array_equal(a, expected)

    def test_crossover_matrix(self):
        system = WeightedSystem(crossover_diagram([3, 5], [2, 1]))
        assert np.array_equal(system.transition_matrix(1), [[3, 2], [2, 3]])
        assert np.array_equal(system.transition_matrix(2), [[5, 1], [1, 5]])

    def test_single_vertex_loops_sum(self):
        d = full_shift_diagram(3, 2)
        system = WeightedSystem(d, [[1.0, 2.0, 4.0]] * 2)
        assert np.array_equal(system.transition_matrix(1), [[7.0]])

    def test_parallel_edges_accumulate(self):
        d = BratteliDiagram((1, 1), (((0, 0), (0, 0)),))
        system = WeightedSystem(d, [[0.5, 0.25]])
        assert system.transition_matrix(1)[0, 0] == 0.75


class TestScaledPathSums:
    def test_pascal_binomials(self):
        system = WeightedSystem(pascal_diagram(10))
        u = scaled_path_sums(system, 10)
        expected = np.array([math.comb(10, k) for k in range(11)], dtype=float)
        assert np.allclose(u.values(), expected, rtol=1e-12)

    def test_level_zero_is_ones(self):
        system = WeightedSystem(pascal_diagram(3))
        u = scaled_path_sums(system, 0)
        assert np.array_equal(u.mantissa, np.ones(1))
        assert u.log_scale == 0.0

    def test_two_loop_closed_form(self):
        a, b = 2.0, 3.0
        system = WeightedSystem(full_shift_diagram(2, 50), [[a, b]] * 50)
        u = scaled_path_sums(system, 50)
        assert math.isclose(u.log_entry(0), 50 * math.log(a + b), rel_tol=1e-12)

    def test_mantissa_max_is_one(self, rng):
        for _ in range(5):
            system = random_system(rng)
            for n in range(1, system.level_count + 1):
                assert scaled_path_sums(system, n).mantissa.max() == 1.0


class TestMarkovianize:
    def test_crossover_uniform_scaling(self):
        p, r = 4, 1
        system = WeightedSystem(crossover_diagram([p] * 3, [r] * 3))
        for n in range(1, 4):
            assert np.allclose(
                markovianize(system, n),
                np.array([[p, r], [r, p]]) / (p + r),
                atol=1e-15,
            )

    def test_one_by_one_is_unit(self):
        system = WeightedSystem(full_shift_diagram(2, 2), [[2.0, 5.0]] * 2)
        assert np.array_equal(markovianize(system, 1), [[1.0]])

    def test_rows_sum_to_one(self, rng):
        for _ in range(10):
            system = random_system(rng)
            for n in range(1, system.level_count + 1):
                rows = markovianize(system, n).sum(axis=1)
                assert np.abs(rows - 1.0).max() <= 1e-12


class TestCocycleValue:
    def test_diagonal(self):
        system = WeightedSystem(pascal_diagram(4))
        x = FinitePath(0, (0, 1, 2))
        assert cocycle_value(system, x, x) == 1.0

    def test_unit_weights_give_one(self):
        system = WeightedSystem(pascal_diagram(4))
        x = FinitePath(0, (0, 1))
        y = FinitePath(0, (1, 2))
        assert cocycle_value(system, x, y) == 1.0

    def test_weighted_product(self):
        d = full_shift_diagram(2, 2)
        system = WeightedSystem(d, [[2.0, 5.0], [3.0, 7.0]])
        assert math.isclose(
            cocycle_value(system, (0, 0), (1, 1)), 6.0 / 35.0, rel_tol=1e-15
        )

    def test_cocycle_identity_on_random_triples(self, rng):
        for _ in range(20):
            system = random_system(rng)
            n = system.level_count
            groups = {}
            for v in range(system.diagram.num_vertices(n)):
                paths = enumerate_paths(system.diagram, 0, n, v, max_paths=2000)
                if len(paths) >= 3:
                    groups[v] = paths
            for paths in groups.values():
                idx = rng.integers(0, len(paths), size=3)
                x, y, z = (paths[i] for i in idx)
                lhs = cocycle_value(system, x, y) * cocycle_value(system, y, z)
                rhs = cocycle_value(system, x, z)
                assert math.isclose(lhs, rhs, rel_tol=1e-10)

    def test_mismatches_rejected(self):
        system = WeightedSystem(pascal_diagram(4))
        with pytest.raises(InvalidArgumentError, match="equal length"):
            cocycle_value(system, FinitePath(0, (0,)), FinitePath(0, (0, 0)))
        with pytest.raises(InvalidArgumentError, match="endpoint"):
            cocycle_value(system, FinitePath(0, (0, 0)), FinitePath(0, (1, 2)))


class TestNormalizedPotential:
    def test_empty_path(self):
        system = WeightedSystem(pascal_diagram(3))
        assert normalized_potential(system, FinitePath(0, (), 0)) == 1.0

    def test_pascal_uniform_on_fibers(self):
        system = WeightedSystem(pascal_diagram(6))
        for v in range(7):
            for p in enumerate_paths(system.diagram, 0, 6, v):
                assert math.isclose(
                    normalized_potential(system, p), 1.0 / math.comb(6, v), rel_tol=1e-12
                )

    def test_two_loop_pair(self):
        a, b = 2.0, 3.0
        system = WeightedSystem(full_shift_diagram(2, 2), [[a, b]] * 2)
        assert math.isclose(
            normalized_potential(system, (0, 1)), a * b / (a + b) ** 2, rel_tol=1e-14
        )

    def test_fiber_sums_to_one(self, rng):
        for _ in range(10):
            system = random_system(rng)
            n = system.level_count
            for v in range(system.diagram.num_vertices(n)):
                total = sum(
                    normalized_potential(system, p)
                    for p in enumerate_paths(system.diagram, 0, n, v, max_paths=None)
                )
                assert abs(total - 1.0) <= 1e-10


class TestLocalPotential:
    def test_unit_weights_level_one_in_degree(self):
        d = BratteliDiagram((1, 2), (((0, 0), (0, 0), (0, 1)),))
        system = WeightedSystem(d)
        # vertex 0 of level 1 receives two edges, vertex 1 receives one
        assert math.isclose(local_potential(system, 1, 0), 0.5, rel_tol=1e-15)
        assert math.isclose(local_potential(system, 1, 1), 0.5, rel_tol=1e-15)
        assert local_potential(system, 1, 2) == 1.0

    def test_crossover_loop_edge(self):
        p, r = 4, 1
        system = WeightedSystem(crossover_diagram([p] * 2, [r] * 2))
        assert math.isclose(local_potential(system, 2, 0), p / (p + r), rel_tol=1e-12)

    def test_single_edge_level(self):
        system = WeightedSystem(full_shift_diagram(1, 2), [[3.0]] * 2)
        assert local_potential(system, 1, 0) == 1.0

    def test_fiber_sums_and_markov_aggregation(self, rng):
        for _ in range(10):
            system = random_system(rng)
            for n in range(1, system.level_count + 1):
                edges = system.diagram.level_edges(n)
                values = [local_potential(system, n, k) for k in range(len(edges))]
                sums = np.zeros(system.diagram.num_vertices(n))
                agg = np.zeros_like(markovianize(system, n))
                for (s, r), value in zip(edges, values):
                    sums[r] += value
                    agg[r, s] += value
                assert np.abs(sums - 1.0).max() <= 1e-12
                assert np.abs(agg - markovianize(system, n)).max() <= 1e-12


class TestExpectation:
    def test_constant_function(self, rng):
        for _ in range(5):
            system = random_system(rng)
            vec = expectation(system, CylinderFunction.constant(2.5), system.level_count)
            assert np.allclose(vec, 2.5, atol=1e-12)

    def test_unit_function_exact(self):
        system = WeightedSystem(pascal_diagram(8))
        vec = expectation(system, CylinderFunction.constant(1.0), 8)
        assert (vec == 1.0).all()

    def test_pascal_against_bruteforce(self):
        system = WeightedSystem(pascal_diagram(6))
        f = CylinderFunction(1, {(0,): 0.0, (1,): 1.0})
        for n in range(1, 7):
            dp = expectation(system, f, n)
            brute = expectation_bruteforce(system, f, n)
            assert np.allclose(dp, brute, rtol=1e-12)
            assert np.allclose(dp, np.arange(n + 1) / n, rtol=1e-12)

    def test_exact_match_on_dyadic_inputs(self, rng):
        # With power-of-two weights and integer values every product and sum
        # is exact, so per-level accumulation and explicit enumeration must
        # produce bitwise identical results.
        for _ in range(20):
            d = random_diagram(rng, max_levels=4, max_vertices=3)
            n = d.level_count
            if sum(len(enumerate_paths(d, 0, n, v, max_paths=None)) for v in range(d.num_vertices(n))) > 32:
                continue
            phi = [
                rng.choice([0.5, 1.0, 2.0], size=len(d.level_edges(k)))
                for k in range(1, n + 1)
            ]
            system = WeightedSystem(d, phi)
            depth = int(rng.integers(0, min(2, n) + 1))
            f = CylinderFunction.from_callable(
                d, depth, lambda key: float(rng.integers(-8, 9))
            )
            dp = expectation(system, f, n)
            brute = expectation_bruteforce(system, f, n)
            assert np.array_equal(dp, brute)

    def test_random_against_bruteforce(self, rng):
        for _ in range(10):
            system = random_system(rng, max_levels=4, max_vertices=3)
            n = system.level_count
            depth = int(rng.integers(0, min(2, n) + 1))
            f = CylinderFunction.from_callable(
                system.diagram, depth, lambda key: float(rng.uniform(-1, 1))
            )
            assert np.allclose(
                expectation(system, f, n),
                expectation_bruteforce(system, f, n),
                rtol=1e-11,
                atol=1e-13,
            )

    def test_martingale_composition(self, rng):
        # E_n equals E_n applied to the pullback of E_m(f), for d <= m <= n.
        for _ in range(10):
            system = random_system(rng)
            levels = system.level_count
            depth = int(rng.integers(0, min(2, levels) + 1))
            f = CylinderFunction.from_callable(
                system.diagram, depth, lambda key: float(rng.uniform(-1, 1))
            )
            for m in range(depth, levels + 1):
                mid = expectation(system, f, m)
                pulled = CylinderFunction.from_callable(
                    system.diagram,
                    m,
                    lambda key: mid[FinitePath(0, key).range_vertex(system.diagram)],
                )
                for n in range(m, levels + 1):
                    direct = expectation(system, f, n)
                    composed = expectation(system, pulled, n)
                    assert np.abs(direct - composed).max() <= 1e-10

    def test_depth_beyond_level_rejected(self):
        system = WeightedSystem(pascal_diagram(3))
        f = CylinderFunction(2, dict.fromkeys(
            (p.edge_indices for v in range(3)
             for p in enumerate_paths(system.diagram, 0, 2, v)), 1.0))
        with pytest.raises(InvalidArgumentError):
            expectation(system, f, 1)

    def test_sequence_matches_pointwise(self, rng):
        system = random_system(rng)
        f = CylinderFunction.constant(1.0)
        seq = dict(expectation_sequence(system, f, 0, system.level_count))
        for n, vec in seq.items():
            assert np.array_equal(vec, expectation(system, f, n))

    def test_missing_prefix_value_rejected(self):
        system = WeightedSystem(pascal_diagram(3))
        f = CylinderFunction(1, {(0,): 1.0})  # missing (1,)
        with pytest.raises(InvalidArgumentError, match="no value"):
            expectation(system, f, 2)


class TestWeightedSystemValidation:
    def test_invalid_diagram_rejected(self):
        bad = BratteliDiagram((1, 2), (((0, 0),),))
        with pytest.raises(InvalidArgumentError, match="invalid"):
            WeightedSystem(bad)

    def test_nonpositive_weights_rejected(self):
        with pytest.raises(InvalidArgumentError, match="nonpositive"):
            WeightedSystem(full_shift_diagram(2, 1), [[1.0, 0.0]])

    def test_wrong_weight_shape_rejected(self):
        with pytest.raises(InvalidArgumentError):
            WeightedSystem(full_shift_diagram(2, 1), [[1.0]])

    def test_stationarity_detection(self):
        assert WeightedSystem(full_shift_diagram(2, 3), [[1.0, 2.0]] * 3).is_stationary
        assert not WeightedSystem(
            full_shift_diagram(2, 3), [[1.0, 2.0], [1.0, 2.0], [2.0, 1.0]]
        ).is_stationary
        assert not WeightedSystem(pascal_diagram(3)).is_stationary
