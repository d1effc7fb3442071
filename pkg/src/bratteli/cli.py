"""Command-line front end.

One subcommand per workflow: validate, telescope, check-unique, state,
measure, pf, ruelle, expect.  Reports are emitted on stdout as
deterministic JSON (or as an ``n,value`` CSV of the command's primary
numeric sequence with ``--format csv``) and are byte-reproducible for
identical inputs and flags, except for the wall_time field.

Exit codes: 0 success, 2 invalid input, 3 inconclusive or nonconverged
results (distinguishable from hard failure).
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time

import numpy as np

from . import cocycle, ergodicity, measures, sft, spectral
from .contraction import contraction_epsilon, contraction_epsilon_bruteforce
from .diagram import FinitePath, telescope as telescope_diagram, validate as validate_diagram
from .errors import BratteliError
from .formats import (
    diagram_to_data,
    dump_deterministic,
    load_diagram,
    load_graph,
    load_matrix,
    load_word_function,
)

EXIT_OK = 0
EXIT_INVALID_INPUT = 2
EXIT_INCONCLUSIVE = 3


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _report(command: str, input_paths: list[str]) -> dict:
    return {
        "command": command,
        "inputs": {p: _digest(p) for p in input_paths},
        "values": {},
        "traces": {"primary": []},
    }


def _parse_path(text: str) -> FinitePath:
    text = text.strip()
    if not text:
        raise BratteliError("empty path; give comma-separated edge ordinals")
    return FinitePath(0, tuple(int(part) for part in text.split(",")))


def _word(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(",")) if text.strip() else ()


# -- subcommand handlers -----------------------------------------------------


def _cmd_validate(args) -> tuple[dict, int]:
    diagram, _ = load_diagram(args.diagram)
    report = _report("validate", [args.diagram])
    violations = validate_diagram(diagram)
    report["values"]["violations"] = [str(v) for v in violations]
    report["values"]["valid"] = not violations
    per_level = [0] * (diagram.level_count + 1)
    for v in violations:
        per_level[v.level] += 1
    report["traces"]["primary"] = [[n, float(c)] for n, c in enumerate(per_level)]
    return report, EXIT_OK


def _cmd_telescope(args) -> tuple[dict, int]:
    diagram, weights = load_diagram(args.diagram)
    cuts = [int(part) for part in args.cuts.split(",")]
    scoped = telescope_diagram(diagram, cuts)
    new_weights = scoped.compose_weights(weights)
    report = _report("telescope", [args.diagram])
    report["values"]["cut_levels"] = cuts
    report["values"]["diagram"] = diagram_to_data(scoped.diagram, new_weights)
    report["traces"]["primary"] = [
        [k + 1, float(len(level))] for k, level in enumerate(scoped.diagram.edges)
    ]
    return report, EXIT_OK


def _cmd_check_unique(args) -> tuple[dict, int]:
    diagram, weights = load_diagram(args.diagram)
    system = cocycle.WeightedSystem(diagram, weights)
    horizon = args.horizon if args.horizon is not None else diagram.level_count
    report = _report("check-unique", [args.diagram])
    report["values"]["method"] = args.method
    if args.method == "variation":
        verdict = ergodicity.check_variation_condition(system, args.base, horizon, args.tol)
        eps_fn = contraction_epsilon_bruteforce if args.epsilon_oracle else contraction_epsilon
        epsilons = [eps_fn(system.markov_matrix(n)) for n in range(args.base + 1, horizon + 1)]
        bound = list(np.cumprod([1.0 - e for e in epsilons]))
        report["values"]["epsilons"] = epsilons
        report["values"]["geometric_bound"] = [float(b) for b in bound]
    else:
        verdict = ergodicity.check_series_condition(
            system, horizon, declared_divergent=args.declare_divergent
        )
    report["values"]["status"] = verdict.status.value
    report["values"]["horizon"] = verdict.horizon
    report["values"]["tolerance"] = verdict.tolerance
    start = args.base + 1 if args.method == "variation" else 1
    report["traces"]["primary"] = [
        [n, v] for n, v in zip(range(start, verdict.horizon + 1), verdict.trace)
    ]
    if args.function is not None:
        f = load_word_function(args.function)
        report["inputs"][args.function] = _digest(args.function)
        decay = ergodicity.variation_decay(system, f, args.base, horizon)
        report["values"]["function_variation_decay"] = decay
    ok = verdict.status != ergodicity.ErgodicityStatus.INCONCLUSIVE
    return report, EXIT_OK if ok else EXIT_INCONCLUSIVE


def _default_seed_depth(args, diagram) -> int:
    if args.seed_depth is not None:
        return args.seed_depth
    return max(1, diagram.level_count - args.probe_delta)


def _solve(args, system):
    seed_depth = _default_seed_depth(args, system.diagram)
    probe = min(seed_depth + args.probe_delta, system.level_count)
    return measures.solve_state(
        system, seed_depth, probe, tol=args.tol, compare_levels=args.compare_levels
    )


def _cmd_state(args) -> tuple[dict, int]:
    diagram, weights = load_diagram(args.diagram)
    system = cocycle.WeightedSystem(diagram, weights)
    state = _solve(args, system)
    report = _report("state", [args.diagram])
    report["values"]["seed_depth"] = state.truncation_level
    report["values"]["seed"] = state.seed_label
    report["values"]["convergence_estimate"] = state.convergence_estimate
    report["values"]["converged"] = state.converged
    report["values"]["equation_residual"] = measures.state_equation_residual(system, state)
    report["values"]["log_rho"] = [
        [float(x) for x in lv.log_values()] for lv in state.rho
    ]
    measure = measures.edge_probabilities(system, state)
    report["values"]["initial"] = [float(x) for x in measure.initial]
    report["values"]["edge_probabilities"] = [
        [float(x) for x in level] for level in measure.edge_probs
    ]
    report["traces"]["primary"] = [
        [n, float(np.log(lv.mantissa.sum()) + lv.log_scale)]
        for n, lv in enumerate(state.rho)
    ]
    return report, EXIT_OK if state.converged else EXIT_INCONCLUSIVE


def _cmd_measure(args) -> tuple[dict, int]:
    diagram, weights = load_diagram(args.diagram)
    system = cocycle.WeightedSystem(diagram, weights)
    state = _solve(args, system)
    measure = measures.edge_probabilities(system, state)
    report = _report("measure", [args.diagram])
    report["values"]["converged"] = state.converged
    report["values"]["convergence_estimate"] = state.convergence_estimate
    exit_code = EXIT_OK if state.converged else EXIT_INCONCLUSIVE
    if args.path is not None:
        path = _parse_path(args.path)
        mass = measures.cylinder_mass(measure, path)
        report["values"]["path"] = list(path.edge_indices)
        report["values"]["mass"] = mass
        report["traces"]["primary"] = [[0, mass]]
        if args.relative_to is not None:
            other = _parse_path(args.relative_to)
            ratio = mass / measures.cylinder_mass(measure, other)
            cocycle_ratio = cocycle.cocycle_value(system, path, other)
            report["values"]["sibling_path"] = list(other.edge_indices)
            report["values"]["mass_ratio"] = ratio
            report["values"]["cocycle_value"] = cocycle_ratio
    else:
        level = args.level if args.level is not None else state.truncation_level
        vertex_masses = measures.level_masses(measure, level)
        report["values"]["level"] = level
        report["values"]["level_masses"] = [float(x) for x in vertex_masses]
        report["traces"]["primary"] = [[i, float(x)] for i, x in enumerate(vertex_masses)]
    if args.gcheck is not None:
        f = load_word_function(args.gcheck)
        report["inputs"][args.gcheck] = _digest(args.gcheck)
        n = args.gcheck_level if args.gcheck_level is not None else state.truncation_level
        report["values"]["g_measure_residual"] = measures.g_measure_residual(
            measure, system, f, n
        )
    return report, exit_code


def _cmd_pf(args) -> tuple[dict, int]:
    matrix = load_matrix(args.matrix)
    result = spectral.perron(matrix, tol=args.tol, max_iter=args.max_iter)
    report = _report("pf", [args.matrix])
    report["values"]["eigenvalue"] = result.eigenvalue
    report["values"]["left_vector"] = [float(x) for x in result.left_vector]
    report["values"]["residual"] = result.residual
    report["values"]["iterations"] = result.iterations
    report["values"]["primitivity_exponent"] = result.primitivity_exponent
    report["values"]["contraction_bound"] = result.contraction_bound
    report["values"]["converged"] = result.converged
    report["traces"]["primary"] = [[i, float(x)] for i, x in enumerate(result.left_vector)]
    return report, EXIT_OK if result.converged else EXIT_INCONCLUSIVE


def _cmd_ruelle(args) -> tuple[dict, int]:
    graph = load_graph(args.graph)
    potential = load_word_function(args.potential)
    system = sft.SftSystem(graph, potential.depth, dict(potential.values))
    result = sft.eigen_measure(system, tol=args.tol, max_iter=args.max_iter)
    certificate = sft.walters_check_locally_constant(system)
    report = _report("ruelle", [args.graph, args.potential])
    report["values"]["eigenvalue"] = result.eigenvalue
    report["values"]["words"] = [",".join(str(e) for e in w) for w in result.words]
    report["values"]["weights"] = [float(x) for x in result.weights]
    report["values"]["residual"] = result.residual
    report["values"]["iterations"] = result.iterations
    report["values"]["converged"] = result.converged
    report["values"]["walters"] = {
        "potential_depth": certificate.potential_depth,
        "window": certificate.window,
        "multiplicative_variation": certificate.multiplicative_variation,
        "graph_primitive": certificate.graph_primitive,
        "unique_ergodicity": certificate.unique_ergodicity,
    }
    report["traces"]["primary"] = [[i, float(x)] for i, x in enumerate(result.weights)]
    if args.word is not None:
        word = _word(args.word)
        mass = sft.extend_cylinder_measure(
            system, result.eigenvalue, result.as_mapping(), word
        )
        report["values"]["word"] = list(word)
        report["values"]["word_mass"] = mass
    if args.expect is not None:
        f = load_word_function(args.expect)
        report["inputs"][args.expect] = _digest(args.expect)
        values = sft.stationary_expectation(system, f, args.steps)
        report["values"]["expectation_steps"] = args.steps
        report["values"]["expectation"] = {
            ",".join(str(e) for e in w): v for w, v in sorted(values.items())
        }
    return report, EXIT_OK if result.converged else EXIT_INCONCLUSIVE


def _cmd_expect(args) -> tuple[dict, int]:
    diagram, weights = load_diagram(args.diagram)
    system = cocycle.WeightedSystem(diagram, weights)
    report = _report("expect", [args.diagram])
    wrote_primary = False
    if args.function is not None:
        f = load_word_function(args.function)
        report["inputs"][args.function] = _digest(args.function)
        level = args.level if args.level is not None else diagram.level_count
        values = cocycle.expectation(system, f, level)
        report["values"]["level"] = level
        report["values"]["expectation"] = [float(x) for x in values]
        report["values"]["vertices"] = [
            diagram.vertex_name(level, i) for i in range(diagram.num_vertices(level))
        ]
        report["traces"]["primary"] = [[i, float(x)] for i, x in enumerate(values)]
        wrote_primary = True
    if args.potential_of is not None:
        path = _parse_path(args.potential_of)
        value = cocycle.normalized_potential(system, path)
        report["values"]["path"] = list(path.edge_indices)
        report["values"]["normalized_potential"] = value
        if not wrote_primary:
            report["traces"]["primary"] = [[0, value]]
            wrote_primary = True
    if args.local_potentials is not None:
        n = args.local_potentials
        locals_ = [
            cocycle.local_potential(system, n, k)
            for k in range(len(diagram.level_edges(n)))
        ]
        report["values"]["local_potential_level"] = n
        report["values"]["local_potentials"] = locals_
        if not wrote_primary:
            report["traces"]["primary"] = [[k, v] for k, v in enumerate(locals_)]
            wrote_primary = True
    if not wrote_primary:
        raise BratteliError(
            "expect needs --function, --potential-of or --local-potentials"
        )
    return report, EXIT_OK


# -- dispatch ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bratteli",
        description="Unique ergodicity, Markov measures and transfer operators "
        "on Bratteli diagram path spaces.",
    )
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("validate", help="check diagram invariants")
    p.add_argument("diagram")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("telescope", help="contract a diagram along cut levels")
    p.add_argument("diagram")
    p.add_argument("--cuts", required=True, help="comma-separated cut levels starting at 0")
    p.set_defaults(handler=_cmd_telescope)

    p = sub.add_parser("check-unique", help="unique-ergodicity checks")
    p.add_argument("diagram")
    p.add_argument("--method", choices=("variation", "series"), default="variation")
    p.add_argument("--base", type=int, default=0)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--declare-divergent", action="store_true")
    p.add_argument(
        "--epsilon-oracle",
        action="store_true",
        help="compute contraction coefficients with the exhaustive subset scan",
    )
    p.add_argument("--function", default=None, help="cylinder function JSON for variation decay")
    p.set_defaults(handler=_cmd_check_unique)

    def add_state_flags(q):
        q.add_argument("--seed-depth", type=int, default=None)
        q.add_argument("--probe-delta", type=int, default=5)
        q.add_argument("--tol", type=float, default=1e-8)
        q.add_argument("--compare-levels", type=int, default=0)

    p = sub.add_parser("state", help="solve the state equations")
    p.add_argument("diagram")
    add_state_flags(p)
    p.set_defaults(handler=_cmd_state)

    p = sub.add_parser("measure", help="evaluate the Markov measure")
    p.add_argument("diagram")
    add_state_flags(p)
    p.add_argument("--path", default=None, help="comma-separated edge ordinals from level 0")
    p.add_argument("--relative-to", default=None, help="sibling path for mass ratio")
    p.add_argument("--level", type=int, default=None, help="report per-vertex masses at level")
    p.add_argument("--gcheck", default=None, help="cylinder function JSON for the fixed-point residual")
    p.add_argument("--gcheck-level", type=int, default=None)
    p.set_defaults(handler=_cmd_measure)

    p = sub.add_parser("pf", help="Perron-Frobenius eigen pair of a primitive matrix")
    p.add_argument("matrix")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=100_000)
    p.set_defaults(handler=_cmd_pf)

    p = sub.add_parser("ruelle", help="transfer-operator eigen measure of a subshift")
    p.add_argument("graph")
    p.add_argument("potential")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=100_000)
    p.add_argument("--word", default=None, help="extend the eigen measure to this word")
    p.add_argument("--expect", default=None, help="cylinder function JSON")
    p.add_argument("--steps", type=int, default=1, help="expectation steps for --expect")
    p.set_defaults(handler=_cmd_ruelle)

    p = sub.add_parser("expect", help="conditional expectations and potentials")
    p.add_argument("diagram")
    p.add_argument("--function", default=None, help="cylinder function JSON")
    p.add_argument("--level", type=int, default=None)
    p.add_argument("--potential-of", default=None, help="path for the normalized potential")
    p.add_argument("--local-potentials", type=int, default=None, help="edge level")
    p.set_defaults(handler=_cmd_expect)

    return parser


def _emit(report: dict, fmt: str) -> str:
    if fmt == "csv":
        rows = ["n,value"]
        for n, value in report["traces"]["primary"]:
            rows.append(f"{n},{format(float(value), '.17g')}")
        return "\n".join(rows) + "\n"
    return dump_deterministic(report) + "\n"


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        report, code = args.handler(args)
    except BratteliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    report["wall_time"] = time.perf_counter() - started
    sys.stdout.write(_emit(report, args.format))
    return code


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
