"""JSON input formats and deterministic serialization.

Diagram files:
    {"levels": N,
     "vertices": [[name, ...], ...],          # N + 1 arrays
     "edges": [[{"source": i, "range": j, "weight": w}, ...], ...]}  # N arrays
with ``weight`` optional (default 1.0).

Matrix files: array of arrays of numbers.
Graph files: {"vertices": [...], "edges": [{"source": i, "range": j}, ...]}.
Potential / cylinder-function files:
    {"depth": k, "values": {"e1,e2,...": number}}
with keys given as comma-separated edge ordinals ("" for depth 0).

All numeric output is printed with 17 significant digits so reports are
byte-reproducible and round-trip exactly.
"""

from __future__ import annotations

import json
from typing import Any

from .cocycle import CylinderFunction
from .diagram import BratteliDiagram
from .errors import InvalidArgumentError
from .sft import SftGraph


class InputFormatError(InvalidArgumentError):
    """Malformed input file; carries the offending path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputFormatError(path, "file not found") from None
    except json.JSONDecodeError as exc:
        raise InputFormatError(path, f"invalid JSON at line {exc.lineno} column {exc.colno}") from None


def _require(condition: bool, path: str, message: str) -> None:
    if not condition:
        raise InputFormatError(path, message)


def parse_diagram(data: Any, path: str = "<data>") -> tuple[BratteliDiagram, list[list[float]]]:
    """Diagram plus per-level edge weights (default 1.0)."""
    _require(isinstance(data, dict), path, "diagram file must contain an object")
    levels = data.get("levels")
    vertices = data.get("vertices")
    edges = data.get("edges")
    _require(isinstance(levels, int) and levels >= 1, path, '"levels" must be a positive integer')
    _require(
        isinstance(vertices, list) and len(vertices) == levels + 1,
        path,
        f'"vertices" must list {levels + 1} levels',
    )
    _require(
        isinstance(edges, list) and len(edges) == levels,
        path,
        f'"edges" must list {levels} levels',
    )
    names = []
    for lvl, entry in enumerate(vertices):
        _require(
            isinstance(entry, list) and entry and all(isinstance(x, str) for x in entry),
            path,
            f"vertices[{lvl}] must be a nonempty array of strings",
        )
        names.append(tuple(entry))
    edge_levels: list[tuple[tuple[int, int], ...]] = []
    weights: list[list[float]] = []
    for lvl, entry in enumerate(edges):
        _require(isinstance(entry, list) and entry, path, f"edges[{lvl}] must be a nonempty array")
        level_pairs = []
        level_weights = []
        for pos, e in enumerate(entry):
            _require(
                isinstance(e, dict) and isinstance(e.get("source"), int) and isinstance(e.get("range"), int),
                path,
                f'edges[{lvl}][{pos}] needs integer "source" and "range"',
            )
            w = e.get("weight", 1.0)
            _require(
                isinstance(w, (int, float)) and not isinstance(w, bool) and w > 0,
                path,
                f"edges[{lvl}][{pos}] weight must be a positive number",
            )
            level_pairs.append((e["source"], e["range"]))
            level_weights.append(float(w))
        edge_levels.append(tuple(level_pairs))
        weights.append(level_weights)
    try:
        diagram = BratteliDiagram(
            tuple(len(lvl) for lvl in names), tuple(edge_levels), tuple(names)
        )
    except InvalidArgumentError as exc:
        raise InputFormatError(path, str(exc)) from None
    return diagram, weights


def load_diagram(path: str) -> tuple[BratteliDiagram, list[list[float]]]:
    return parse_diagram(load_json(path), path)


def diagram_to_data(diagram: BratteliDiagram, weights=None) -> dict:
    levels = diagram.level_count
    data: dict[str, Any] = {
        "levels": levels,
        "vertices": [
            [diagram.vertex_name(n, i) for i in range(diagram.num_vertices(n))]
            for n in range(levels + 1)
        ],
        "edges": [],
    }
    for n in range(1, levels + 1):
        level = []
        for idx, (s, r) in enumerate(diagram.level_edges(n)):
            entry: dict[str, Any] = {"source": s, "range": r}
            if weights is not None:
                entry["weight"] = float(weights[n - 1][idx])
            level.append(entry)
        data["edges"].append(level)
    return data


def parse_matrix(data: Any, path: str = "<data>") -> list[list[float]]:
    _require(
        isinstance(data, list) and data and all(isinstance(row, list) and row for row in data),
        path,
        "matrix file must contain a nonempty array of nonempty arrays",
    )
    width = len(data[0])
    out = []
    for i, row in enumerate(data):
        _require(len(row) == width, path, f"row {i} has {len(row)} entries, expected {width}")
        for j, x in enumerate(row):
            _require(
                isinstance(x, (int, float)) and not isinstance(x, bool),
                path,
                f"entry [{i}][{j}] must be a number",
            )
        out.append([float(x) for x in row])
    return out


def load_matrix(path: str) -> list[list[float]]:
    return parse_matrix(load_json(path), path)


def parse_graph(data: Any, path: str = "<data>") -> SftGraph:
    _require(isinstance(data, dict), path, "graph file must contain an object")
    vertices = data.get("vertices")
    edges = data.get("edges")
    _require(isinstance(vertices, list) and vertices, path, '"vertices" must be a nonempty array')
    _require(isinstance(edges, list) and edges, path, '"edges" must be a nonempty array')
    pairs = []
    for pos, e in enumerate(edges):
        _require(
            isinstance(e, dict) and isinstance(e.get("source"), int) and isinstance(e.get("range"), int),
            path,
            f'edges[{pos}] needs integer "source" and "range"',
        )
        pairs.append((e["source"], e["range"]))
    try:
        return SftGraph(len(vertices), tuple(pairs))
    except InvalidArgumentError as exc:
        raise InputFormatError(path, str(exc)) from None


def load_graph(path: str) -> SftGraph:
    return parse_graph(load_json(path), path)


def _parse_word_key(key: str, path: str) -> tuple[int, ...]:
    if key == "":
        return ()
    try:
        return tuple(int(part) for part in key.split(","))
    except ValueError:
        raise InputFormatError(path, f"bad word key {key!r}; expected comma-separated integers") from None


def parse_word_function(data: Any, path: str = "<data>") -> CylinderFunction:
    """Shared schema for SFT potentials and cylinder functions."""
    _require(isinstance(data, dict), path, "function file must contain an object")
    depth = data.get("depth")
    values = data.get("values")
    _require(isinstance(depth, int) and depth >= 0, path, '"depth" must be a nonnegative integer')
    _require(isinstance(values, dict) and values, path, '"values" must be a nonempty object')
    parsed = {}
    for key, val in values.items():
        _require(
            isinstance(val, (int, float)) and not isinstance(val, bool),
            path,
            f"value for key {key!r} must be a number",
        )
        word = _parse_word_key(str(key), path)
        _require(len(word) == depth, path, f"key {key!r} has length {len(word)}, expected {depth}")
        parsed[word] = float(val)
    try:
        return CylinderFunction(depth, parsed)
    except InvalidArgumentError as exc:
        raise InputFormatError(path, str(exc)) from None


def load_word_function(path: str) -> CylinderFunction:
    return parse_word_function(load_json(path), path)


def format_number(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def dump_deterministic(value: Any, indent: int = 0) -> str:
    """JSON text with floats at 17 significant digits and stable layout."""
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        rows = [
            f'{pad}  {json.dumps(str(k))}: {dump_deterministic(v, indent + 1)}'
            for k, v in value.items()
        ]
        return "{\n" + ",\n".join(rows) + f"\n{pad}}}"
    if isinstance(value, (list, tuple)):
        seq = list(value)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, bool)) for v in seq):
            return "[" + ", ".join(format_number(v) for v in seq) + "]"
        rows = [f"{pad}  {dump_deterministic(v, indent + 1)}" for v in seq]
        return "[\n" + ",\n".join(rows) + f"\n{pad}]"
    if value is None:
        return "null"
    if isinstance(value, (bool, int, float)):
        return format_number(value)
    return json.dumps(str(value))
