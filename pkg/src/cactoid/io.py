"""JSON forms for matrices, graph specs, bags and classifier inputs."""

from __future__ import annotations

import json
from pathlib import Path

from .formulas import Bag
from .graph import (BlockWeights, CactoidGraph, CycleWeights, StructuralError, assemble_graph,
                    canonicalize_block)
from .linalg import Matrix, format_rational, to_rational
from .undirected import UndirectedShape


class SpecError(ValueError):
    """Input JSON is malformed or of the wrong kind."""


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def load_spec(arg: str) -> dict:
    """Inline JSON when ``arg`` starts with ``{``, otherwise a path to a JSON file."""
    if arg.lstrip().startswith("{"):
        text = arg
    else:
        try:
            text = Path(arg).read_text(encoding="utf-8")
        except OSError as exc:
            raise SpecError(f"cannot read spec file {arg!r}: {exc.strerror or exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise SpecError("spec must be a JSON object")
    return obj


def _rational(value, where: str):
    try:
        return to_rational(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"{where}: {exc}") from exc


def matrix_to_json(m: Matrix) -> dict:
    return {
        "rows": m.n_rows,
        "cols": m.n_cols,
        "labels": {"rows": list(m.row_labels), "cols": list(m.col_labels)},
        "entries": [[format_rational(x) for x in row] for row in m.rows],
    }


def matrix_from_json(obj: dict) -> Matrix:
    try:
        n_rows, n_cols, entries = obj["rows"], obj["cols"], obj["entries"]
    except (KeyError, TypeError) as exc:
        raise SpecError(f"matrix JSON missing field {exc}") from exc
    labels = obj.get("labels") or {}
    if len(entries) != n_rows or any(len(row) != n_cols for row in entries):
        raise SpecError(f"entries do not form a {n_rows}x{n_cols} array")
    rows = tuple(tuple(_rational(x, f"entry ({i},{j})") for j, x in enumerate(row))
                 for i, row in enumerate(entries))
    return Matrix(rows, tuple(labels.get("rows", ())), tuple(labels.get("cols", ())), n_cols=n_cols)


def parse_graph_spec(obj: dict) -> CactoidGraph:
    if obj.get("kind") != "cactoid_digraph":
        raise SpecError(f"expected kind 'cactoid_digraph', got {obj.get('kind')!r}")
    raw_blocks = obj.get("blocks")
    if not isinstance(raw_blocks, list) or not raw_blocks:
        raise SpecError("'blocks' must be a non-empty list")
    blocks, ids, gluing = [], [], {}
    for t, spec in enumerate(raw_blocks):
        bid = str(spec.get("id", f"B{t + 1}"))
        where = f"block {bid}"
        try:
            n = int(spec["n"])
            path = [_rational(x, f"{where} path weight") for x in spec["path_weights"]]
            cycles = [CycleWeights(tuple(_rational(x, f"{where} branch weight") for x in c["branch_weights"]),
                                   _rational(c["closing_weight"], f"{where} closing weight"))
                      for c in spec["cycles"]]
        except (KeyError, TypeError) as exc:
            raise SpecError(f"{where}: missing or malformed field {exc}") from exc
        if len(path) != n:
            raise SpecError(f"{where}: n = {n} but {len(path)} path weights")
        weights = BlockWeights(tuple(path), tuple(cycles))
        try:
            blocks.append(canonicalize_block(weights.shape(), weights))
        except StructuralError as exc:
            raise SpecError(f"{where}: {exc}") from exc
        ids.append(bid)
        for local, label in (spec.get("labels") or {}).items():
            gluing[(t, str(local))] = str(label)
    return assemble_graph(blocks, gluing, ids)


def graph_to_spec(graph: CactoidGraph) -> dict:
    """Inverse of :func:`parse_graph_spec`; cycles come back in the user's order."""
    glue = graph.gluing_map()
    blocks = []
    for t, (bid, block) in enumerate(zip(graph.block_ids, graph.blocks)):
        w = block.user_weights()
        entry = {
            "id": bid,
            "n": block.n,
            "path_weights": [format_rational(x) for x in w.path],
            "cycles": [{"branch_weights": [format_rational(x) for x in c.branch],
                        "closing_weight": format_rational(c.closing)} for c in w.cycles],
        }
        labels = {local: label for (s, local), label in sorted(glue.items()) if s == t}
        if labels:
            entry["labels"] = labels
        blocks.append(entry)
    return {"kind": "cactoid_digraph", "blocks": blocks}


def parse_undirected_spec(obj: dict) -> UndirectedShape:
    if obj.get("kind") != "undirected_family":
        raise SpecError(f"expected kind 'undirected_family', got {obj.get('kind')!r}")
    try:
        return UndirectedShape(int(obj["n"]), tuple(int(x) for x in obj["m"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"undirected spec: {exc}") from exc


def bag_to_json(bag: Bag) -> dict:
    return {
        "lambda": format_rational(bag.lambda_),
        "alpha": [format_rational(x) for x in bag.alpha.column_values()],
        "beta": [format_rational(x) for x in bag.beta.column_values()],
        "laplacian_like": matrix_to_json(bag.laplacian_like),
    }
