"""Batch front end: run the queries of a scenario file and print a JSON report.

A scenario fixes a carrier, a target and the reference labeling ``sigma0``
and lists queries.  Queries run in order; a failing query embeds an error
object in the report and the remaining queries still run.

Exit codes: 0 success, 1 schema or specification error, 2 unsupported rule
combination, 3 cap exceeded, 4 any other query error.  With several failing
queries the first one decides the code.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Optional

import jsonschema

from .carrier import (Address, Finite, address_to_json, enumerate_truncation,
                      validate_involution)
from .cells import (CellDescriptor, SurjectionSpec, bruhat_leq, cell_dimension,
                    cell_from_labels, cell_from_subset, label_fiber, omega_bruhat_leq,
                    sigma_eval, surjection_from_json, validate)
from .criteria import verdict
from .errors import (CapExceeded, IndFlagError, SchemaError, SizeMismatch,
                     UnsupportedFamily, UnsupportedRuleCombination)
from .permutations import inverse, length, length_truncated, perm_from_json
from .smoothness import (TwoOrderCarrier, gr2_smooth, is_maximal_family,
                         maximal_flag_smooth, truncation_scan)
from .truncation_oracle import (enumerate_group, labeling_dimension, mirror_indices,
                                move_closure, moves, torus_fixed_points)

SCHEMA_VERSION = 1
DEFAULT_MAX_RADIUS = 8
DOT_NODE_CAP = 10_000

EXIT_OK = 0
EXIT_SCHEMA = 1
EXIT_UNSUPPORTED = 2
EXIT_CAP = 3
EXIT_OTHER = 4


def load_schema() -> dict:
    text = resources.files("indflag").joinpath("schemas/scenario.v1.schema.json").read_text()
    return json.loads(text)


def _json_path(error: jsonschema.ValidationError) -> str:
    path = "$"
    for part in error.absolute_path:
        path += f"[{part}]" if isinstance(part, int) else f".{part}"
    return path


def check_schema(obj) -> None:
    """Raise :class:`SchemaError` naming the JSON path of the most relevant violation."""
    validator = jsonschema.Draft202012Validator(load_schema())
    error = jsonschema.exceptions.best_match(validator.iter_errors(obj))
    if error is not None:
        raise SchemaError(error.message, _json_path(error))


def exit_code_for(exc: Exception) -> int:
    if isinstance(exc, SchemaError):
        return EXIT_SCHEMA
    if isinstance(exc, UnsupportedRuleCombination):
        return EXIT_UNSUPPORTED
    if isinstance(exc, CapExceeded):
        return EXIT_CAP
    return EXIT_OTHER


def error_object(exc: Exception) -> dict:
    out = {"code": getattr(exc, "code", "error"), "message": str(exc),
           "exit_code": exit_code_for(exc)}
    if isinstance(exc, SchemaError):
        out["path"] = exc.path
    return out


# ---------------------------------------------------------------------------
# Scenario loading


def load_spec(scenario: dict) -> SurjectionSpec:
    """Parse and validate the carrier, target and ``sigma0`` of a scenario."""
    spec = surjection_from_json(scenario)
    for name, order, inv in (("carrier", spec.carrier, spec.involution),
                             ("target", spec.A, spec.target.involution)):
        if inv is not None:
            check = validate_involution(order, inv)
            if not check:
                raise SchemaError("; ".join(check.reasons), f"$.{name}.involution")
    check = validate(spec)
    if not check:
        raise SchemaError("; ".join(check.reasons), "$.sigma0")
    return spec


def parse_cell(spec: SurjectionSpec, obj: dict, path: str) -> CellDescriptor:
    if "w" in obj:
        inv = spec.involution if spec.is_omega else None
        w = perm_from_json(obj["w"], path + ".w", spec.carrier, inv)
        for e in w.support:
            spec.carrier.check(e)
        return CellDescriptor(spec, w)
    if "subset" in obj:
        return cell_from_subset(spec, [Address(*a) for a in obj["subset"]])
    labels = {spec.carrier.check(Address(*e)): spec.A.check(Address(*a))
              for e, a in obj["labels"]}
    return cell_from_labels(spec, labels)


# ---------------------------------------------------------------------------
# Queries


class Runner:
    def __init__(self, spec: SurjectionSpec, max_radius: int = DEFAULT_MAX_RADIUS,
                 dot_dir: Optional[Path] = None, name: str = "scenario"):
        self.spec = spec
        self.max_radius = max_radius
        self.dot_dir = dot_dir
        self.name = name

    @property
    def inv(self):
        return self.spec.involution if self.spec.is_omega else None

    def _radius(self, r: int) -> int:
        if r > self.max_radius:
            raise CapExceeded(f"radius {r} exceeds --max-radius {self.max_radius}")
        return r

    def run(self, index: int, query: dict) -> dict:
        path = f"$.queries[{index}]"
        handler = getattr(self, "q_" + query["kind"])
        return handler(query, path)

    def q_dim(self, q, path):
        cell = parse_cell(self.spec, q["cell"], path + ".cell")
        return {"result": cell_dimension(cell).to_json()}

    def q_leq(self, q, path):
        s = parse_cell(self.spec, q["s"], path + ".s")
        t = parse_cell(self.spec, q["t"], path + ".t")
        leq = omega_bruhat_leq if self.spec.is_omega else bruhat_leq
        return {"result": leq(s, t)}

    def q_length(self, q, path):
        w = perm_from_json(q["w"], path + ".w", self.spec.carrier, self.inv)
        out = {"result": length(w, self.spec.carrier).to_json()}
        if "radius" in q:
            r = self._radius(q["radius"])
            out["truncated"] = length_truncated(w, self.spec.carrier, r, self.inv)
        return out

    def q_smooth(self, q, path):
        cell = parse_cell(self.spec, q["cell"], path + ".cell")
        method = q.get("method", "scan")
        if method == "scan":
            r = self._radius(q.get("max_radius", self.max_radius))
            found = truncation_scan(cell, r)
        elif method == "pattern":
            if not is_maximal_family(self.spec):
                raise UnsupportedFamily("the pattern test needs an injective sigma0")
            found = maximal_flag_smooth(TwoOrderCarrier(self.spec.carrier, self.spec),
                                        inverse(cell.w))
        else:
            if self.spec.A.size() != Finite(2):
                raise SizeMismatch("the Gr(2) test needs a two-element target")
            fiber = label_fiber(cell, self.spec.A.elements()[0])
            if fiber is None:
                raise UnsupportedFamily("the fiber of the smaller label is infinite")
            found = gr2_smooth(fiber, self.spec.carrier)
        return {"result": found.to_json()}

    def q_criteria(self, q, path):
        return {"result": verdict(self.spec)}

    def _window_labels(self, cell: Optional[CellDescriptor], radius: int):
        E = self.spec.carrier
        points = set(enumerate_truncation(E, self.inv, radius))
        if cell is not None:
            points |= set(cell.w.support)
        points = E.sorted(points)
        if cell is None:
            labels = [self.spec.label(e) for e in points]
        else:
            labels = [sigma_eval(cell, e) for e in points]
        mirror = mirror_indices(E, self.inv, points) if self.inv is not None else None
        return points, labels, mirror

    def q_truncate(self, q, path):
        r = self._radius(q["radius"])
        points, labels, mirror = self._window_labels(None, r)
        A = self.spec.A
        ranks = tuple(A.position(a) for a in labels)
        if mirror is None:
            group = enumerate_group(points, "A")
        else:
            group = enumerate_group(points, "BC", mirror)
        cells = torus_fixed_points(ranks, group)
        dims = [labeling_dimension(c, mirror) for c in cells]
        return {"result": {
            "elements": [address_to_json(e) for e in points],
            "labels": [address_to_json(a) for a in labels],
            "cells": len(cells),
            "dimension": max(dims),
        }}

    def q_graph(self, q, path):
        cell = parse_cell(self.spec, q["cell"], path + ".cell")
        r = self._radius(q.get("radius", 1))
        points, labels, mirror = self._window_labels(cell, r)
        ranks = tuple(self.spec.A.position(a) for a in labels)
        nodes = move_closure(ranks, mirror, upward=False, limit=DOT_NODE_CAP)
        truncated = len(nodes) > DOT_NODE_CAP
        dot = interval_dot(nodes, mirror, points, truncated)
        out = {"nodes": len(nodes), "truncated": truncated,
               "edges": dot.count(" -> ")}
        if self.dot_dir is not None:
            name = q.get("file", f"{self.name}_{q.get('id', path_index(path))}.dot")
            self.dot_dir.mkdir(parents=True, exist_ok=True)
            (self.dot_dir / name).write_text(dot)
            out["file"] = name
        return {"result": out}


def path_index(path: str) -> str:
    return path[path.index("[") + 1:path.index("]")]


# ---------------------------------------------------------------------------
# DOT export


def _node_text(labeling: tuple) -> str:
    distinct = sorted(set(labeling))
    return " ".join(str(distinct.index(a)) for a in labeling)


def interval_dot(nodes, mirror, points, truncated: bool) -> str:
    """Hasse diagram of a lower interval of labelings, largest at the top.

    Edges are single moves that lower the dimension by exactly one.
    """
    dims = {x: labeling_dimension(x, mirror) for x in nodes}
    order = sorted(nodes, key=lambda x: (-dims[x], x))
    ids = {x: f"n{i}" for i, x in enumerate(order)}
    lines = ["digraph interval {", "  rankdir=TB;", "  node [shape=box, fontname=monospace];"]
    window = " ".join(f"({a[0]},{a[1]})" for a in points)
    lines.append(f'  label="window {window}";')
    if truncated:
        lines.append(f'  note [shape=note, label="truncated at {DOT_NODE_CAP} nodes"];')
    for x in order:
        lines.append(f'  {ids[x]} [label="{_node_text(x)}\\ndim {dims[x]}"];')
    for x in order:
        below = sorted({y for y in moves(x, mirror, upward=False)
                        if y in ids and dims[y] == dims[x] - 1}, key=ids.get)
        for y in below:
            lines.append(f"  {ids[x]} -> {ids[y]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Entry points


def run_scenario(scenario, max_radius: int = DEFAULT_MAX_RADIUS,
                 dot_dir: Optional[Path] = None) -> tuple:
    """``(report, exit_code)`` for a parsed scenario object."""
    report = {"schema_version": SCHEMA_VERSION}
    try:
        check_schema(scenario)
        report["scenario"] = scenario.get("name", "scenario")
        spec = load_spec(scenario)
    except IndFlagError as exc:
        report["error"] = error_object(exc)
        return report, EXIT_SCHEMA
    runner = Runner(spec, max_radius, dot_dir, report["scenario"])
    results, code = [], EXIT_OK
    for i, q in enumerate(scenario["queries"]):
        entry = {"index": i, "kind": q["kind"]}
        if "id" in q:
            entry["id"] = q["id"]
        try:
            entry.update(runner.run(i, q))
        except IndFlagError as exc:
            entry["error"] = error_object(exc)
            if code == EXIT_OK:
                code = exit_code_for(exc)
        results.append(entry)
    report["results"] = results
    report["exit_code"] = code
    return report, code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="indflag", description=__doc__.splitlines()[0])
    parser.add_argument("--scenario", required=True, type=Path, help="scenario JSON file")
    parser.add_argument("--out", type=Path, help="write the report here instead of stdout")
    parser.add_argument("--dot-dir", type=Path, help="directory for graph query DOT files")
    parser.add_argument("--max-radius", type=int, default=DEFAULT_MAX_RADIUS,
                        help="largest truncation radius a query may request")
    parser.add_argument("--timestamps", action="store_true",
                        help="add a generation timestamp to the report")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = json.loads(args.scenario.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        report = {"schema_version": SCHEMA_VERSION,
                  "error": error_object(SchemaError(str(exc), "$"))}
        code = EXIT_SCHEMA
    else:
        report, code = run_scenario(scenario, args.max_radius, args.dot_dir)
    if "error" in report:
        err = report["error"]
        print(f"indflag: {err['message']}", file=sys.stderr)
    if args.timestamps:
        report["generated_at"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
