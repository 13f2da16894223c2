"""Command-line interface.

Every command builds a JSON-serializable report dict; ``--json`` prints it
as is and the default text output is rendered from the same dict.

Exit codes: 0 success, 2 unreadable or malformed input, 3 a resource cap
was hit, 4 two methods disagree (or a fuzz case failed).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Sequence

from .circuits import (
    DEFAULT_CIRCUIT_CAP,
    DEFAULT_NODE_CAP,
    Circuit,
    class_product_table,
    enumerate_circuits,
    induced_permutation,
    iter_families,
    ps_via_circuits,
    signed_family_count,
)
from .errors import ParseError, ResourceLimitError
from .exact_linear import (
    DEFAULT_FACTORIAL_LIMIT,
    identity_minus,
    leibniz_determinant,
    ps_via_determinant,
)
from .flow_moves import reduce_to_closure
from .multigraph import Multigraph, parse_graph, random_graph, serialize_graph

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_DISAGREE = 4

CAPS_ENV = "PS_DEFAULT_CAPS"
CLASS_TABLE_MAX_VERTICES = 5


@dataclass(frozen=True)
class Caps:
    circuits: int = DEFAULT_CIRCUIT_CAP
    nodes: int = DEFAULT_NODE_CAP

    @classmethod
    def from_env(cls, environ=os.environ) -> Caps:
        """Read ``PS_DEFAULT_CAPS``, e.g. ``circuits=1000,nodes=50000``."""
        raw = environ.get(CAPS_ENV, "").strip()
        if not raw:
            return cls()
        values = {}
        for item in raw.split(","):
            key, _, val = item.partition("=")
            key = key.strip()
            if key not in ("circuits", "nodes"):
                raise ValueError(f"{CAPS_ENV}: unknown cap {key!r}")
            values[key] = int(val)
        return cls(**values)

    def to_json(self) -> dict:
        return {"circuits": self.circuits, "nodes": self.nodes}


def _graph_summary(g: Multigraph) -> dict:
    return {"vertices": g.vertex_count, "edges": g.edge_count}


def _circuit_json(c: Circuit) -> dict:
    return {
        "cycle": str(c),
        "edges": list(c.edge_order),
        "vertices": list(c.vertex_order),
    }


# -- compute -----------------------------------------------------------------

def compute_report(
    g: Multigraph,
    method: str = "all",
    caps: Caps = Caps(),
    leibniz_limit: int = DEFAULT_FACTORIAL_LIMIT,
    table: bool = False,
) -> tuple[dict, int]:
    report: dict = {
        "command": "compute",
        "method": method,
        "graph": _graph_summary(g),
        "caps": caps.to_json(),
        "adjacency": g.adjacency_matrix().to_lines(),
    }
    values = []
    cap_hit = False
    if method in ("det", "all"):
        report["ps_determinant"] = ps_via_determinant(g)
        values.append(report["ps_determinant"])
    if method in ("circuits", "all"):
        try:
            circuits = enumerate_circuits(g, caps.circuits)
            counts = signed_family_count(g, circuits, caps.nodes)
        except ResourceLimitError as exc:
            cap_hit = True
            report["ps_circuits"] = "skipped(cap)"
            report["cap_error"] = str(exc)
        else:
            report["ps_circuits"] = counts.value
            report["circuit_count"] = len(circuits)
            report["even"] = counts.even
            report["odd"] = counts.odd
            values.append(counts.value)
    if method in ("leibniz", "all"):
        if g.vertex_count > leibniz_limit:
            report["ps_leibniz"] = "skipped(limit)"
            # an explicit request that cannot be honoured is a cap failure
            cap_hit = cap_hit or method == "leibniz"
        else:
            report["ps_leibniz"] = leibniz_determinant(
                identity_minus(g.adjacency_matrix()), leibniz_limit
            )
            values.append(report["ps_leibniz"])
    if table:
        try:
            rows = class_product_table(g, leibniz_limit, caps.circuits, caps.nodes)
        except ResourceLimitError as exc:
            cap_hit = True
            report["table"] = "skipped(cap)"
            report.setdefault("cap_error", str(exc))
        else:
            report["table"] = [
                {
                    "permutation": list(r.permutation.images),
                    "class_value": r.class_value,
                    "elementary_product": r.elementary_product,
                    "agrees": r.agrees,
                }
                for r in rows
            ]
            if not all(r.agrees for r in rows):
                values.append(None)
    agreement = len(set(values)) <= 1
    report["agreement"] = agreement
    if not agreement:
        code = EXIT_DISAGREE
    elif cap_hit:
        code = EXIT_CAP
    else:
        code = EXIT_OK
    return report, code


def render_compute(report: dict) -> str:
    g = report["graph"]
    lines = [f"graph: {g['vertices']} vertices, {g['edges']} edges"]
    for key, label in (
        ("ps_determinant", "PS via determinant"),
        ("ps_circuits", "PS via circuits"),
        ("ps_leibniz", "PS via Leibniz"),
    ):
        if key in report:
            lines.append(f"{label}: {report[key]}")
    if "even" in report:
        lines.append(
            f"circuits: {report['circuit_count']}; "
            f"families: {report['even']} even, {report['odd']} odd"
        )
    if "cap_error" in report:
        lines.append(f"cap: {report['cap_error']}")
    if isinstance(report.get("table"), list):
        lines.append("permutation  class  product")
        for row in report["table"]:
            mark = "" if row["agrees"] else "  MISMATCH"
            lines.append(
                f"{row['permutation']}  {row['class_value']}  {row['elementary_product']}{mark}"
            )
    lines.append(f"agreement: {'yes' if report['agreement'] else 'NO'}")
    return "\n".join(lines)


# -- circuits ----------------------------------------------------------------

def circuits_report(g: Multigraph, families: bool = False, caps: Caps = Caps()) -> dict:
    circuits = enumerate_circuits(g, caps.circuits)
    report: dict = {
        "command": "circuits",
        "graph": _graph_summary(g),
        "circuit_count": len(circuits),
        "circuits": [_circuit_json(c) for c in circuits],
    }
    if families:
        classes: dict = {}
        even = odd = 0
        for fam in iter_families(circuits, caps.nodes):
            members = [circuits[i] for i in fam]
            rho = induced_permutation(g, members)
            parity = "odd" if len(fam) % 2 else "even"
            if parity == "odd":
                odd += 1
            else:
                even += 1
            cls = classes.setdefault(rho, {"even": 0, "odd": 0, "families": []})
            cls[parity] += 1
            cls["families"].append(
                {"circuits": [str(c) for c in members], "size": len(fam), "parity": parity}
            )
        report["family_count"] = even + odd
        report["even"] = even
        report["odd"] = odd
        report["ps_circuits"] = even - odd
        report["classes"] = []
        for rho in sorted(classes):
            cls = classes[rho]
            cls["families"].sort(key=lambda f: (f["size"], f["circuits"]))
            report["classes"].append(
                {
                    "permutation": list(rho.images),
                    "even": cls["even"],
                    "odd": cls["odd"],
                    "value": cls["even"] - cls["odd"],
                    "families": cls["families"],
                }
            )
    return report


def render_circuits(report: dict) -> str:
    g = report["graph"]
    lines = [
        f"graph: {g['vertices']} vertices, {g['edges']} edges",
        f"circuits: {report['circuit_count']}",
    ]
    lines.extend(f"  {c['cycle']}" for c in report["circuits"])
    if "classes" in report:
        lines.append(
            f"families: {report['family_count']} "
            f"({report['even']} even, {report['odd']} odd; PS = {report['ps_circuits']})"
        )
        for cls in report["classes"]:
            lines.append(
                f"  permutation {cls['permutation']}: "
                f"{cls['even']} even, {cls['odd']} odd, value {cls['value']}"
            )
            for fam in cls["families"]:
                body = ", ".join(fam["circuits"]) if fam["circuits"] else "(empty)"
                lines.append(f"    [{fam['parity']}] {{{body}}}")
    return "\n".join(lines)


# -- fuzz --------------------------------------------------------------------

def check_case(
    g: Multigraph,
    caps: Caps = Caps(),
    leibniz_limit: int = DEFAULT_FACTORIAL_LIMIT,
) -> list[str]:
    """Cross-check every method on ``g``; return a description of each failure."""
    problems = []
    det = ps_via_determinant(g)
    circ = ps_via_circuits(g, caps.circuits, caps.nodes)
    if det != circ:
        problems.append(f"determinant {det} != circuits {circ}")
    if g.vertex_count <= leibniz_limit:
        leib = leibniz_determinant(identity_minus(g.adjacency_matrix()), leibniz_limit)
        if leib != det:
            problems.append(f"determinant {det} != leibniz {leib}")
    if g.vertex_count <= CLASS_TABLE_MAX_VERTICES:
        bad = [
            r for r in class_product_table(g, leibniz_limit, caps.circuits, caps.nodes)
            if not r.agrees
        ]
        for r in bad:
            problems.append(
                f"permutation {r.permutation}: class value {r.class_value} "
                f"!= elementary product {r.elementary_product}"
            )
    trace = reduce_to_closure(g)
    after_det = ps_via_determinant(trace.final)
    after_circ = ps_via_circuits(trace.final, caps.circuits, caps.nodes)
    if after_det != det or after_circ != circ:
        problems.append(
            f"reduction changed PS: det {det}->{after_det}, circuits {circ}->{after_circ}"
        )
    before = {frozenset(trace.relabeling.edges.get(k) for k in c.edge_ids)
              for c in enumerate_circuits(g, caps.circuits)}
    after = {c.edge_ids for c in enumerate_circuits(trace.final, caps.circuits)}
    if before != after:
        problems.append("reduction changed the circuit set")
    return problems


def case_seed(seed: int, case: int) -> int:
    return (seed + case) % 2**64


def fuzz_report(
    max_vertices: int,
    max_edges: int,
    cases: int,
    seed: int,
    caps: Caps = Caps(),
    leibniz_limit: int = DEFAULT_FACTORIAL_LIMIT,
) -> tuple[dict, int]:
    failures = []
    cap_hits = []
    for i in range(cases):
        s = case_seed(seed, i)
        g = random_graph(max_vertices, max_edges, s)
        try:
            problems = check_case(g, caps, leibniz_limit)
        except ResourceLimitError as exc:
            cap_hits.append({"case": i, "seed": s, "error": str(exc)})
            continue
        if problems:
            failures.append(
                {"case": i, "seed": s, "problems": problems, "graph": serialize_graph(g)}
            )
    report = {
        "command": "fuzz",
        "parameters": {
            "max_vertices": max_vertices,
            "max_edges": max_edges,
            "cases": cases,
            "seed": seed,
        },
        "passed": cases - len(failures) - len(cap_hits),
        "failed": len(failures),
        "capped": len(cap_hits),
        "failures": failures,
        "cap_hits": cap_hits,
    }
    if failures:
        code = EXIT_DISAGREE
    elif cap_hits:
        code = EXIT_CAP
    else:
        code = EXIT_OK
    return report, code


def render_fuzz(report: dict) -> str:
    p = report["parameters"]
    lines = [
        f"fuzz: max_vertices={p['max_vertices']} max_edges={p['max_edges']} "
        f"cases={p['cases']} seed={p['seed']}",
        f"passed {report['passed']}, failed {report['failed']}, capped {report['capped']}",
    ]
    for f in report["failures"]:
        lines.append(f"FAIL case {f['case']} (seed {f['seed']}):")
        lines.extend(f"  {msg}" for msg in f["problems"])
    for c in report["cap_hits"]:
        lines.append(f"CAP case {c['case']} (seed {c['seed']}): {c['error']}")
    return "\n".join(lines)


# -- reduce ------------------------------------------------------------------

def reduce_report(g: Multigraph) -> tuple[dict, int]:
    trace = reduce_to_closure(g)
    before = ps_via_determinant(g)
    after = ps_via_determinant(trace.final)
    report = {
        "command": "reduce",
        "graph": _graph_summary(g),
        "trace": [s.to_json() for s in trace.steps],
        "final": serialize_graph(trace.final),
        "ps_before": before,
        "ps_after": after,
        "preserved": before == after,
    }
    return report, EXIT_OK if before == after else EXIT_DISAGREE


def render_reduce(report: dict) -> str:
    lines = []
    if report["trace"]:
        lines.append("eliminated:")
        lines.extend(f"  vertex {s['vertex']} ({s['kind']})" for s in report["trace"])
    else:
        lines.append("eliminated: nothing")
    lines.append("final graph:")
    lines.extend("  " + ln for ln in report["final"].splitlines())
    lines.append(f"PS before: {report['ps_before']}  after: {report['ps_after']}")
    return "\n".join(lines)


# -- entry point -------------------------------------------------------------

def _add_caps(p: argparse.ArgumentParser, defaults: Caps) -> None:
    p.add_argument("--circuit-cap", type=int, default=defaults.circuits,
                   help="fail when a graph has more circuits than this")
    p.add_argument("--node-cap", type=int, default=defaults.nodes,
                   help="fail when the family walk visits more nodes than this")


def build_parser(defaults: Caps = Caps()) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parry-sullivan",
        description="Compute det(I - A) of a directed multigraph by several methods.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="compute PS by one or all methods")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=["det", "circuits", "leibniz", "all"], default="all")
    p.add_argument("--leibniz-limit", type=int, default=DEFAULT_FACTORIAL_LIMIT)
    p.add_argument("--table", action="store_true",
                   help="per-permutation comparison of determinant terms and family classes")
    _add_caps(p, defaults)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("circuits", help="list circuits and, optionally, disjoint families")
    p.add_argument("--input", required=True)
    p.add_argument("--families", action="store_true")
    _add_caps(p, defaults)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("fuzz", help="cross-check all methods on seeded random graphs")
    p.add_argument("--max-vertices", type=int, required=True)
    p.add_argument("--max-edges", type=int, required=True)
    p.add_argument("--cases", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--leibniz-limit", type=int, default=DEFAULT_FACTORIAL_LIMIT)
    _add_caps(p, defaults)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("reduce", help="eliminate sources, sinks and isolated vertices")
    p.add_argument("--input", required=True)
    p.add_argument("--json", action="store_true")
    return parser


def _read_graph(path: str) -> Multigraph:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_graph(data)


def _emit(report: dict, as_json: bool, renderer) -> None:
    if as_json:
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        sys.stdout.write(renderer(report) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    try:
        defaults = Caps.from_env()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    args = build_parser(defaults).parse_args(argv)
    if args.command == "fuzz":
        for name in ("max_vertices", "max_edges", "cases"):
            if getattr(args, name) < 0:
                print(f"error: --{name.replace('_', '-')} must be non-negative", file=sys.stderr)
                return EXIT_PARSE
        caps = Caps(args.circuit_cap, args.node_cap)
        report, code = fuzz_report(
            args.max_vertices, args.max_edges, args.cases, args.seed, caps, args.leibniz_limit
        )
        _emit(report, args.json, render_fuzz)
        return code

    try:
        g = _read_graph(args.input)
    except ParseError as exc:
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return EXIT_PARSE

    if args.command == "compute":
        caps = Caps(args.circuit_cap, args.node_cap)
        report, code = compute_report(g, args.method, caps, args.leibniz_limit, args.table)
        report["input"] = args.input
        _emit(report, args.json, render_compute)
        return code
    if args.command == "circuits":
        caps = Caps(args.circuit_cap, args.node_cap)
        try:
            report = circuits_report(g, args.families, caps)
        except ResourceLimitError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CAP
        report["input"] = args.input
        _emit(report, args.json, render_circuits)
        return EXIT_OK
    report, code = reduce_report(g)
    report["input"] = args.input
    _emit(report, args.json, render_reduce)
    return code


if __name__ == "__main__":
    sys.exit(main())
