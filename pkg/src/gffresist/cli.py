"""Command-line surface: network file ingestion, dispatch, report emission.

Network files are UTF-8 JSON documents with fields ``vertices`` (ordered
name list) and ``edges`` (records with ``u``, ``v``, ``r``). Vertex order is
array order; parallel indices follow order of appearance. Reports print as
text with 10 significant digits, or as JSON under ``--format json``.

Exit codes: 0 all checks pass, 1 a verified inequality failed beyond
tolerance, 2 usage error or malformed input, 3 semantically invalid input
(self-loop, nonpositive resistance, disconnected graph).
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import verify
from .electric import (
    ResistiveNetwork,
    dissipated_power,
    effective_resistance,
    kcl_residual,
    kvl_residual,
    thomson_flow,
)
from .errors import (
    DimensionMismatchError,
    DisconnectedError,
    DuplicateVertexNameError,
    GffResistError,
    ParseError,
    SelfLoopError,
    UnknownEndpointError,
    ValidationError,
)
from .gaussian import DegenerateEntropy
from .gff import build_free_field, potential_difference_variance
from .graph import build_multigraph
from .verify import Inequality, VerificationReport

DEFAULT_SUITE_SEED = 12345
SEED_ENV_VAR = "GFFRESIST_SEED"
LN2 = math.log(2.0)

EXIT_PASS = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_INVALID_NETWORK = 3

# Shape of a network document; kept in sync with parse_network.
NETWORK_SCHEMA = {
    "type": "object",
    "required": ["vertices", "edges"],
    "additionalProperties": False,
    "properties": {
        "vertices": {
            "type": "array",
            "minItems": 2,
            "items": {"type": "string"},
        },
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["u", "v", "r"],
                "additionalProperties": False,
                "properties": {
                    "u": {"type": "string"},
                    "v": {"type": "string"},
                    "r": {"type": "number"},
                },
            },
        },
    },
}

# Shape of every report emitted under --format json. Degenerate entropies
# and non-finite margins serialize as null.
REPORT_SCHEMA = {
    "type": "object",
    "required": ["name", "quantities", "inequalities", "tolerance", "pass"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "quantities": {
            "type": "object",
            "additionalProperties": {"type": ["number", "null"]},
        },
        "inequalities": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["lhs", "rel", "rhs", "margin", "holds"],
                "additionalProperties": False,
                "properties": {
                    "lhs": {"type": "string"},
                    "rel": {"enum": [">=", "<=", "=="]},
                    "rhs": {"type": "string"},
                    "margin": {"type": ["number", "null"]},
                    "holds": {"type": "boolean"},
                },
            },
        },
        "tolerance": {"type": "number"},
        "pass": {"type": "boolean"},
    },
}


def parse_network(path: str) -> ResistiveNetwork:
    """Load and validate a network document.

    Raises ParseError for malformed documents (with position information
    where available) and ValidationError for well-formed documents that
    violate a network invariant.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}") from exc

    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    extra = set(doc) - {"vertices", "edges"}
    if extra:
        raise ParseError(f"{path}: unknown top-level field {sorted(extra)[0]!r}")
    vertices = doc.get("vertices")
    edges = doc.get("edges")
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise ParseError(f"{path}: 'vertices' must be an array of strings")
    if not isinstance(edges, list):
        raise ParseError(f"{path}: 'edges' must be an array")

    specs, resistances = [], []
    for i, rec in enumerate(edges):
        where = f"{path}: edges[{i}]"
        if not isinstance(rec, dict):
            raise ParseError(f"{where} must be an object")
        extra = set(rec) - {"u", "v", "r"}
        if extra:
            raise ParseError(f"{where} has unknown field {sorted(extra)[0]!r}")
        for key in ("u", "v", "r"):
            if key not in rec:
                raise ParseError(f"{where} is missing field {key!r}")
        if not isinstance(rec["u"], str) or not isinstance(rec["v"], str):
            raise ParseError(f"{where}: 'u' and 'v' must be strings")
        if isinstance(rec["r"], bool) or not isinstance(rec["r"], (int, float)):
            raise ParseError(f"{where}: 'r' must be a number")
        if rec["r"] <= 0:
            raise ValidationError(f"{where}: resistance must be positive")
        specs.append((rec["u"], rec["v"]))
        resistances.append(float(rec["r"]))

    try:
        graph = build_multigraph(vertices, specs)
        return ResistiveNetwork(graph, np.array(resistances))
    except (SelfLoopError, DisconnectedError, DuplicateVertexNameError,
            UnknownEndpointError, DimensionMismatchError) as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def serialize_network(n: ResistiveNetwork) -> dict:
    """Document form of a network, edges in canonical id order."""
    g = n.graph
    return {
        "vertices": list(g.vertices),
        "edges": [
            {"u": g.vertices[rec.tail], "v": g.vertices[rec.head],
             "r": float(n.resistances[e])}
            for e, rec in enumerate(g.edges)
        ],
    }


def fmt(x) -> str:
    """10 significant digits, locale-independent."""
    return format(float(x), ".10g")


def _fmt_value(value) -> str:
    if isinstance(value, DegenerateEntropy):
        return "degenerate"
    if isinstance(value, float) and not math.isfinite(value):
        return "degenerate-comparison"
    return fmt(value)


def to_bits(report: VerificationReport) -> VerificationReport:
    """Rescale entropy-valued quantities (h_* labels) from nats to bits."""
    def scale_value(label, value):
        if label.startswith("h_") and isinstance(value, float):
            return value / LN2
        return value

    def scale_ineq(iq: Inequality) -> Inequality:
        if iq.lhs.startswith("h_") and iq.rhs.startswith("h_") \
                and isinstance(iq.margin, float) and math.isfinite(iq.margin):
            return Inequality(iq.lhs, iq.rel, iq.rhs, iq.margin / LN2, iq.holds)
        return iq

    return VerificationReport(
        report.name,
        tuple((label, scale_value(label, v)) for label, v in report.quantities),
        tuple(scale_ineq(iq) for iq in report.inequalities),
        report.tolerance,
    )


def render_report(report: VerificationReport) -> str:
    lines = [f"check: {report.name}"]
    for label, value in report.quantities:
        lines.append(f"  {label} = {_fmt_value(value)}")
    for iq in report.inequalities:
        status = "ok" if iq.holds else "FAILED"
        lines.append(
            f"  {iq.lhs} {iq.rel} {iq.rhs}  margin={_fmt_value(iq.margin)}  {status}")
    lines.append(f"  tolerance = {fmt(report.tolerance)}")
    lines.append(f"  result: {'pass' if report.passed else 'FAIL'}")
    return "\n".join(lines)


def _emit_report(report: VerificationReport, args) -> int:
    if getattr(args, "bits", False):
        report = to_bits(report)
    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(render_report(report))
    return EXIT_PASS if report.passed else EXIT_CHECK_FAILED


def _load_pair(network: ResistiveNetwork, pair: str, parser) -> tuple:
    parts = pair.split(",")
    if len(parts) != 2:
        parser.error("--pair must look like NAME,NAME")
    a, b = (network.graph.vertex_index(p) for p in parts)
    if a == b:
        parser.error("--pair needs two distinct vertices")
    return a, b


def _require_same_topology(n1: ResistiveNetwork, n2: ResistiveNetwork, parser):
    if n1.graph.vertices != n2.graph.vertices or n1.graph.edges != n2.graph.edges:
        parser.error("topology mismatch: --network and --bar-network must "
                     "share the same vertex list and edge multiset")


def _simple_report(name: str, quantities) -> VerificationReport:
    return VerificationReport(name, tuple(quantities), (), 0.0)


def _cmd_reff(args, parser) -> int:
    net = parse_network(args.network)
    a, b = _load_pair(net, args.pair, parser)
    reff = effective_resistance(net, a, b)
    if args.format == "json":
        return _emit_report(_simple_report("effective_resistance",
                                           [("reff", reff)]), args)
    print(fmt(reff))
    return EXIT_PASS


def _cmd_gff(args, parser) -> int:
    net = parse_network(args.network)
    a, b = _load_pair(net, args.pair, parser)
    var = potential_difference_variance(build_free_field(net), a, b)
    reff = effective_resistance(net, a, b)
    if args.format == "json":
        return _emit_report(_simple_report("gff_variance",
                                           [("var_u", var), ("reff", reff)]),
                            args)
    print(f"var_u = {fmt(var)}")
    print(f"reff  = {fmt(reff)}")
    return EXIT_PASS


def _cmd_thomson(args, parser) -> int:
    net = parse_network(args.network)
    a, b = _load_pair(net, args.pair, parser)
    flow = thomson_flow(net, a, b)
    g = net.graph
    quantities = [(f"current[{e}]", float(flow.currents[e]))
                  for e in range(g.n_edges)]
    quantities += [
        ("power", dissipated_power(net, flow)),
        ("kcl_residual", kcl_residual(net, flow, a, b)),
        ("kvl_residual", kvl_residual(net, flow)),
    ]
    if args.format == "json":
        return _emit_report(_simple_report("thomson_flow", quantities), args)
    names = g.vertices
    print(f"thomson flow, unit current {names[a]} -> {names[b]}")
    for e, rec in enumerate(g.edges):
        print(f"  edge {e}  {names[rec.tail]} -> {names[rec.head]}"
              f"  (parallel {rec.parallel_index})  I = {fmt(flow.currents[e])}")
    for label, value in quantities[g.n_edges:]:
        print(f"  {label} = {fmt(value)}")
    return EXIT_PASS


def _cmd_verify(args, parser) -> int:
    needs_bar = args.check in ("superadd", "melvin", "entropy", "concavity")
    if args.check != "appendix":
        if args.network is None or args.pair is None:
            parser.error(f"verify {args.check} requires --network and --pair")
        net = parse_network(args.network)
        a, b = _load_pair(net, args.pair, parser)
    if needs_bar:
        if args.bar_network is None:
            parser.error(f"verify {args.check} requires --bar-network")
        net_bar = parse_network(args.bar_network)
        _require_same_topology(net, net_bar, parser)

    if args.check == "superadd":
        report = verify.check_superadditivity(
            net.graph, net.resistances, net_bar.resistances, a, b, args.tol)
    elif args.check == "melvin":
        report = verify.melvin_chain(
            net.graph, net.resistances, net_bar.resistances, a, b, args.tol)
    elif args.check == "entropy":
        report = verify.entropy_chain(
            net.graph, net.resistances, net_bar.resistances, a, b, args.tol)
    elif args.check == "concavity":
        report = verify.check_concavity_segment(
            net.graph, net.resistances, net_bar.resistances,
            args.grid, a, b, args.tol)
    elif args.check == "scaling":
        report = verify.check_scaling(
            net.graph, net.resistances, args.scale, a, b, args.tol)
    elif args.check == "monotone":
        report = verify.check_monotonicity(
            net.graph, net.resistances, args.edge, args.delta, a, b, args.tol)
    elif args.check == "appendix":
        instance = verify.random_appendix_instance(args.dim, args.seed)
        report = verify.appendix_check(instance, args.tol)
    else:  # mc
        report = verify.monte_carlo_variance_check(
            net.graph, net.resistances, a, b, args.samples, args.seed)
    return _emit_report(report, args)


def _cmd_suite(args, parser) -> int:
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get(SEED_ENV_VAR, DEFAULT_SUITE_SEED))
    summary = verify.run_suite(seed, args.instances, args.tol)
    if args.format == "json":
        print(json.dumps(summary, indent=2))
    else:
        print(f"suite seed={seed} instances={args.instances} "
              f"tol={fmt(args.tol)}")
        for name, entry in summary["checks"].items():
            status = "pass" if entry["failures"] == 0 else \
                f"FAIL ({entry['failures']} instances)"
            print(f"  {name}: {status}  worst_margin={fmt(entry['worst_margin'])}")
        print(f"  overall: {'pass' if summary['pass'] else 'FAIL'}")
    return EXIT_PASS if summary["pass"] else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gffresist",
        description="Effective resistance by three routes, with machine-"
                    "checked concavity, power-chain, and entropy-chain "
                    "verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, network=True):
        if network:
            p.add_argument("--network", required=True, help="network JSON file")
            p.add_argument("--pair", required=True, help="vertex pair NAME,NAME")
        p.add_argument("--format", choices=("text", "json"), default="text")

    p_reff = sub.add_parser("reff", help="effective resistance (Laplacian route)")
    add_common(p_reff)

    p_gff = sub.add_parser("gff", help="free-field variance beside the "
                                       "effective resistance")
    add_common(p_gff)

    p_thomson = sub.add_parser("thomson", help="minimum-energy unit flow, "
                                               "power, and law residuals")
    add_common(p_thomson)

    p_verify = sub.add_parser("verify", help="run one theorem check")
    p_verify.add_argument("check", choices=(
        "superadd", "melvin", "entropy", "concavity", "scaling",
        "monotone", "appendix", "mc"))
    p_verify.add_argument("--network", help="network JSON file")
    p_verify.add_argument("--pair", help="vertex pair NAME,NAME")
    p_verify.add_argument("--bar-network", dest="bar_network",
                          help="second resistance assignment, same topology")
    p_verify.add_argument("--tol", type=float, default=verify.DEFAULT_TOL)
    p_verify.add_argument("--grid", type=int, default=21,
                          help="concavity grid points")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--samples", type=int, default=1_000_000)
    p_verify.add_argument("--scale", type=float, default=2.0)
    p_verify.add_argument("--edge", type=int, default=0)
    p_verify.add_argument("--delta", type=float, default=1.0)
    p_verify.add_argument("--dim", type=int, default=4)
    p_verify.add_argument("--bits", action="store_true",
                          help="report entropies in bits instead of nats")
    p_verify.add_argument("--format", choices=("text", "json"), default="text")

    p_suite = sub.add_parser("suite", help="randomized property battery")
    p_suite.add_argument("--seed", type=int, default=None,
                         help=f"suite seed (default {DEFAULT_SUITE_SEED}, "
                              f"or ${SEED_ENV_VAR})")
    p_suite.add_argument("--instances", type=int, default=200)
    p_suite.add_argument("--tol", type=float, default=verify.DEFAULT_TOL)
    p_suite.add_argument("--format", choices=("text", "json"), default="text")

    return parser


def run_command(argv) -> int:
    """Dispatch one CLI invocation; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    handlers = {
        "reff": _cmd_reff,
        "gff": _cmd_gff,
        "thomson": _cmd_thomson,
        "verify": _cmd_verify,
        "suite": _cmd_suite,
    }
    try:
        return handlers[args.command](args, parser)
    except SystemExit as exc:  # parser.error inside a handler
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_NETWORK
    except GffResistError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
