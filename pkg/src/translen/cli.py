"""Command-line interface.

Exit codes: 0 success, 1 verification mismatch, 2 invalid input,
3 class is not a fibration class, 4 boundary point (g diverges),
5 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from fractions import Fraction
from typing import Sequence

from .atl import atl, mu_from_parts
from .example import cycle_word, run_checks
from .exact.rational import format_rational, format_vector, parse_rational, parse_rational_list
from .fibered import BoundaryPoint, FiberedConeData, NotFibrationClass, SliceContext, SliceError, primitivize
from .fixtures import (
    braid_drift_graph,
    braid_ingested,
    read_text,
    slice_for,
    SLICE,
)
from .flowgraph import FlowGraph, FlowGraphError, Skeleton, parse_drift_graph
from .frobenius import FrobeniusEngine, FrobeniusInfinite
from .normalized import convergence_scan, g_value, point_from_parameter, scan
from .triangulation import Ingested, TriangulationError, ingest, parse_triangulation

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INVALID = 2
EXIT_NOT_FIBRATION = 3
EXIT_BOUNDARY = 4
EXIT_USAGE = 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2, which means invalid input here
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


# -- loading -------------------------------------------------------------------


class Loaded:
    def __init__(self, graph: FlowGraph, ingested: Ingested | None, embedded: bool):
        self.graph = graph
        self.ingested = ingested
        self.embedded = embedded
        self.skeleton = Skeleton.of(graph)
        self.fibered = FiberedConeData.from_drifts([c.drift for c in self.skeleton.cycles])


def _looks_like_triangulation(text: str) -> bool:
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            return line.split()[0] in {"tetrahedra", "glue", "taut"}
    return False


def load_input(path: str | None) -> Loaded:
    if path is None:
        return Loaded(braid_drift_graph(), braid_ingested(), True)
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    if _looks_like_triangulation(text):
        data = ingest(parse_triangulation(text))
        return Loaded(data.flow_graph, data, False)
    return Loaded(parse_drift_graph(text), None, False)


def load_slice(args, loaded: Loaded) -> SliceContext:
    if args.slice:
        try:
            with open(args.slice, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.slice}: {exc.strerror}") from None
    elif loaded.embedded:
        text = read_text(SLICE)
    else:
        raise UsageError("--slice is required for inputs other than the embedded example")
    sl = slice_for(loaded.fibered, text)
    if args.d is not None and args.d != sl.d:
        raise SliceError(f"--d {args.d} does not match the slice dimension {sl.d}")
    return sl


def _phi(args, loaded: Loaded) -> tuple[Fraction, ...]:
    if args.phi is None:
        raise UsageError("--phi is required")
    phi = parse_rational_list(args.phi)
    if len(phi) != loaded.graph.rank:
        raise UsageError(f"--phi needs {loaded.graph.rank} coordinates")
    return phi


def _fmt(x, as_float: bool) -> str:
    if as_float:
        return repr(float(x))
    return format_rational(x) if isinstance(x, (int, Fraction)) else repr(x)


# -- commands ----------------------------------------------------------------


def cmd_ingest(args, out) -> int:
    loaded = load_input(args.input)
    if loaded.ingested is not None:
        ing = loaded.ingested
        print(
            f"input: triangulation with {ing.triangulation.tetrahedra_count} tetrahedra, "
            f"{len(ing.faces)} faces, {len(ing.classes)} edge classes",
            file=out,
        )
    else:
        print("input: drift graph", file=out)
    g = loaded.graph
    print("vertices: " + " ".join(g.vertices), file=out)
    print(f"triangle-edges: {len(g.triangle_edges)}; tetrahedron-edges: {len(g.tetrahedron_edges)}", file=out)
    b = "{" + ",".join(format_vector(x) for x in loaded.fibered.drifts) + "}"
    rays = " ".join(format_vector(r) for r in loaded.fibered.cone_b.extreme_rays)
    print(f"rank {g.rank}; B = {b}; cone rays {rays}", file=out)
    print("fibred cone rays: " + " ".join(format_vector(r) for r in loaded.fibered.rays), file=out)
    return EXIT_OK


def cmd_graph(args, out) -> int:
    loaded = load_input(args.input)
    out.write(loaded.graph.to_text())
    print("minimal cycles:", file=out)
    for c in loaded.skeleton.cycles:
        print(f"  {c.word()} {format_vector(c.drift)}", file=out)
    print("minimal good paths:", file=out)
    for p in loaded.skeleton.paths:
        print(f"  {p.word()} {format_vector(p.drift)}", file=out)
    if args.phi is not None:
        phi = primitivize(_phi(args, loaded))
        loaded.fibered.require_interior(phi)
        w = FrobeniusEngine(loaded.skeleton, phi, loaded.fibered).weighted_graph()
        print(f"W{format_vector(phi)} (weights depend on the chosen lifts):", file=out)
        for u, v, weight in w.edges():
            print(f"  {u} -> {v} {weight}", file=out)
    return EXIT_OK


def cmd_cone(args, out) -> int:
    loaded = load_input(args.input)
    fib = loaded.fibered
    print("fibred cone rays: " + " ".join(format_vector(r) for r in fib.rays), file=out)
    print("inequalities: phi(b) <= 0 for b in " + " ".join(format_vector(b) for b in fib.drifts), file=out)
    if args.phi is not None:
        phi = _phi(args, loaded)
        if fib.is_interior(phi):
            status = "interior"
        elif fib.in_closed_cone(phi):
            status = "boundary"
        else:
            status = "outside"
        print(f"{format_vector(phi)}: {status}", file=out)
    return EXIT_OK


def cmd_atl(args, out) -> int:
    loaded = load_input(args.input)
    r = atl(loaded.skeleton, _phi(args, loaded), loaded.fibered)
    print(f"ell = {_fmt(r.ell, args.float)}; witness = {' '.join(r.witness)}", file=out)
    print(f"phi = {format_vector(r.phi_bar)}; max_mean = {_fmt(r.max_mean, args.float)}", file=out)
    print("optimal cycles: " + " ".join(cycle_word(c) for c in r.optimal_cycles), file=out)
    return EXIT_OK


def cmd_mu(args, out) -> int:
    loaded = load_input(args.input)
    sl = load_slice(args, loaded)
    phi = _phi(args, loaded)
    r = atl(loaded.skeleton, phi, loaded.fibered)
    norm = sl.class_norm(r.phi_bar)
    m = mu_from_parts(norm, r.ell, sl.d)
    print(f"mu = {m.render(args.float)}", file=out)
    print(f"phi = {format_vector(r.phi_bar)}; norm = {format_rational(norm)}; ell = {format_rational(r.ell)}", file=out)
    return EXIT_OK


def _point(text: str, sl: SliceContext):
    if text.startswith("t="):
        return point_from_parameter(sl, parse_rational(text[2:]))
    x = parse_rational_list(text)
    if len(x) != sl.d + 1:
        raise UsageError(f"--point needs {sl.d + 1} slice coordinates or t=VALUE")
    return x


def _minocc(args):
    return parse_rational(args.minocc) if args.minocc else None


def cmd_g(args, out) -> int:
    loaded = load_input(args.input)
    sl = load_slice(args, loaded)
    if args.point is None:
        raise UsageError("--point is required")
    g = g_value(sl, _point(args.point, sl), _minocc(args))
    print(f"g = {g.render(args.float)}", file=out)
    print(f"point = {format_vector(g.point)}; volume = {format_rational(g.volume)}", file=out)
    if g.uncertified_occupancy:
        print(f"minimal occupancy = {g.minocc!r} (uncertified)", file=out)
    return EXIT_OK


def _table(rows: list[list[str]], fmt: str) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=";" if fmt == "csv" else "\t", lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _emit(args, out, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)


def cmd_scan(args, out) -> int:
    loaded = load_input(args.input)
    sl = load_slice(args, loaded)
    if args.depth is None or args.depth < 1:
        raise UsageError("--depth must be a positive integer")
    rows = [["point", "norm", "ell_num/ell_den", "mu", "g", "gap"]]
    for r in scan(loaded.skeleton, sl, args.depth, _minocc(args)):
        rows.append(
            [
                format_vector(r.point),
                _fmt(r.norm, args.float),
                _fmt(r.ell, args.float),
                r.mu.render(args.float),
                r.g.render(args.float),
                _fmt(r.gap, args.float),
            ]
        )
    _emit(args, out, _table(rows, args.format))
    return EXIT_OK


def cmd_converge(args, out) -> int:
    loaded = load_input(args.input)
    sl = load_slice(args, loaded)
    base = _phi(args, loaded)
    if args.direction is None:
        raise UsageError("--direction is required")
    direction = parse_rational_list(args.direction)
    if len(direction) != loaded.graph.rank:
        raise UsageError(f"--direction needs {loaded.graph.rank} coordinates")
    if args.step < 1 or args.to < args.start:
        raise UsageError("need --from <= --to and a positive --step")
    ks = list(range(args.start, args.to + 1, args.step))
    classes = [tuple(b + k * d for b, d in zip(base, direction)) for k in ks]
    target = sl.coordinates(direction)
    seq = [sl.coordinates(c) for c in classes]
    rows = [["k", "phi", "norm", "max_mean", "ratio", "predicted", "residual", "scaled_residual", "mu", "g", "gap"]]
    for k, row in zip(ks, convergence_scan(loaded.skeleton, sl, target, seq, _minocc(args))):
        r = row.row
        rows.append(
            [
                str(k),
                format_vector(r.phi_bar),
                _fmt(r.norm, args.float),
                _fmt(r.max_mean, args.float),
                _fmt(row.ratio, args.float),
                _fmt(row.predicted, args.float),
                _fmt(row.residual, args.float),
                repr(row.scaled_residual),
                r.mu.render(args.float),
                r.g.render(args.float),
                _fmt(r.gap, args.float),
            ]
        )
    _emit(args, out, _table(rows, args.format))
    return EXIT_OK


def cmd_verify_example(args, out) -> int:
    if args.input is None:
        loaded = load_input(None)
        ingested = loaded.ingested
    else:
        loaded = load_input(args.input)
        ingested = braid_ingested() if loaded.ingested is None else loaded.ingested
    sl = slice_for(loaded.fibered, read_text(SLICE))
    width = 52

    def log(c):
        status = "pass" if c.ok else "FAIL"
        print(f"{status}  {c.name:<{width}} expected {c.expected}  computed {c.computed}", file=out)

    try:
        checks = run_checks(loaded.skeleton, loaded.fibered, sl, ingested, log)
    except (NotFibrationClass, SliceError, FrobeniusInfinite, AssertionError, ValueError) as exc:
        print(f"FAIL  example could not be evaluated: {exc}", file=out)
        return EXIT_MISMATCH
    failed = [c for c in checks if not c.ok]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed", file=out)
    if failed:
        c = failed[0]
        print(f"first mismatch: {c.name}: expected {c.expected}, computed {c.computed}", file=out)
        return EXIT_MISMATCH
    return EXIT_OK


COMMANDS = {
    "ingest": cmd_ingest,
    "graph": cmd_graph,
    "cone": cmd_cone,
    "atl": cmd_atl,
    "mu": cmd_mu,
    "g": cmd_g,
    "scan": cmd_scan,
    "converge": cmd_converge,
    "verify-example": cmd_verify_example,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="translen", description="Asymptotic translation lengths of pseudo-Anosov monodromies.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("input", nargs="?", help="triangulation or drift-graph file (default: embedded example)")
        p.add_argument("--phi", help="cohomology class a,b,... (comma-separated rationals)")
        p.add_argument("--slice", help="slice file")
        p.add_argument("--d", type=int, help="slice dimension (checked against the slice)")
        p.add_argument("--depth", type=int, help="maximal denominator for scans")
        p.add_argument("--point", help="slice coordinates c1,...,c_{d+1} or t=VALUE on a 1-dimensional slice")
        p.add_argument("--minocc", help="minimal occupancy to use for d >= 2")
        p.add_argument("--direction", help="converge: limit direction of the sequence phi + k*direction")
        p.add_argument("--from", dest="start", type=int, default=5, help="converge: first k")
        p.add_argument("--to", type=int, default=41, help="converge: last k")
        p.add_argument("--step", type=int, default=2, help="converge: step in k")
        p.add_argument("--out", help="write tables to this file")
        p.add_argument("--format", choices=("csv", "tsv"), default="csv")
        p.add_argument("--float", action="store_true", help="render numbers as floats")
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotFibrationClass as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_FIBRATION
    except BoundaryPoint as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUNDARY
    except (TriangulationError, FlowGraphError, SliceError, FrobeniusInfinite, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
