"""``flatlam`` command line.

Exit codes: 0 success or decided, 1 validation failure, 2 undetermined,
64 usage error, 65 unreadable or malformed input.  The FLATLAM_SEED
environment variable is reserved and ignored: nothing here is random.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import io as fio
from .exact import Q, Vec2, format_rational
from .flow import Outcome, cylinder_decomposition
from .lamination import LeafFamily, classify_components, family_from_direction, validate_family
from .linking import intersection_pattern
from .ribbon import (
    CrossCheckMismatch,
    ExceptionalKind,
    RibbonGraphError,
    build_surface,
    is_exceptional,
    right_turn_cycles,
    surface_invariants,
)
from .surface import SurfaceError, compute_singularities, euler_characteristic, validate_surface
from .svg import render_decomposition, render_trajectory
from .tracer import SurfacePoint, saddle_connections, shoot

EXIT_OK, EXIT_INVALID, EXIT_UNDETERMINED, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 64, 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _rational_pair(text: str) -> Vec2:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated rationals, got {text!r}")
    try:
        return Vec2(Q(parts[0]), Q(parts[1]))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _direction(text: str) -> Vec2:
    v = _rational_pair(text)
    if v.x == 0 and v.y == 0:
        raise argparse.ArgumentTypeError("direction must be nonzero")
    return v


def _point(text: str) -> SurfacePoint:
    pid, sep, rest = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("point must look like POLYGON:x,y")
    return SurfacePoint(pid, _rational_pair(rest))


def _budget(text: str) -> Fraction:
    try:
        b = Q(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if b <= 0:
        raise argparse.ArgumentTypeError("budget must be positive")
    return b


def _jobs(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("--jobs takes a positive integer") from None
    if n < 1:
        raise argparse.ArgumentTypeError("--jobs takes a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="flatlam", description="Exact computations on half-translation surfaces.")
    p.add_argument("--jobs", type=_jobs, default=1, help="worker cap (computations run serially)")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    v = sub.add_parser("validate", help="check a surface file")
    v.add_argument("surface")

    v = sub.add_parser("singularities", help="list cone points")
    v.add_argument("surface")

    v = sub.add_parser("trace", help="shoot a straight trajectory")
    v.add_argument("surface")
    v.add_argument("--point", type=_point, required=True, help="POLYGON:x,y")
    v.add_argument("--direction", type=_direction, required=True, help="x,y (rationals)")
    v.add_argument("--budget", type=_budget, default=Fraction(100), help="max squared length")
    v.add_argument("--jsonl", action="store_true", help="print one JSON object per segment")
    v.add_argument("--svg", help="write the developed path to this file")

    v = sub.add_parser("saddles", help="enumerate saddle connections")
    v.add_argument("surface")
    v.add_argument("--budget", type=_budget, required=True, help="max squared length")
    v.add_argument("--oriented", action="store_true")

    v = sub.add_parser("cylinders", help="classify the flow in one direction")
    v.add_argument("surface")
    v.add_argument("--direction", type=_direction, required=True)
    v.add_argument("--budget", type=_budget, default=Fraction(100))
    v.add_argument("--svg", help="write the decomposition to this file")

    v = sub.add_parser("ribbon", help="thicken a ribbon graph")
    v.add_argument("graph")
    v.add_argument("--emit-surface", help="write the built surface JSON here")

    v = sub.add_parser("link", help="decide whether two closed geodesics are linked")
    v.add_argument("surface")
    v.add_argument("geodesic1")
    v.add_argument("geodesic2")

    v = sub.add_parser("classify", help="components of a finite leaf family")
    v.add_argument("surface")
    v.add_argument("family", nargs="?")
    v.add_argument("--from-direction", type=_direction, dest="from_direction")
    v.add_argument("--budget", type=_budget, default=Fraction(100))
    v.add_argument("--full", action="store_true", help="declare generated cylinders full")
    return p


def _read(path: str, what: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return fio.loads(fh.read(), f"{what} {path}")
    except OSError as exc:
        raise fio.ParseError(f"cannot read {what}: {exc.strerror}", path) from None


def _surface(path: str):
    data = _read(path, "surface")
    try:
        return fio.surface_from_json(data)
    except fio.ParseError as exc:
        raise fio.ParseError(str(exc), path) from None
    except (SurfaceError, ValueError, TypeError) as exc:
        raise fio.ParseError(str(exc), f"{path}: $") from None


def _valid_surface(path: str, out):
    s = _surface(path)
    rep = validate_surface(s)
    if not rep.ok:
        _print_violations(rep, out)
        return None
    return s


def _print_violations(rep, out):
    out.write(f"INVALID: {len(rep.violations)} violation(s)\n")
    for line in rep.violations:
        out.write(f"  - {line}\n")


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _vec(v) -> str:
    return f"({format_rational(Q(v[0]))}, {format_rational(Q(v[1]))})"


def _table(rows: list[list[str]], out):
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    for r in rows:
        out.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")


# ---------------------------------------------------------------------------
# verbs


def cmd_validate(a, out) -> int:
    s = _surface(a.surface)
    rep = validate_surface(s)
    if not rep.ok:
        _print_violations(rep, out)
        return EXIT_INVALID
    n = len(compute_singularities(s))
    out.write(f"OK: {n} singularities, χ={euler_characteristic(s)}\n")
    return EXIT_OK


def cmd_singularities(a, out) -> int:
    s = _valid_surface(a.surface, out)
    if s is None:
        return EXIT_INVALID
    rows = [["cone", "k", "angle", "boundary", "corners"]]
    for c in compute_singularities(s):
        rows.append([str(c.index), str(c.k), f"{c.k}π", "yes" if c.on_boundary else "no",
                     " ".join(f"{x.polygon}:{x.vertex}" for x in c.corners)])
    if len(rows) == 1:
        out.write("no singularities\n")
        return EXIT_OK
    _table(rows, out)
    return EXIT_OK


def cmd_trace(a, out) -> int:
    s = _valid_surface(a.surface, out)
    if s is None:
        return EXIT_INVALID
    t = shoot(s, a.point, a.direction, a.budget)
    if a.svg:
        _write(a.svg, render_trajectory(s, t))
    if a.jsonl:
        for line in fio.trajectory_lines(t):
            out.write(line + "\n")
        return EXIT_OK
    out.write(f"termination: {t.termination.value}\n")
    out.write(f"length^2: {format_rational(t.sq_length)}\n")
    out.write(f"holonomy: {_vec(t.holonomy)}\n")
    out.write(f"segments: {len(t.segments)}\n")
    out.write(f"itinerary: {' '.join(t.itinerary()) or '-'}\n")
    return EXIT_OK


def cmd_saddles(a, out) -> int:
    s = _valid_surface(a.surface, out)
    if s is None:
        return EXIT_INVALID
    scs = saddle_connections(s, a.budget, oriented=a.oriented)
    rows = [["length^2", "holonomy", "from", "to", "crossings"]]
    for sc in sorted(scs, key=lambda c: (c.sq_length, c.holonomy, c.start, c.end)):
        rows.append([format_rational(sc.sq_length), _vec(sc.holonomy), str(sc.start.cone),
                     str(sc.end.cone), str(len(sc.itinerary))])
    out.write(f"{len(scs)} saddle connection(s) with length^2 <= {format_rational(a.budget)}\n")
    if scs:
        _table(rows, out)
    return EXIT_OK


def cmd_cylinders(a, out) -> int:
    s = _valid_surface(a.surface, out)
    if s is None:
        return EXIT_INVALID
    dec = cylinder_decomposition(s, a.direction, a.budget)
    out.write(f"direction: {dec.direction}\n")
    out.write(f"outcome: {dec.outcome.value}\n")
    out.write(f"cylinders: {len(dec.cylinders)}\n")
    if dec.cylinders:
        rows = [["#", "circumference^2", "height", "height^2", "area"]]
        for i, c in enumerate(dec.cylinders):
            h = c.height
            rows.append([str(i), format_rational(c.circumference_sq),
                         format_rational(h) if h is not None else "irrational",
                         format_rational(c.height_sq), format_rational(c.area)])
        _table(rows, out)
    out.write(f"total area: {format_rational(dec.total_area)} of {format_rational(s.area())}\n")
    for i, dom in enumerate(dec.candidate_domains):
        out.write(f"candidate domain {i}: {len(dom.strips)} strip(s), "
                  f"{len(dom.boundary)} bounding connection(s)\n")
    if a.svg:
        _write(a.svg, render_decomposition(s, dec))
    return EXIT_OK if dec.outcome is Outcome.PERIODIC else EXIT_UNDETERMINED


def cmd_ribbon(a, out) -> int:
    data = _read(a.graph, "graph")
    try:
        g = fio.graph_from_json(data)
    except fio.ParseError as exc:
        raise fio.ParseError(str(exc), a.graph) from None
    try:
        kind = is_exceptional(g)
        chi, b, genus = surface_invariants(g)
    except CrossCheckMismatch as exc:
        sys.stderr.write(f"internal cross-check failed: {exc}\n")
        return EXIT_INVALID
    except RibbonGraphError as exc:
        out.write(f"INVALID: {exc}\n")
        return EXIT_INVALID
    head = "exceptional: " + kind.value if kind is not ExceptionalKind.NONE else "not exceptional"
    out.write(f"{head}; χ={chi} b={b} g={genus}\n")
    for i, cyc in enumerate(right_turn_cycles(g)):
        out.write(f"boundary {i}: length {format_rational(cyc.length)}: {' '.join(cyc.half_edges)}\n")
    if a.emit_surface:
        _write(a.emit_surface, fio.dumps(fio.surface_to_json(build_surface(g))))
    return EXIT_OK


def _geodesic(s, path):
    data = _read(path, "geodesic")
    try:
        return fio.geodesic_from_json(s, data)
    except fio.ParseError as exc:
        raise fio.ParseError(str(exc), path) from None


def cmd_link(a, out) -> int:
    s = _valid_surface(a.surface, out)
    if s is None:
        return EXIT_INVALID
    g1, g2 = _geodesic(s, a.geodesic1), _geodesic(s, a.geodesic2)
    pat = intersection_pattern(g1, g2)
    out.write("LINKED\n" if pat.linked else "NOT-LINKED\n")
    if pat.same_image:
        out.write("same image: the two geodesics coincide up to reversal\n")
    out.write(f"events: {len(pat.events)}\n")
    for line in sorted(e.describe() for e in pat.events):
        out.write(f"  {line}\n")
    return EXIT_OK


def cmd_classify(a, out) -> int:
    if (a.family is None) == (a.from_direction is None):
        raise UsageError("classify: give exactly one of FAMILY or --from-direction\n")
    s = _valid_surface(a.surface, out)
    if s is None:
        return EXIT_INVALID
    if a.from_direction is not None:
        fam = family_from_direction(s, a.from_direction, a.budget, full=a.full)
    else:
        data = _read(a.family, "family")
        try:
            fam = LeafFamily.of(s, fio.family_from_json(s, data))
        except fio.ParseError as exc:
            raise fio.ParseError(str(exc), a.family) from None
    rep = validate_family(s, fam)
    if not rep.ok:
        _print_violations(rep, out)
        return EXIT_INVALID
    report = classify_components(s, fam)
    out.write(f"leaves: {len(fam.leaves)} (including reversals)\n")
    out.write(f"components: {report.count}\n")
    for line in report.lines():
        out.write(line + "\n")
    return EXIT_UNDETERMINED if report.candidate_minimal_domains else EXIT_OK


VERBS = {
    "validate": cmd_validate,
    "singularities": cmd_singularities,
    "trace": cmd_trace,
    "saddles": cmd_saddles,
    "cylinders": cmd_cylinders,
    "ribbon": cmd_ribbon,
    "link": cmd_link,
    "classify": cmd_classify,
}


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return VERBS[args.verb](args, out)
    except UsageError as exc:
        err.write(str(exc) if str(exc).endswith("\n") else f"{exc}\n")
        if not str(exc).startswith("flatlam"):
            err.write(parser.format_usage())
        return EXIT_USAGE
    except fio.ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_DATA
    except SurfaceError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INVALID


def main(argv=None) -> int:
    try:
        code = run(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:  # --help
        code = exc.code if isinstance(exc.code, int) else 0
    return code


if __name__ == "__main__":
    sys.exit(main())
