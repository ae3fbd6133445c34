"""Command-line front end for polygon invariants and blowup resolution.

Surfaces x^p = F(y, z) over fields of characteristic p are described by
polynomial text such as ``"y^5*z + y^3*z^3 + y^3*z^8"`` (coefficients may use
the field generator, e.g. ``"(g+1)*y*z^2"``).  Subcommands:

  invariant   measure one series: polygon data, both invariant vectors with
              their symbolic tags, and the shift realizing them
  resolve     run the full blowup loop and write the certified trace as JSON
  blowup      list the children of one series under the moves T(t), H, V
  corpus      resolve a seeded pseudo-random corpus and report aggregates
  render      draw the Newton polygon (ASCII, or SVG with --svg)

Examples:

  polyres invariant "y^5*z + y^3*z^3 + y^3*z^8" --p 2
  polyres resolve "y^5*z + y^3*z^3 + y^3*z^8" --p 2 --out trace.json
  polyres blowup "y^3 + y*z^3 + z^5" --p 3
  polyres corpus --p 2 --count 10 --seed 7
  polyres render "y^5*z + y^3*z^3 + y^3*z^8" --p 2 --svg polygon.svg

The exit code is 0 only when every decrease assertion passed and no node was
left truncation-incomplete.  All randomness is seeded from the command line,
so identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import AlgebraError, FieldTower
from .blowup import BlowupError, enumerate_children, surface_reduce
from .driver import (DriverError, ResolveConfig, ResolutionTrace, corpus_run,
                     measure_seed, resolve)
from .invariants import measures
from .prepare import PrepareError, shift_text
from .series import ResidueSeries, SeriesError, newton_polygon, parse_series

_ERRORS = (AlgebraError, BlowupError, DriverError, PrepareError, SeriesError)


def _tower(args: argparse.Namespace) -> FieldTower:
    tower = FieldTower(args.p)
    if args.ext > 1:
        tower.extend_to_absolute(args.ext)
    return tower


def _seed_series(args: argparse.Namespace) -> ResidueSeries:
    return parse_series(_tower(args), args.series, trunc=args.trunc)


def _config(args: argparse.Namespace) -> ResolveConfig:
    return ResolveConfig(K=args.K, restrict=args.r, depth=args.depth,
                         trunc=args.trunc)


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fraction_text(value) -> str:
    return "inf" if value == float("inf") else str(value)


def cmd_invariant(args: argparse.Namespace) -> int:
    """Measure one series and print both invariant vectors."""
    node = measure_seed(_seed_series(args), _config(args))
    m = node.m
    lines = [
        f"status      {node.status}",
        f"prepared    {node.realized}",
        f"shift       y -> y + {node.shift}" if node.shift != "0"
        else "shift       0",
        f"vertices    {list(newton_polygon(node.realized).vertices)}",
        f"ord         {m.ord}   (ord_y {m.ord_y}, ord_z {m.ord_z})",
        f"deg_y       {m.deg_y}   deg_z {m.deg_z}",
        f"height      {m.height}   width {m.width}",
        f"slope       {_fraction_text(m.slope)}",
        f"dent        {m.dent if m.dent is not None else 'inf'}",
        f"adjacency   {m.adjacency}   parity {m.parity}",
        f"dorder      {m.dorder}",
    ]
    if args.invariant in ("height", "both"):
        lines.append(f"i[height]   {node.vec_height}")
    if args.invariant in ("dorder", "both"):
        lines.append(f"i[dorder]   {node.vec_dorder}")
    if node.note:
        lines.append(f"note        {node.note}")
    _write("\n".join(lines) + "\n", args.out)
    return 0 if node.status != "truncation-incomplete" else 1


def cmd_resolve(args: argparse.Namespace) -> int:
    """Run the resolution loop and emit the trace."""
    trace = resolve(_seed_series(args), _config(args))
    _write(trace.to_text(), args.out)
    if args.out:
        s = trace.summary()
        sys.stdout.write(
            f"nodes {s['nodes']}  depth {s['max_depth']}  "
            f"statuses {json.dumps(s['statuses'], sort_keys=True)}  "
            f"ok {s['ok']}\n")
    return 0 if trace.ok else 1


def cmd_blowup(args: argparse.Namespace) -> int:
    """List the children of one series under all moves."""
    status, G = surface_reduce(_seed_series(args))
    if status == "not-reduced":
        raise DriverError("seed is a perfect p-th power: surface not reduced")
    out = [res.to_json() for res in enumerate_children(G)]
    _write(json.dumps(out, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def cmd_corpus(args: argparse.Namespace) -> int:
    """Resolve a seeded random corpus and report the aggregate verdict."""
    rep = corpus_run([args.p], degree=args.degree, count=args.count,
                     seed=args.seed, cfg=_config(args))
    _write(json.dumps(rep, indent=2, sort_keys=True) + "\n", args.out)
    if args.out:
        sys.stdout.write(f"ok {rep['ok']}  totals "
                         f"{json.dumps(rep['totals'], sort_keys=True)}\n")
    return 0 if rep["ok"] else 1


def _ascii_polygon(F: ResidueSeries) -> str:
    """Text picture of the support: y vertical, z horizontal, holes as o."""
    p = F.tower.p
    poly = newton_polygon(F)
    amax = max(a for a, _ in F.coeffs)
    bmax = max(b for _, b in F.coeffs)
    rows = []
    for a in range(amax, -1, -1):
        cells = []
        for b in range(bmax + 1):
            if (a, b) in F.coeffs:
                cells.append("V" if (a, b) in poly.vertices else "*")
            elif a % p == 0 and b % p == 0:
                cells.append("o")
            else:
                cells.append(".")
        rows.append(f"{a:3d} " + " ".join(cells))
    rows.append("    " + " ".join(f"{b % 10}" for b in range(bmax + 1)))
    rows.append(f"vertices: {list(poly.vertices)}")
    return "\n".join(rows) + "\n"


def _svg_polygon(F: ResidueSeries) -> str:
    """SVG picture: y vertical, z horizontal, holes of p*N^2 as open circles."""
    p = F.tower.p
    poly = newton_polygon(F)
    amax = max(a for a, _ in F.coeffs) + 1
    bmax = max(b for _, b in F.coeffs) + 1
    cell, margin = 28, 40
    width = margin * 2 + bmax * cell
    height = margin * 2 + amax * cell

    def x(b: int) -> int:
        return margin + b * cell

    def y(a: int) -> int:
        return height - margin - a * cell

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{x(0)}" y1="{y(0)}" x2="{x(bmax)}" y2="{y(0)}" '
        'stroke="black" stroke-width="1"/>',
        f'<line x1="{x(0)}" y1="{y(0)}" x2="{x(0)}" y2="{y(amax)}" '
        'stroke="black" stroke-width="1"/>',
        f'<text x="{x(bmax) - 8}" y="{y(0) + 24}" font-size="14">z</text>',
        f'<text x="{x(0) - 24}" y="{y(amax) + 8}" font-size="14">y</text>',
    ]
    chain = list(poly.vertices)
    pts = [f"{x(b)},{y(a)}" for a, b in chain]
    head_a, head_b = chain[0]
    tail_a, tail_b = chain[-1]
    pts.insert(0, f"{x(head_b)},{y(amax)}")
    pts.append(f"{x(bmax)},{y(tail_a)}")
    parts.append(f'<polyline points="{" ".join(pts)}" fill="none" '
                 'stroke="steelblue" stroke-width="2"/>')
    for a in range(0, amax + 1, p):
        for b in range(0, bmax + 1, p):
            parts.append(f'<circle cx="{x(b)}" cy="{y(a)}" r="5" '
                         'fill="none" stroke="gray" stroke-width="1"/>')
    for a, b in sorted(F.coeffs):
        parts.append(f'<circle cx="{x(b)}" cy="{y(a)}" r="4" fill="black"/>')
    for a, b in chain:
        parts.append(f'<circle cx="{x(b)}" cy="{y(a)}" r="6" fill="none" '
                     'stroke="black" stroke-width="1.5"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_render(args: argparse.Namespace) -> int:
    """Draw the Newton polygon of one series."""
    F = _seed_series(args)
    if F.is_zero():
        raise SeriesError("cannot render the zero series")
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(_svg_polygon(F))
        sys.stdout.write(f"wrote {args.svg}\n")
    else:
        _write(_ascii_polygon(F), args.out)
    return 0


def _add_common(sub: argparse.ArgumentParser, series: bool = True) -> None:
    if series:
        sub.add_argument("series", help="polynomial text in y and z")
    sub.add_argument("--p", type=int, required=True, help="characteristic")
    sub.add_argument("--ext", type=int, default=1,
                     help="coefficient field degree over the prime field")
    sub.add_argument("--K", type=int, default=None,
                     help="shift degree bound for searches")
    sub.add_argument("--r", type=int, default=None,
                     help="restrict search roots to the subfield F_{p^r}")
    sub.add_argument("--trunc", type=int, default=None,
                     help="working truncation order")
    sub.add_argument("--out", default=None, help="output file (default stdout)")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="polyres",
        description="Newton-polygon invariants and blowup resolution for "
                    "surfaces x^p = F(y, z) in characteristic p.")
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("invariant", help="measure one series")
    _add_common(sp)
    sp.add_argument("--invariant", choices=["height", "dorder", "both"],
                    default="both", help="which invariant vector to print")
    sp.set_defaults(func=cmd_invariant)

    sp = subs.add_parser("resolve", help="run the blowup loop on one seed")
    _add_common(sp)
    sp.add_argument("--depth", type=int, default=64, help="maximum tree depth")
    sp.set_defaults(func=cmd_resolve)

    sp = subs.add_parser("blowup", help="list the children of one series")
    _add_common(sp)
    sp.set_defaults(func=cmd_blowup)

    sp = subs.add_parser("corpus", help="resolve a seeded random corpus")
    _add_common(sp, series=False)
    sp.add_argument("--count", type=int, required=True,
                    help="number of accepted seeds")
    sp.add_argument("--seed", type=int, required=True,
                    help="corpus generator seed")
    sp.add_argument("--degree", type=int, default=10,
                    help="maximum seed total degree")
    sp.add_argument("--depth", type=int, default=64, help="maximum tree depth")
    sp.set_defaults(func=cmd_corpus)

    sp = subs.add_parser("render", help="draw the Newton polygon")
    _add_common(sp)
    sp.add_argument("--svg", default=None, help="write an SVG file")
    sp.set_defaults(func=cmd_render)

    args = parser.parse_args(argv)
    if not hasattr(args, "depth"):
        args.depth = 64
    try:
        return args.func(args)
    except _ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
