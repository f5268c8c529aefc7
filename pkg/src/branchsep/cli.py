"""Command-line front end.

Subcommands: polygon, branches, valuate, recenter, separate, verify-props,
replay.  All numeric I/O is exact (rationals as p/q, never decimals); any
random seed in play is recorded in the output so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from . import errors
from .branches import newton_puiseux
from .parser import parse_curvette, parse_series, parse_zpoly
from .polygon import build as build_polygon, initial_form_edge
from .props import ALL_PROPS, run_all
from .separation import (certificate_from_text, certificate_to_text,
                         decide_separation, parse_instance, replay)
from .series import INF
from .valuation import Curvette, nu_gamma, recenter
from .zpoly import ZPoly

EXIT_OK = 0
EXIT_VIOLATED = 2
EXIT_NOT_GOOD_POSITION = 3
EXIT_UNDECIDED = 4
EXIT_PARSE = 5
EXIT_DOMAIN = 6
EXIT_CHECK_FAILED = 7

_VERDICT_CODES = {
    "same-component": EXIT_OK,
    "hypothesis-violated": EXIT_VIOLATED,
    "not-good-position": EXIT_NOT_GOOD_POSITION,
    "undecided": EXIT_UNDECIDED,
}


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _split_keyed(text: str) -> dict:
    """'key: value' lines with '#' comments; repeated keys collect lists."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise errors.ParseError("expected 'key: value'", line=lineno)
        key, value = [p.strip() for p in line.split(":", 1)]
        out.setdefault(key, []).append(value)
    return out


def cmd_polygon(args) -> int:
    g = parse_zpoly(_read(args.input).strip())
    poly = build_polygon(g)
    print(f"polynomial: {g}")
    print("points:", " ".join(f"({i}, {v})" for i, v in poly.points))
    print("hull:", " ".join(f"({i}, {v})" for i, v in poly.hull))
    for e in poly.edges:
        in_l, residual = initial_form_edge(g, e)
        res_text = " ".join(str(c) for c in residual)
        print(f"edge: ({e.i}, {e.vi}) -> ({e.j}, {e.vj}) | slope {e.slope} | "
              f"initial form {in_l} | residual [{res_text}]")
    if not poly.edges:
        print("edge: none (single vertex)")
    if args.svg:
        _write(args.svg, _polygon_svg(poly))
        print(f"svg: {args.svg}")
    return EXIT_OK


def _polygon_svg(poly) -> str:
    pts = [(float(i), float(v)) for i, v in poly.hull
           if not isinstance(v, tuple)]
    if not pts:
        return "<svg xmlns='http://www.w3.org/2000/svg'/>\n"
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    w, h, pad = 360, 240, 24
    sx = (w - 2 * pad) / max(max(xs) - min(xs), 1e-9)
    sy = (h - 2 * pad) / max(max(ys) - min(ys), 1e-9)

    def map_pt(p):
        return (pad + (p[0] - min(xs)) * sx, h - pad - (p[1] - min(ys)) * sy)

    path = " ".join(f"{x:.1f},{y:.1f}" for x, y in map(map_pt, pts))
    dots = "".join(
        f"<circle cx='{x:.1f}' cy='{y:.1f}' r='3' fill='black'/>"
        for x, y in map(map_pt, pts))
    return ("<svg xmlns='http://www.w3.org/2000/svg' "
            f"width='{w}' height='{h}'>\n"
            f"<polyline points='{path}' fill='none' stroke='black'/>\n"
            f"{dots}\n</svg>\n")


def cmd_branches(args) -> int:
    g = parse_zpoly(_read(args.input).strip())
    target = Fraction(args.target_order) if args.target_order else None
    bs = newton_puiseux(g, target, args.denominator_bound)
    print(f"polynomial: {g}")
    for b in bs:
        kind = "real" if b.is_real else "complex"
        resid = "INF" if b.residual_order is INF else str(b.residual_order)
        print(f"branch: {b.phi} | {kind} | multiplicity {b.multiplicity} | "
              f"residual order >= {resid}")
    return EXIT_OK


def cmd_valuate(args) -> int:
    fields = _split_keyed(_read(args.input))
    if "f" not in fields:
        raise errors.ParseError("valuation request needs an 'f:' line")
    comp_lines = []
    for key, values in fields.items():
        if key.startswith("gamma."):
            comp_lines.append(f"{key.split('.', 1)[1]} = {values[0]}")
    gamma = parse_curvette("\n".join(comp_lines))
    from .parser import parse_xpoly
    f = parse_xpoly(fields["f"][0])
    env = {n: s for n, s in gamma.components}
    val = f.eval_series(env)
    order = "INF" if not val.terms and val.is_exact() else str(val.order())
    print(f"f: {f}")
    print(f"value: {order}")
    print(f"series: {val}")
    if val.terms:
        sign = gamma.sign_of_series(val)
        print(f"sign: {'+' if sign > 0 else '-'}")
    return EXIT_OK


def cmd_recenter(args) -> int:
    fields = _split_keyed(_read(args.input))
    if "g" not in fields:
        raise errors.ParseError("recenter request needs at least one 'g:' line")
    gs = [parse_zpoly(text) for text in fields["g"]]
    comp_lines = [f"{k.split('.', 1)[1]} = {v[0]}" for k, v in fields.items()
                  if k.startswith("gamma.")]
    gamma = parse_curvette("\n".join(comp_lines))
    res = recenter(gs, gamma, stage2=args.stage2)
    print(f"phi: {res.phi}")
    for i, entry in enumerate(res.entries):
        print(f"g[{i}]: nu_z {entry.nu_z_before} -> {entry.nu_z_after} | "
              f"value {entry.nu_value} | delta {entry.delta_before} -> {entry.delta_after}")
    print(f"steps: {len(res.steps)}")
    if args.stage2:
        print(f"phi_star: {res.phi_star}")
        print(f"deltas_after_stage2: {' '.join(str(d) for d in res.star_deltas)}")
    return EXIT_OK


def cmd_separate(args) -> int:
    inst = parse_instance(_read(args.input))
    if args.seed is not None:
        from dataclasses import replace
        inst = replace(inst, seed=args.seed)
    cert = decide_separation(inst)
    text = certificate_to_text(cert)
    _write(args.output, text)
    if args.output not in (None, "-"):
        print(f"verdict: {cert.verdict}")
    return _VERDICT_CODES.get(cert.verdict, EXIT_UNDECIDED)


def cmd_verify_props(args) -> int:
    scale = Fraction(args.scale)
    results = run_all(args.seed, scale)
    print(f"seed: {args.seed}")
    print(f"scale: {scale}")
    ok = True
    for r in results:
        print(r.line())
        for f in r.failures[: args.max_failures]:
            print(f"    {f}")
        ok = ok and r.ok
    print("result:", "all properties hold" if ok else "FAILURES FOUND")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_replay(args) -> int:
    cert = certificate_from_text(_read(args.input))
    rep = replay(cert)
    print(f"checks: {rep.passed}/{rep.total} passed")
    for c, got in rep.failures:
        print(f"MISMATCH {c.label} [{c.curvette}] {c.expr} {c.op} {c.value}: got {got}")
    return EXIT_OK if rep.ok else EXIT_CHECK_FAILED


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="branchsep",
        description="Exact Newton-polygon/valuation calculus on Puiseux branches "
                    "and separation certificates.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("polygon", help="Newton polygon of a z-t polynomial")
    p.add_argument("input", help="file with one polynomial expression, or -")
    p.add_argument("--svg", help="write an SVG rendering of the hull")
    p.set_defaults(func=cmd_polygon)

    p = sub.add_parser("branches", help="Newton-Puiseux branch expansion")
    p.add_argument("input")
    p.add_argument("--target-order", help="truncation exponent (rational)")
    p.add_argument("--denominator-bound", type=int, default=64)
    p.set_defaults(func=cmd_branches)

    p = sub.add_parser("valuate", help="value of a polynomial along a curvette")
    p.add_argument("input", help="file with f: and gamma.<var>: lines")
    p.set_defaults(func=cmd_valuate)

    p = sub.add_parser("recenter", help="align the weighted minimum with the value")
    p.add_argument("input", help="file with g: lines and gamma.<var>: lines")
    p.add_argument("--stage2", action="store_true",
                   help="also drive every initial degree to zero")
    p.set_defaults(func=cmd_recenter)

    p = sub.add_parser("separate", help="decide and certify strong separation")
    p.add_argument("input", help="instance file")
    p.add_argument("-o", "--output", help="certificate path (default stdout)")
    p.add_argument("--seed", type=int, help="record this seed in the certificate")
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("verify-props", help="run the randomized invariant suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", default="1/4",
                   help="trial-count multiplier against the full suite")
    p.add_argument("--max-failures", type=int, default=5)
    p.set_defaults(func=cmd_verify_props)

    p = sub.add_parser("replay", help="re-check every comparison in a certificate")
    p.add_argument("input", help="certificate file")
    p.set_defaults(func=cmd_replay)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except errors.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except errors.BranchSepError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
