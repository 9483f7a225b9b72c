"""Command line front end: ``cfk11 {compute,family,upsilon,export,compare}``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from fractions import Fraction

from .complex import (CFKComplex, NotS3Homology, StabilizationFailure, build_complex,
                      decompose, simplify_basis, staircase_shape)
from .diagram import DiagramError, NotS3, SchemaError, load_diagram, serialize_diagram
from .domains import WindowTooSmall, build_arrangement, connecting_domain
from .families import FamilySpec, build_family
from .invariants import (alexander_polynomial, determinant, fmt_rational, fox_milnor_square_test,
                         hfk_ranks, is_convex, is_thin, lspace_obstructions, tau, upsilon)

EXIT_VALIDATION, EXIT_S3, EXIT_STABILIZATION = 2, 3, 4


def _write(path: str | None, text: str) -> None:
    """Write atomically: a temporary file in the target directory, then rename."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _complex_for(path: str, args) -> CFKComplex:
    d = load_diagram(path)
    return build_complex(d, window=args.window, max_window=args.max_window)


def report(c: CFKComplex) -> dict:
    ups = upsilon(c)
    poly = alexander_polynomial(c)
    comps = decompose(simplify_basis(c))
    stairs = [k for k in comps if k.kind == "staircase"]
    ls = lspace_obstructions(c)
    return {
        "diagram_name": c.meta.get("name", ""),
        "generator_count": c.size,
        "arrows": [{"from": a.source, "to": a.target, "n_z": a.n_z, "n_w": a.n_w} for a in c.arrows],
        "gradings": {l: {"A": a, "M": m} for l, a, m in zip(c.labels, c.A, c.M)},
        "hfk_table": [{"M": m, "A": a, "rank": r} for (m, a), r in hfk_ranks(c).items()],
        "alexander": {"min_exponent": poly.min_exponent,
                      "coefficients": [poly.coefficients.get(e, 0)
                                       for e in range(poly.min_exponent, poly.max_exponent + 1)]},
        "determinant": determinant(poly),
        "tau": tau(ups),
        "upsilon_breakpoints": [[fmt_rational(t), fmt_rational(v)] for t, v in ups.points],
        "verdicts": {"convex": is_convex(ups), "thin": is_thin(c),
                     "lspace_coeffs_pm1": ls.coeffs_pm1, "lspace_staircase": ls.single_staircase},
        "decomposition": {"staircase_length": sum(k.size for k in stairs),
                          "box_count": sum(k.kind == "box" for k in comps),
                          "other_count": sum(k.size for k in comps if k.kind == "other")},
        "engine": {"window": c.meta.get("window"), "effective_window": c.meta.get("effective_window"),
                   "stabilization_passes": c.meta.get("stabilization_passes")},
    }


def _summary(r: dict) -> str:
    return (f"{r['diagram_name'] or 'diagram'}: {r['generator_count']} generators, "
            f"{len(r['arrows'])} arrows, det {r['determinant']}, tau {r['tau']}, "
            f"convex {r['verdicts']['convex']}, thin {r['verdicts']['thin']}, "
            f"{r['decomposition']['box_count']} boxes\n")


def cmd_compute(args) -> int:
    c = _complex_for(args.input, args)
    r = report(c)
    if args.debug_domains:
        cc = build_arrangement(load_diagram(args.input))
        r["domains"] = [connecting_domain(g.beta_index, 0, cc).to_json() for g in cc.generators]
    _write(args.report or args.out, _dumps(r))
    if args.report or args.out:
        sys.stderr.write(_summary(r))
    return 0


def cmd_family(args) -> int:
    d = build_family(FamilySpec(args.variant, args.k, args.n))
    _write(args.out, serialize_diagram(d))
    return 0


def cmd_upsilon(args) -> int:
    ups = upsilon(_complex_for(args.input, args))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "upsilon"])
    for i in range(args.samples + 1):
        t = Fraction(2 * i, args.samples)
        w.writerow([fmt_rational(t), fmt_rational(ups(t))])
    w.writerow([])
    w.writerow(["breakpoint_t", "breakpoint_upsilon"])
    for t, v in ups.points:
        w.writerow([fmt_rational(t), fmt_rational(v)])
    _write(args.out, buf.getvalue())
    return 0


def cmd_export(args) -> int:
    c = _complex_for(args.input, args)
    if args.simplify:
        c = simplify_basis(c)
    text = {"json": lambda: _dumps(c.to_json()), "dot": c.to_dot, "tikz": c.to_tikz}[args.format]()
    _write(args.out, text)
    return 0


def cmd_compare(args) -> int:
    c1, c2 = _complex_for(args.a, args), _complex_for(args.b, args)

    def stair(c):
        comps = decompose(simplify_basis(c))
        s = [k for k in comps if k.kind == "staircase"]
        return staircase_shape(s[0].complex) if len(s) == 1 and all(
            k.kind == "box" for k in comps if k is not s[0]) else None

    s1, s2 = stair(c1), stair(c2)
    d1, d2 = determinant(c1), determinant(c2)
    out = {"same_normal_form": s1 is not None and s1 == s2,
           "determinants": [d1, d2],
           "fox_milnor": fox_milnor_square_test(d1, d2)}
    _write(args.out, _dumps(out))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cfk11", description="Knot Floer complexes of (1,1) diagrams.")
    sub = p.add_subparsers(dest="command", required=True)

    def engine(sp):
        sp.add_argument("--window", type=int, default=None,
                        help="fixed window half-width in lattice cells (default: adaptive)")
        sp.add_argument("--max-window", type=int, default=1 << 12,
                        help="cap on the adaptive window half-width")

    sp = sub.add_parser("compute", help="full report for a diagram")
    sp.add_argument("--input", required=True)
    sp.add_argument("--out", default=None)
    sp.add_argument("--report", default=None, help="same as --out")
    sp.add_argument("--debug-domains", action="store_true",
                    help="include the connecting domain of every generator in the report")
    engine(sp)
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("family", help="write the diagram of a family member")
    sp.add_argument("--variant", choices=["3k+1", "3k+2"], required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_family)

    sp = sub.add_parser("upsilon", help="CSV samples and exact breakpoints of Upsilon")
    sp.add_argument("--input", required=True)
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--out", default=None)
    engine(sp)
    sp.set_defaults(func=cmd_upsilon)

    sp = sub.add_parser("export", help="export the complex")
    sp.add_argument("--input", required=True)
    sp.add_argument("--format", choices=["json", "dot", "tikz"], default="json")
    sp.add_argument("--simplify", action="store_true", help="export the reduced complex")
    sp.add_argument("--out", default=None)
    engine(sp)
    sp.set_defaults(func=cmd_export)

    sp = sub.add_parser("compare", help="normal form and Fox-Milnor comparison of two diagrams")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--out", default=None)
    engine(sp)
    sp.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "samples", 1) < 1:
        sys.stderr.write("error: --samples must be positive\n")
        return EXIT_VALIDATION
    try:
        return args.func(args)
    except (NotS3, NotS3Homology) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_S3
    except (DiagramError, SchemaError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    except (StabilizationFailure, WindowTooSmall) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_STABILIZATION
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
