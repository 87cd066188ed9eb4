"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 missing fixture.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import surgery as sg
from .compare import compare_table, lens_table, parse_range
from .errors import AxiomFailure, BadInput, InvalidSystem, SchemaError, TVOError
from .fixtures import MissingFixture, fixture_path, load_table
from .fusion.builtins import builtin_system
from .fusion.io import load_system
from .fusion.system import validate_system
from .modular import conjugate, dumps, fmt, load, validate_verlinde_axioms

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_MISSING = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _err(msg):
    print(f"tvo: {msg}", file=sys.stderr)


# ----------------------------------------------------------------------------------
# input resolution
# ----------------------------------------------------------------------------------

def _system(arg, tol):
    if arg.startswith("builtin:"):
        try:
            fs = builtin_system(arg[len("builtin:"):])
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        if not Path(arg).exists():
            raise UsageError(f"no such file: {arg}")
        fs = load_system(arg)
    if tol is not None:
        fs.tolerance = tol
    return fs


def _data(args):
    """Modular data from a path, or from a shipped fixture name such as ``haagerup``."""
    src = args.data
    path = Path(src)
    if not path.exists():
        if path.suffix or "/" in src:
            raise UsageError(f"no such file: {src}")
        path = fixture_path(src)  # raises MissingFixture
    md = load(path, strict=args.strict)
    if getattr(md, "warning", False):
        _err(f"warning: {src} fails some modular axioms (use --strict to reject)")
    if args.conjugate:
        md = conjugate(md)
    return md


def _convention(args):
    return "conjugated" if args.conjugate else "as-is"


# ----------------------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------------------

def cmd_validate_system(args):
    try:
        fs = _system(args.file, args.tol)
    except InvalidSystem as exc:
        print(str(exc))
        return EXIT_INVALID
    rep = validate_system(fs)
    print(rep.format())
    return EXIT_OK if rep.valid else EXIT_INVALID


def cmd_derive_modular(args):
    from .tube import build_tube, center, modular_data_from_tube, dump_json, tube_inner_orthonormality_check

    fs = _system(args.file, args.tol)
    rep = validate_system(fs)
    if not rep.valid:
        print(rep.format(), file=sys.stderr)
        return EXIT_INVALID
    t = build_tube(fs)
    if args.dump_tube:
        Path(args.dump_tube).write_text(dump_json(t) + "\n", encoding="utf-8")
    c = center(t, seed=args.seed)
    md = modular_data_from_tube(t, c, name=args.name)
    md.provenance = {"source": "tube algebra center", "system": fs.name, "seed": args.seed}
    orth = tube_inner_orthonormality_check(t, c, md)
    if not orth.valid:
        print(orth.format(), file=sys.stderr)
        return EXIT_INVALID
    if args.conjugate:
        md = conjugate(md)
    text = dumps(md)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8", newline="\n")
        print(f"wrote {args.output}: rank {md.rank}, lambda {fmt(md.lam)}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_validate_modular(args):
    path = Path(args.file)
    if not path.exists():
        raise UsageError(f"no such file: {args.file}")
    try:
        md = load(path, strict=False)
    except SchemaError as exc:
        print(f"schema error: {exc}")
        return EXIT_INVALID
    rep = validate_verlinde_axioms(md, args.tol)
    print(rep.format())
    if not rep.valid or (args.strict and rep.warnings):
        return EXIT_INVALID
    return EXIT_OK


def cmd_invariant(args):
    md = _data(args)
    kind = args.kind
    nums = args.numbers
    if kind == "lens":
        if len(nums) != 2:
            raise UsageError("invariant lens needs P Q")
        p, q = nums
        pres = sg.Chain((1,)) if (p, q) == (1, 0) else sg.Chain(tuple(sg.continued_fraction(p, q)))
        value, name = sg.lens_invariant(md, p, q), f"L({p},{q})"
    elif kind == "brieskorn":
        if len(nums) != 3:
            raise UsageError("invariant brieskorn needs P Q R")
        pres = sg.Star(1, tuple(nums))
        value, name = sg.brieskorn_invariant(md, *nums), "Sigma({},{},{})".format(*nums)
    elif kind == "star":
        if len(nums) < 2:
            raise UsageError("invariant star needs Q P1 .. PR")
        pres = sg.Star(nums[0], tuple(nums[1:]))
        value = sg.star_invariant(md, nums[0], nums[1:])
        name = f"star({nums[0]};{','.join(map(str, nums[1:]))})"
    else:
        if not nums:
            raise UsageError("invariant chain needs at least one coefficient")
        pres = sg.Chain(tuple(nums))
        value, name = sg.chain_invariant(md, nums), f"chain[{','.join(map(str, nums))}]"
    rec = sg.InvariantValue(value, pres, md.name, _convention(args), name)
    print(rec.to_json())
    return EXIT_OK


def cmd_table(args):
    md = _data(args)
    ps = parse_range(args.p)
    qs = "all" if args.q == "all" else parse_range(args.q)
    rows = lens_table(md, ps, qs)
    out = sys.stdout
    if args.format == "json":
        recs = [sg.InvariantValue(r["value"], sg.Chain(tuple(r["coefficients"])), md.name,
                                  _convention(args), r["manifold"]).to_json() for r in rows]
        out.write("[\n" + ",\n".join(" " + r for r in recs) + "\n]\n")
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "q", "manifold", "re", "im"])
        for r in rows:
            w.writerow([r["p"], r["q"], r["manifold"], fmt(r["value"].real), fmt(r["value"].imag)])
        out.write(buf.getvalue())
    else:
        out.write(f"| manifold | Z ({md.name}, {_convention(args)}) |\n|---|---|\n")
        for r in rows:
            v = r["value"]
            out.write(f"| {r['manifold']} | {v.real:.6f} {'+' if v.imag >= 0 else '-'} {abs(v.imag):.6f}i |\n")
    return EXIT_OK


def cmd_compare(args):
    table = load_table(args.fixture)  # raises MissingFixture
    md = _data(args)
    tol = args.tol if args.tol is not None else 1e-8
    cmp = compare_table(md, table, tol=tol, convention=args.convention)
    print(cmp.format())
    print(f"max deviation: {cmp.max_deviation:.3e}")
    print(f"convention: {cmp.convention}")
    return EXIT_INVALID if cmp.unexpected_failures else EXIT_OK


# ----------------------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    def flags(parser, suppress):
        kw = {"default": argparse.SUPPRESS} if suppress else {}
        parser.add_argument("--tol", type=float, help="comparison tolerance (default 1e-9)",
                            **(kw or {"default": None}))
        parser.add_argument("--strict", action="store_true", help="promote warnings to errors", **kw)
        parser.add_argument("--conjugate", action="store_true", help="conjugate loaded modular data", **kw)

    # global flags may appear before or after the subcommand; the subcommand copy must not
    # overwrite a value given before it, hence SUPPRESS there
    common = argparse.ArgumentParser(add_help=False)
    flags(common, suppress=True)
    ap = argparse.ArgumentParser(prog="tvo", description="Tube algebras, modular data and surgery invariants.")
    flags(ap, suppress=False)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-system", parents=[common],
                       help="check a fusion-system file (or builtin:NAME)")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate_system)

    p = sub.add_parser("derive-modular", parents=[common],
                       help="fusion system -> tube algebra -> modular data")
    p.add_argument("file", help="fusion-system JSON or builtin:NAME (trivial, fibonacci, ising, vec:N:K, ty:N:Q:SIGN)")
    p.add_argument("-o", "--output")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--name", default=None)
    p.add_argument("--dump-tube", metavar="PATH", help="write a diagnostic tube listing")
    p.set_defaults(func=cmd_derive_modular)

    p = sub.add_parser("validate-modular", parents=[common], help="check a modular-data file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate_modular)

    p = sub.add_parser("invariant", parents=[common], help="evaluate one invariant")
    p.add_argument("kind", choices=["lens", "brieskorn", "star", "chain"])
    p.add_argument("numbers", nargs="*", type=int)
    p.add_argument("--data", required=True, help="modular-data file or shipped fixture name")
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("table", parents=[common], help="tabulate lens-space invariants")
    p.add_argument("kind", choices=["lens"])
    p.add_argument("--p", default="1..12", help="e.g. 1..12 or 3,5,7")
    p.add_argument("--q", default="all", help="'all' or a list/range")
    p.add_argument("--data", required=True)
    p.add_argument("--format", choices=["json", "csv", "markdown"], default="json")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("compare", parents=[common], help="compare against a published value table")
    p.add_argument("--data", required=True)
    p.add_argument("--fixture", required=True, help="value table name, e.g. haagerup_table")
    p.add_argument("--convention", choices=["as-is", "conjugated"], default=None,
                   help="force one orientation convention instead of choosing")
    p.set_defaults(func=cmd_compare)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except MissingFixture as exc:
        _err(f"skip: {exc}")
        return EXIT_MISSING
    except (UsageError, BadInput) as exc:
        _err(str(exc))
        return EXIT_USAGE
    except AxiomFailure as exc:
        _err(f"modular axioms fail: {sorted(exc.axioms)}")
        return EXIT_INVALID
    except (SchemaError, TVOError) as exc:
        _err(str(exc))
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
