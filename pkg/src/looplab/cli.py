"""Command-line entry point: ``looplab <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import calibrate, fpl, hamiltonian, links, verify


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _point(args) -> dict[str, Fraction] | None:
    point = {k: getattr(args, k) for k in ("a", "b") if getattr(args, k, None) is not None}
    return point or None


def _workers() -> int | None:
    value = os.environ.get("LOOPLAB_WORKERS")
    return int(value) if value else None


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(data, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(data, indent=1) + "\n"
    if isinstance(data, dict):
        return "".join(f"{k}\t{v}\n" for k, v in data.items())
    return "".join(f"{row}\n" for row in data)


def cmd_basis(args) -> int:
    sector = args.sector or hamiltonian.default_sector(args.mode)
    words = list(links.enumerate_basis(args.L, sector))
    _emit(_dump(words, args.format), args.out)
    return 0


def cmd_hamiltonian(args) -> int:
    h = hamiltonian.build_hamiltonian(args.L, args.mode, args.sector)
    basis = links.enumerate_basis(args.L, args.sector or hamiltonian.default_sector(args.mode))
    point = _point(args)
    if point:
        rows = [[str(x) for x in row] for row in h.evaluate(point)]
    else:
        rows = [[str(h.entries.get((i, j), "0")) for j in range(h.cols)] for i in range(h.rows)]
    if args.format == "json":
        text = json.dumps({"basis": list(basis), "matrix": rows}, indent=1) + "\n"
    else:
        text = "".join("\t".join(row) + "\n" for row in rows)
    _emit(text, args.out)
    return 0


def cmd_groundstate(args) -> int:
    psi = hamiltonian.ground_state(args.L, args.mode)
    point = _point(args)
    data = {k: str(v.evaluate(point) if point else v) for k, v in psi.items()}
    _emit(_dump(data, args.format), args.out)
    return 0


def cmd_fpl(args) -> int:
    if args.patch:
        spec = fpl.PatchSpec.load(args.patch)
    else:
        if args.L is None:
            raise SystemExit("fpl needs --L or --patch")
        spec = calibrate.canonical_patch(args.mode, args.L)
    configs = fpl.enumerate_fpl(spec, workers=_workers())
    vec = fpl.generating_vector(spec, configs)
    data = {"configs": len(configs), "generating_vector": fpl.generating_vector_records(vec)}
    if args.format == "json":
        text = json.dumps(data, indent=1) + "\n"
    else:
        text = f"configs\t{len(configs)}\n" + _dump(data["generating_vector"], "table")
    _emit(text, args.out)
    return 0


def cmd_calibrate(args) -> int:
    if args.save:
        data = calibrate.write_canonical()
        text = json.dumps(data, indent=1, sort_keys=True) + "\n"
        _emit(text, args.out)
        return 0 if not data["unresolved"] else 1
    kind = calibrate.patch_kind(args.mode, args.L) if args.L is not None else args.kind
    try:
        recipe = calibrate.calibrate_recipe(kind)
    except calibrate.CalibrationError as exc:
        sys.stderr.write(f"{exc}\n")
        return 1
    if args.L is not None:
        _emit(recipe.build(args.L).dumps() + "\n", args.out)
    else:
        _emit(json.dumps(recipe.to_json(), indent=1) + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    points = ()
    if args.a is not None:
        points = ((args.a, args.b if args.b is not None else Fraction(1)),)
    try:
        cfg = verify.RunConfig(
            suite=args.suite,
            L_min=args.L[0] if args.L else None,
            L_max=args.L[-1] if args.L else None,
            mode=args.mode,
            points=points,
            kmax=args.kmax,
            tol=args.tol,
            fmt=args.format,
            out=args.out,
            action=verify.corrupted_action if args.corrupt else None,
        )
    except verify.UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    report = verify.run_suite(cfg)
    text = report.render()
    _emit(text, args.out)
    if args.out:
        with open(args.out + ".runtimes.json", "w") as fh:
            json.dump(report.runtimes, fh, indent=1, sort_keys=True)
            fh.write("\n")
        s = report.summary()
        sys.stdout.write(f"{s['pass']} passed, {s['fail']} failed, {s['skipped']} skipped\n")
    return report.exit_status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="looplab", description="Loop model ground states and FPL checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_L=True):
        p.add_argument("--L", type=int, required=need_L)
        p.add_argument("--mode", choices=("one", "two"), default="one")
        p.add_argument("--format", choices=("table", "json", "csv"), default="table")
        p.add_argument("--out")

    p = sub.add_parser("basis", help="list link patterns")
    common(p)
    p.add_argument("--sector", choices=[s.value for s in links.Sector])
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("hamiltonian", help="print the Hamiltonian matrix")
    common(p)
    p.add_argument("--sector", choices=[s.value for s in links.Sector])
    p.add_argument("--a", type=_fraction)
    p.add_argument("--b", type=_fraction)
    p.set_defaults(func=cmd_hamiltonian)

    p = sub.add_parser("groundstate", help="exact ground state keyed by pattern")
    common(p)
    p.add_argument("--a", type=_fraction)
    p.add_argument("--b", type=_fraction)
    p.set_defaults(func=cmd_groundstate)

    p = sub.add_parser("fpl", help="enumerate a patch and print its generating vector")
    common(p, need_L=False)
    p.add_argument("--patch", help="patch spec JSON file")
    p.set_defaults(func=cmd_fpl)

    p = sub.add_parser("calibrate", help="search for patch boundary conditions")
    common(p, need_L=False)
    p.add_argument("--kind", choices=calibrate.KINDS, default="one")
    p.add_argument("--save", action="store_true", help="rerun every calibration and store the recipes")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", default="all")
    p.add_argument("--L", type=int, nargs="+", help="size, or min and max")
    p.add_argument("--mode", choices=("one", "two"))
    p.add_argument("--a", type=_fraction)
    p.add_argument("--b", type=_fraction)
    p.add_argument("--kmax", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.add_argument("--out")
    p.add_argument("--corrupt", action="store_true", help="replace e1 by the identity (negative-path run)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "sector", None):
        args.sector = links.as_sector(args.sector)
    if args.command == "verify" and args.L and len(args.L) > 2:
        sys.stderr.write("usage error: --L takes one or two values\n")
        return 2
    try:
        return args.func(args)
    except calibrate.CalibrationError as exc:
        sys.stderr.write(f"{exc}\n")
        return 1
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
