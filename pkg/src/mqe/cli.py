"""Command-line interface.

Exit codes: 0 success, 1 a requested check failed, 2 usage or input error.
Set MQE_D5MAX to change the default truncation (d5max = 5 * degree).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction
from typing import Sequence

from . import amodel, bmodel, verify
from .errors import MQEError, SingularWeights
from .rings.series import CohomologySeries, LogSeries, frac_str
from .sectors import Sector, enumerate_sectors

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def default_d5max() -> int:
    raw = os.environ.get("MQE_D5MAX")
    if raw is None:
        return 50
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"MQE_D5MAX must be an integer, got {raw!r}") from None
    if value < 0:
        raise UsageError("MQE_D5MAX must be nonnegative")
    return value


def _sector(text: str) -> Sector:
    return Sector.parse(text)


def _weights(text: str) -> tuple[Fraction, ...]:
    try:
        lam = tuple(Fraction(x) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"cannot parse weights {text!r}") from None
    if len(lam) != 5:
        raise argparse.ArgumentTypeError("weights need exactly five entries")
    if len(set(lam)) != 5:
        raise argparse.ArgumentTypeError("weights must be pairwise distinct")
    return lam


def _order(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("order must be nonnegative")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="mqe", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sectors", parents=[common], help="list inertia sectors")
    s.add_argument("--space", choices=("y", "w", "Y", "W"), default="w")
    s.add_argument("--age", type=int)

    for name, helptext in (
        ("jy", "J^Y_g"),
        ("ia", "I^A_g"),
        ("ib", "I^B_g"),
        ("jw", "J^W_g in the t-coordinate"),
    ):
        q = sub.add_parser(name, parents=[common], help=f"print {helptext}")
        q.add_argument("--sector", type=str, required=True)
        q.add_argument("--order", type=_order)

    m = sub.add_parser("mirror-map", parents=[common], help="print F0, G0, G_g and tau")
    m.add_argument("--order", type=_order)

    pf = sub.add_parser("pf", parents=[common], help="Picard-Fuchs operators")
    pfs = pf.add_subparsers(dest="pf_command", required=True)
    d = pfs.add_parser("derive", parents=[common])
    d.add_argument("--sector", type=str, required=True)
    d.add_argument("--strategy", choices=bmodel.STRATEGIES, default="leftmost")
    v = pfs.add_parser("verify", parents=[common])
    v.add_argument("--sector", type=str, required=True)
    v.add_argument("--order", type=_order)

    c = sub.add_parser("compare", parents=[common], help="I^A = I^B over all shapes")
    c.add_argument("--order", type=_order)

    ch = sub.add_parser("check", parents=[common], help="verification suite")
    chs = ch.add_subparsers(dest="check_command", required=True)
    a = chs.add_parser("all", parents=[common])
    a.add_argument("--order", type=_order)
    a.add_argument("--cmax", type=int, default=15)

    r = sub.add_parser("recursion", parents=[common], help="fixed-point recursion check")
    r.add_argument("--sector", type=str, required=True)
    r.add_argument("--weights", type=_weights)
    r.add_argument("--cmax", type=int, default=15)
    return p


def _emit(args, payload, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _series_text(s: CohomologySeries) -> str:
    lines = [f"space={s.space} d5max={s.d5max}"]
    for (g, d5, p), v in s.items():
        lines.append(f"{g}  d5={d5}  H^{p}  {v}")
    return "\n".join(lines)


def _logseries_text(s: LogSeries) -> str:
    return str(s)


def cmd_sectors(args) -> int:
    space = args.space.upper()
    rows = [g for g in enumerate_sectors(space) if args.age is None or g.age == args.age]
    payload = [
        {"sector": str(g), "age": frac_str(g.age), "dim": g.dim(space)} for g in rows
    ]
    text = "\n".join(f"{g}  age={g.age}  dim={g.dim(space)}" for g in rows)
    text += f"\n{len(rows)} sectors"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_series(args) -> int:
    g = _sector(args.sector)
    n = args.order if args.order is not None else default_d5max()
    fn = {"jy": amodel.jY, "ia": amodel.iA, "ib": bmodel.iB, "jw": amodel.jW}[args.command]
    s = fn(g, n)
    _emit(args, amodel.series_json(s), _series_text(s))
    return EXIT_OK


def cmd_mirror_map(args) -> int:
    n = args.order if args.order is not None else default_d5max()
    md = amodel.extract_mirror_data(n)
    shapes = {}
    for g in sorted(md.Gg):
        shapes.setdefault(tuple(sorted(g.residues)), g)
    lines = [f"F0 = {md.F0}", f"G0 = {md.G0}", f"tau = t + {md.tau}"]
    for shape, g in sorted(shapes.items()):
        lines.append(f"G_g[{g}] = {md.Gg[g]}  (shared by all permutations)")
    _emit(args, md.to_json(), "\n".join(lines))
    return EXIT_OK


def cmd_pf(args) -> int:
    g = _sector(args.sector)
    if args.pf_command == "derive":
        res = bmodel.derive_pf(g, strategy=args.strategy)
        fact = verify.factored_str(res.operator_t)
        text = f"sector {g}  order {res.order}\n{fact or res.operator_t}"
        if fact:
            text += f"\nexpanded: {res.operator_t}"
        _emit(args, res.to_json(), text)
        return EXIT_OK
    n = args.order if args.order is not None else default_d5max()
    res = bmodel.derive_pf(g)
    reports = [verify.match_reference_operator(res), verify.pf_annihilates(res.operator_t, g, n)]
    return _emit_reports(args, reports)


def _emit_reports(args, reports: Sequence[verify.VerificationReport]) -> int:
    reports = sorted(reports, key=lambda r: r.check)
    _emit(args, [r.to_json() for r in reports], "\n".join(str(r) for r in reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_compare(args) -> int:
    n = args.order if args.order is not None else default_d5max()
    return _emit_reports(args, [verify.compare_ab(g, n) for g in verify.SHAPES])


def cmd_check(args) -> int:
    n = args.order if args.order is not None else default_d5max()
    return _emit_reports(args, verify.run_all(n, seed=args.seed, c_max=args.cmax))


def cmd_recursion(args) -> int:
    g = _sector(args.sector)
    rng = random.Random(args.seed)
    lam = args.weights if args.weights is not None else tuple(Fraction(i) for i in range(5))
    retries = 0
    while True:
        ctx = amodel.EquivariantContext(lam)
        try:
            bad: list = []
            ok = amodel.check_recursion(g, ctx, args.cmax, report=bad)
            break
        except SingularWeights as exc:
            if args.weights is not None:
                raise
            retries += 1
            print(f"weights {','.join(map(str, lam))} are singular ({exc}); retrying", file=sys.stderr)
            lam = verify.random_weights(rng).lambdas
    payload = {
        "sector": str(g),
        "weights": [frac_str(x) for x in lam],
        "cmax": args.cmax,
        "status": "pass" if ok else "fail",
        "retries": retries,
        "mismatches": [{"i": i, "c": c} for i, c, _, _ in bad],
    }
    text = f"recursion[{g}] weights={','.join(map(str, lam))} cmax={args.cmax}: {payload['status']}"
    for i, c, lhs, rhs in bad:
        text += f"\n  i={i} Q^{c}: {lhs} != {rhs}"
    _emit(args, payload, text)
    return EXIT_OK if ok else EXIT_FAIL


HANDLERS = {
    "sectors": cmd_sectors,
    "jy": cmd_series,
    "ia": cmd_series,
    "ib": cmd_series,
    "jw": cmd_series,
    "mirror-map": cmd_mirror_map,
    "pf": cmd_pf,
    "compare": cmd_compare,
    "check": cmd_check,
    "recursion": cmd_recursion,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return HANDLERS[args.command](args)
    except (MQEError, UsageError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
