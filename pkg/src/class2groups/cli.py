"""Command line: ``class2groups {info,sweep,check-witness,oracle}``.

Exit codes: 0 when every result agrees with the classification, 1 on a
verified mathematical discrepancy (details are in the report), 2 on usage
errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import report as rep
from .constructions import (
    InapplicableCase,
    WitnessCase,
    applicable_cases,
    center_of_frattini,
    omega1_center_of_frattini,
    verify_witness,
)
from .engine import GroupConstructionError, family_parameters, make_group
from .selftest import run_all
from .structure import (
    center,
    centralizer,
    d_of_group,
    derived_subgroup,
    frattini,
    is_cyclic,
    omega1,
    rank,
)

EXIT_OK, EXIT_DISCREPANCY, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_or_pow(text: str) -> int:
    """Accept ``4096`` or ``2^12``."""
    text = text.strip()
    if "^" in text:
        base, exp = text.split("^", 1)
        return int(base) ** int(exp)
    return int(text)


def _group_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("group", nargs="*", help="FAMILY N [R], e.g. Q1 4 2 or R3 2")
    p.add_argument("--family", choices=("Q1", "Q2", "R3"))
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int)


def _resolve_group(args: argparse.Namespace):
    pos = list(args.group)
    family = args.family or (pos.pop(0) if pos else None)
    try:
        n = args.n if args.n is not None else (int(pos.pop(0)) if pos else None)
        r = args.r if args.r is not None else (int(pos.pop(0)) if pos else None)
    except ValueError as exc:
        raise UsageError(f"bad group parameter: {exc}") from None
    if pos:
        raise UsageError(f"unexpected arguments: {' '.join(pos)}")
    if family is None or n is None:
        raise UsageError("a group needs a family and n (and r for Q1, Q2)")
    try:
        return make_group(family, n, r)
    except (GroupConstructionError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_info(args: argparse.Namespace) -> int:
    G = _resolve_group(args)
    Z = center(G)
    phi = frattini(G)
    zphi = center_of_frattini(G)
    info = {
        "group": G.name,
        "order": G.order,
        "exponent_ranges": [G.Ma, G.Mb, G.Mc],
        "center_order": Z.order,
        "center_cyclic": is_cyclic(Z),
        "frattini_order": phi.order,
        "derived_order": derived_subgroup(G).order,
        "omega1_center_order": omega1(Z).order,
        "center_of_frattini_order": zphi.order,
        "omega1_center_of_frattini_order": omega1_center_of_frattini(G).order,
        "d": d_of_group(G),
        "d_center": rank(Z),
        "d_z_phi": rank(zphi),
        "centralizer_of_z_phi_equals_phi": centralizer(zphi) == phi,
    }
    if args.format == "json":
        text = json.dumps(info, indent=2) + "\n"
    else:
        text = "".join(f"{k}: {v}\n" for k, v in info.items())
    _emit(text, args.out)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    families = tuple(f for part in args.family for f in part.split(",") if f)
    config = rep.SweepConfig(
        families=families,
        max_order=args.max_order,
        mode=args.mode,
        jobs=args.jobs,
        fmt=args.format,
        seed=args.seed,
        timing=not args.no_timing,
    )
    try:
        config.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = rep.sweep(config)
    summary = rep.summarize(rows)
    _emit(rep.render(rows, summary, config.fmt, config.as_dict()), args.out)
    return EXIT_OK if summary["consistent_with_classification"] else EXIT_DISCREPANCY


def cmd_check_witness(args: argparse.Namespace) -> int:
    G = _resolve_group(args)
    try:
        if args.m is None and args.s is None:
            cases = [c for c in applicable_cases(G) if c.case_id == args.case]
            if not cases:
                raise InapplicableCase(f"case {args.case} does not apply to {G}")
        else:
            cases = [WitnessCase(args.case, m=args.m or 0, s=args.s or 0)]
        verdicts = [verify_witness(c, G) for c in cases]
    except InapplicableCase as exc:
        raise UsageError(str(exc)) from None
    ok = all(v.passed for v in verdicts)
    if args.format == "json":
        text = json.dumps([v.as_dict() for v in verdicts], indent=2) + "\n"
    else:
        lines = []
        for v in verdicts:
            claims = ", ".join(f"{k}={'pass' if val else 'FAIL'}" for k, val in v.claims.items())
            lines.append(
                f"{v.case} on {G.name}: a -> {list(v.map.image_a)}, b -> {list(v.map.image_b)}; "
                f"order {v.order}; {claims}; {'PASS' if v.passed else 'FAIL'}"
            )
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK if ok else EXIT_DISCREPANCY


def cmd_oracle(args: argparse.Namespace) -> int:
    if args.max_order > 2**12:
        raise UsageError("oracle max-order is limited to 2^12")
    results = []
    for fam in ("Q1", "Q2", "R3"):
        for n, r in family_parameters(fam, args.max_order):
            results.extend(run_all(make_group(fam, n, r), seed=args.seed))
    ok = all(r.ok for r in results)
    if args.format == "json":
        text = json.dumps({"ok": ok, "checks": [r.as_dict() for r in results]}, indent=2) + "\n"
    else:
        text = "".join(
            f"{'ok  ' if r.ok else 'FAIL'} {r.group:10s} {r.name}{' (' + r.detail + ')' if r.detail else ''}\n"
            for r in results
        )
        text += f"{len(results)} checks, {'all passed' if ok else 'FAILURES'}\n"
    _emit(text, args.out)
    return EXIT_OK if ok else EXIT_DISCREPANCY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="class2groups",
        description="Order-2 automorphisms fixing the Frattini subgroup of 2-groups of class 2.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_fmt="text", formats=("text", "json")):
        p.add_argument("--format", choices=formats, default=default_fmt)
        p.add_argument("--out", metavar="FILE")

    p = sub.add_parser("info", help="structure of one group")
    _group_args(p)
    common(p)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("sweep", help="check condition (⋆) on every group up to an order")
    p.add_argument("--family", action="append", default=None,
                   help="Q1, Q2, R3 (repeat or comma-separate; default all)")
    p.add_argument("--max-order", type=_int_or_pow, default=2**12)
    p.add_argument("--mode", choices=("pruned", "brute"), default="pruned")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-timing", action="store_true", help="report runtime_ms as 0")
    common(p, "json", ("json", "csv", "md"))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("check-witness", help="verify a classification case's map")
    p.add_argument("case", choices=("1i", "1ii", "1iii-a1", "1iii-a2", "2i", "2ii", "2iii", "3i", "3ii"))
    _group_args(p)
    p.add_argument("--m", type=int, choices=(0, 1))
    p.add_argument("--s", type=int, choices=(0, 1))
    common(p)
    p.set_defaults(func=cmd_check_witness)

    p = sub.add_parser("oracle", help="run the arithmetic and enumeration self-tests")
    p.add_argument("max_order", nargs="?", type=_int_or_pow, default=512)
    p.add_argument("--max-order", dest="max_order_flag", type=_int_or_pow)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "sweep" and args.family is None:
        args.family = ["Q1,Q2,R3"]
    if args.command == "oracle" and args.max_order_flag is not None:
        args.max_order = args.max_order_flag
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
