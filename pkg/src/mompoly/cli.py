"""Command line entry point: ``mompoly count|fit|verify|reference``.

Exit codes: 0 success, 1 verification failure or engine mismatch,
2 usage error, 3 resource budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .core import FamilySpec, Group
from .counter import (
    DEFAULT_STATE_BUDGET, CountCache, CountTable, EngineMismatch, count, count_series,
)
from .patterns import DEFAULT_NODE_BUDGET, BudgetExceeded
from .report import VerdictReport

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
CLAIMS = ("roots", "symmetry", "reciprocity", "bijection", "vertex", "polynomiality", "all")


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {v}")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", choices=["u", "sp"], required=True)
    common.add_argument("-k", type=_positive, required=True)
    common.add_argument("-q", type=_positive, required=True)
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--cache", metavar="PATH", default=os.environ.get("MOMPOLY_CACHE"),
                        help="count cache file (default: $MOMPOLY_CACHE)")
    common.add_argument("--budget-nodes", type=_positive, default=DEFAULT_NODE_BUDGET)
    common.add_argument("--budget-states", type=_positive, default=DEFAULT_STATE_BUDGET)

    parser = argparse.ArgumentParser(prog="mompoly", description="Pattern counts and counting polynomials.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="count patterns at one or several dilations")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("-N", type=_nonneg)
    g.add_argument("--n-max", type=_nonneg)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--engine", choices=["naive", "dp", "both"], default="dp")

    p = sub.add_parser("fit", parents=[common], help="fit the counting polynomial")
    p.add_argument("--extra", type=_positive, default=2, help="extra nodes used only for checking")

    p = sub.add_parser("verify", parents=[common], help="check a structural claim")
    p.add_argument("claim", choices=CLAIMS)
    p.add_argument("-N", type=_nonneg, help="dilation for the bijection check (default 0..2)")
    p.add_argument("--extra", type=_positive, default=2)

    sub.add_parser("reference", parents=[common], help="print the known closed form, if any")
    return parser


def _spec(args) -> FamilySpec:
    return FamilySpec(Group.parse(args.group), args.k, args.q)


def _cache(args) -> CountCache | None:
    return CountCache(args.cache) if args.cache else None


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def cmd_count(args) -> int:
    spec = _spec(args)
    cache = _cache(args)
    if args.N is not None:
        Ns = [args.N]
    else:
        Ns = list(range(args.n_max + 1))
    if args.engine == "dp":
        table = count_series(spec, Ns[-1], args.strict, state_budget=args.budget_states,
                             cache=cache, n_min=Ns[0])
    else:
        table = CountTable(spec, args.strict)
        for N in Ns:
            table.entries[N] = count(spec, N, args.strict, args.engine,
                                     state_budget=args.budget_states, node_budget=args.budget_nodes)
    if args.format == "json":
        _emit_json(table.to_json())
    elif args.format == "csv":
        sys.stdout.write("N,count\n" + "".join(f"{n},{table[n]}\n" for n in table.nodes()))
    elif args.N is not None:
        sys.stdout.write(f"{table[args.N]}\n")
    else:
        sys.stdout.write("".join(f"{n} {table[n]}\n" for n in table.nodes()))
    return EXIT_OK


def cmd_fit(args) -> int:
    from .lab import fit, poly_json, verify_polynomiality

    if args.format == "csv":
        raise UsageError("csv output is only available for count tables")
    spec = _spec(args)
    cache = _cache(args)
    verdict = verify_polynomiality(spec, args.extra, cache=cache, state_budget=args.budget_states)
    poly = fit(spec, cache=cache, state_budget=args.budget_states)
    out = poly_json(spec, poly)
    out["extra_nodes"] = verdict.to_json()
    if args.format == "json":
        _emit_json(out)
    else:
        sys.stdout.write(f"{poly}\n{'PASS' if verdict.passed else 'FAIL'} extra nodes {args.extra}\n")
    return EXIT_OK if verdict.passed else EXIT_FAIL


def _vertex_reports(spec: FamilySpec) -> list[VerdictReport]:
    from . import polytope

    params = {"group": spec.group.value, "k": spec.k, "q": spec.q}
    if spec.k < 2:
        return [VerdictReport("vertex", params, True, [], {"status": "not applicable for k = 1"})]
    system = polytope.build_system(spec)
    if spec.group is Group.U:
        witnesses = [polytope.unitary_half_witness(system)]
        if spec.k == 2 and polytope.dilated_witness_t(spec.q) is not None:
            witnesses.append(polytope.unitary_dilated_witness(system))
    else:
        witnesses = [polytope.symplectic_half_witness(system)]
    reports = []
    for w in witnesses:
        r = polytope.verify_vertex_witness(system, w)
        if r.passed and polytope.member(system, w.point, "interior", w.scale):
            r = VerdictReport("vertex", r.params, False, [{"error": "witness lies in the interior"}], r.detail)
        reports.append(r)
    return reports


def run_claim(claim: str, spec: FamilySpec, args) -> list[VerdictReport]:
    from . import lab
    from .bijection import verify_bijectivity

    cache = _cache(args)
    sb = args.budget_states
    if claim == "roots":
        return [lab.verify_integer_roots(spec, cache=cache, state_budget=sb)]
    if claim == "symmetry":
        return [lab.verify_symmetry(spec, cache=cache, state_budget=sb)]
    if claim == "reciprocity":
        return [lab.verify_reciprocity(spec, cache=cache, state_budget=sb)]
    if claim == "polynomiality":
        return [lab.verify_polynomiality(spec, args.extra, cache=cache, state_budget=sb)]
    if claim == "bijection":
        Ns = [args.N] if args.N is not None else [0, 1, 2]
        return [verify_bijectivity(spec, N, args.budget_nodes) for N in Ns]
    if claim == "vertex":
        return _vertex_reports(spec)
    out = []
    for c in CLAIMS[:-1]:
        out.extend(run_claim(c, spec, args))
    return out


def cmd_verify(args) -> int:
    if args.format == "csv":
        raise UsageError("csv output is only available for count tables")
    spec = _spec(args)
    reports = run_claim(args.claim, spec, args)
    passed = all(r.passed for r in reports)
    if args.format == "json":
        if len(reports) == 1:
            _emit_json(reports[0].to_json())
        else:
            _emit_json({"claim": args.claim, "passed": passed, "reports": [r.to_json() for r in reports]})
    else:
        for r in reports:
            extra = " ".join(f"{k}={v}" for k, v in r.params.items() if k not in ("group", "k", "q"))
            sys.stdout.write(f"{'PASS' if r.passed else 'FAIL'} {r.claim} {spec.label()} {extra}".rstrip() + "\n")
    return EXIT_OK if passed else EXIT_FAIL


def cmd_reference(args) -> int:
    from .lab import poly_json
    from .reference import golden

    if args.format == "csv":
        raise UsageError("csv output is only available for count tables")
    spec = _spec(args)
    g = golden(spec)
    if g is None:
        raise UsageError(f"no reference polynomial known for {spec.label()}")
    if args.format == "json":
        out = poly_json(spec, g.poly)
        out["source"] = g.source
        _emit_json(out)
    else:
        sys.stdout.write(f"{g.poly}\n")
    return EXIT_OK


COMMANDS = {"count": cmd_count, "fit": cmd_fit, "verify": cmd_verify, "reference": cmd_reference}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"mompoly: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"mompoly: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except EngineMismatch as exc:
        print(f"mompoly: engine mismatch: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
