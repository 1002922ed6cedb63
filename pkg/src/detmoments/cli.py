"""Command-line interface.

Exit codes: 0 success, 1 a verification failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebra import AlgebraError, MomentPolynomial, Symbol
from .catalog import CatalogError, catalog_entry, specialize, to_raw_moments
from .ensembles import (EnsembleError, EnsembleSpec, MomentAssignment, FAMILIES,
                        raw_to_centered, validate_assignment)
from .eulerian import eulerian_polynomial
from .oracle import DISTRIBUTIONS, OracleError, exact_moment, sample_moment
from .series import DEFAULT_ORDER, EgfSeries, SeriesError


class UsageError(Exception):
    pass


def _common() -> argparse.ArgumentParser:
    # global flags, accepted before or after the subcommand
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("json", "pretty"), default=argparse.SUPPRESS)
    p.add_argument("--order", type=int, default=argparse.SUPPRESS, help="series order")
    p.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes for enumeration")
    p.add_argument("--assign", default=argparse.SUPPRESS, metavar="FILE", help="JSON moment assignment")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="detmoments", parents=[common],
                                     description="Exact moments of random matrix determinants.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("egf", parents=[common], help="print a closed-form EGF")
    p.add_argument("--ensemble", choices=FAMILIES, required=True)
    p.add_argument("--k", type=int, choices=(1, 2), default=2)
    p.add_argument("--component", type=int, choices=(0, 1, 2))
    p.add_argument("--specialize", choices=("wigner", "symmetric"))

    p = sub.add_parser("oracle", parents=[common], help="brute-force E[det^k] at one size")
    p.add_argument("--ensemble", choices=FAMILIES, required=True)
    p.add_argument("--k", type=int, choices=(1, 2), default=2)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--prune", action="store_true")

    p = sub.add_parser("verify", parents=[common], help="compare the oracle with the EGF")
    p.add_argument("--ensemble", choices=FAMILIES, required=True)
    p.add_argument("--k", type=int, choices=(1, 2), default=2)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--prune", action="store_true")

    p = sub.add_parser("census", parents=[common], help="classify nontrivial marked tables")
    p.add_argument("--ensemble", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("eulerian", parents=[common], help="one row of Eulerian numbers")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("asymptotic", parents=[common], help="asymptotic vs exact second moment")
    p.add_argument("--m1", default="0")
    p.add_argument("--mu3", default="0")
    p.add_argument("--mu4", default="1")
    p.add_argument("--n", default="20,40,60", help="comma-separated sizes")

    p = sub.add_parser("sample", parents=[common], help="Monte Carlo estimate of E[det^k]")
    p.add_argument("--dist", choices=DISTRIBUTIONS, required=True)
    p.add_argument("--ensemble", choices=FAMILIES)
    p.add_argument("--k", type=int, choices=(1, 2), default=2)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    return parser


# ------------------------------------------------------------------ helpers

def _load_assignment(path) -> MomentAssignment | None:
    if path is None:
        return None
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read assignment file {path}: {exc}") from exc
    return MomentAssignment.from_json(obj)


def _check_assignment(spec: EnsembleSpec, asg: MomentAssignment | None):
    if asg is None:
        return
    problems = validate_assignment(spec, asg)
    if problems:
        raise UsageError("invalid assignment: " + "; ".join(problems))


def _has_raw(asg: MomentAssignment) -> bool:
    return any(s.kind == "m" and s.index[0] >= 2 for s in asg.values)


def _series_pretty(s: EgfSeries) -> str:
    return "\n".join(f"c{n} = {c}" for n, c in enumerate(s.coeffs))


def _emit(obj, pretty_text: str, fmt: str):
    if fmt == "pretty":
        print(pretty_text)
    else:
        print(json.dumps(obj, indent=2))


# ----------------------------------------------------------------- commands

def _cmd_egf(args, fmt):
    order = getattr(args, "order", DEFAULT_ORDER)
    asg = _load_assignment(getattr(args, "assign", None))
    family = args.ensemble
    target = args.specialize or family
    if args.specialize:
        chain = ["hermitian", "wigner", "symmetric"]
        if args.k != 2 or chain.index(target) <= chain.index(family):
            raise UsageError(f"cannot specialize {family} k={args.k} to {target}")
    _check_assignment(EnsembleSpec.default(target, args.k), asg)
    direct = asg is not None and not args.specialize and not (family == "symmetric" and _has_raw(asg))
    entry = catalog_entry(family, args.k, order, asg if direct else None)
    s = entry.series if args.component is None else entry.component(args.component)
    if args.specialize:
        s = specialize(s, family, target)
    if asg is not None and not direct:
        if target == "symmetric" and _has_raw(asg):
            s = to_raw_moments(s)
        s = s.substitute(asg.bindings())
    _emit(s.to_json(), _series_pretty(s), fmt)
    return 0


def _cmd_oracle(args, fmt):
    spec = EnsembleSpec.default(args.ensemble, args.k)
    asg = _load_assignment(getattr(args, "assign", None))
    _check_assignment(spec, asg)
    p = exact_moment(spec, args.n, prune=args.prune, jobs=getattr(args, "jobs", 1))
    if asg is not None:
        if args.ensemble == "symmetric" and not _has_raw(asg):
            p = raw_to_centered(p)
        p = p.substitute(asg.bindings())
    _emit(p.to_json(), str(p), fmt)
    return 0


def _cmd_verify(args, fmt):
    spec = EnsembleSpec.default(args.ensemble, args.k)
    if args.max_n < 0:
        raise UsageError("--max-n must be non-negative")
    series = catalog_entry(args.ensemble, args.k, max(args.max_n, 1)).series
    rows = []
    for n in range(args.max_n + 1):
        p = exact_moment(spec, n, prune=args.prune, jobs=getattr(args, "jobs", 1))
        if args.ensemble == "symmetric":
            p = raw_to_centered(p)
        rows.append({"n": n, "passed": p == series.coeffs[n]})
    ok = all(r["passed"] for r in rows)
    text = "\n".join(f"n={r['n']}: {'PASS' if r['passed'] else 'FAIL'}" for r in rows)
    _emit({"ensemble": args.ensemble, "k": args.k, "rows": rows, "passed": ok}, text, fmt)
    return 0 if ok else 1


def _cmd_census(args, fmt):
    from .structures import census, census_crosscheck
    spec = EnsembleSpec.default(args.ensemble, 2)
    cen = census(spec, args.n)
    rep = census_crosscheck(spec, args.n)
    obj = cen.to_json()
    obj["crosscheck"] = {"passed": rep.passed, "total_matches_oracle": rep.total_matches,
                         "mismatched_kinds": [str(k) for k in rep.mismatched_kinds]}
    lines = [f"{key}: count={cell['count']} weight={MomentPolynomial.from_json(cell['signed_weight'])}"
             for key, cell in obj["structures"].items()]
    lines.append(f"crosscheck: {'PASS' if rep.passed else 'FAIL'}")
    _emit(obj, "\n".join(lines), fmt)
    return 0 if rep.passed else 1


def _cmd_eulerian(args, fmt):
    if args.n < 0:
        raise UsageError("--n must be non-negative")
    row = [str(x) for x in eulerian_polynomial(args.n)]
    _emit(row, " ".join(row), fmt)
    return 0


def _cmd_asymptotic(args, fmt):
    from fractions import Fraction
    from .asymptotics import asymptotic_error_report
    try:
        ns = [int(x) for x in args.n.split(",") if x.strip()]
        m1, mu3, mu4 = Fraction(args.m1), Fraction(args.mu3), Fraction(args.mu4)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not ns or min(ns) < 1:
        raise UsageError("--n needs positive sizes")
    budget = getattr(args, "order", None)
    if budget is not None and max(ns) > budget:
        raise UsageError(f"largest n exceeds the series order budget {budget}")
    rows = asymptotic_error_report(ns, m1, mu3, mu4)
    obj = [{"n": r.n, "exact": str(r.exact), "asymptotic": repr(r.asymptotic),
            "relative_error": repr(r.relative_error)} for r in rows]
    text = "\n".join(f"n={r.n:4d}  exact={float(r.exact):.6e}  asymptotic={r.asymptotic:.6e}  "
                     f"rel_err={r.relative_error:.6f}" for r in rows)
    _emit(obj, text, fmt)
    return 0


def _cmd_sample(args, fmt):
    family = args.ensemble or ("hermitian" if args.dist == "complex_normal" else "symmetric")
    spec = EnsembleSpec.default(family, args.k)
    est, se = sample_moment(args.dist, spec, args.n, args.trials, args.seed)
    obj = {"dist": args.dist, "ensemble": family, "k": args.k, "n": args.n, "trials": args.trials,
           "seed": args.seed, "estimate": repr(est), "stderr": repr(se)}
    _emit(obj, f"estimate={est:.6f} stderr={se:.6f}", fmt)
    return 0


_COMMANDS = {"egf": _cmd_egf, "oracle": _cmd_oracle, "verify": _cmd_verify, "census": _cmd_census,
             "eulerian": _cmd_eulerian, "asymptotic": _cmd_asymptotic, "sample": _cmd_sample}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fmt = getattr(args, "format", "json")
    try:
        return _COMMANDS[args.command](args, fmt)
    except (UsageError, AlgebraError, EnsembleError, CatalogError, SeriesError, OracleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
