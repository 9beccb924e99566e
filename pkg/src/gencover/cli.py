"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bounds
from .errors import BudgetExceeded
from .pool import PoolInstance, pool_solve, pool_verify
from .probmodel import janson_certificate
from .radius import deep_holes, t_covering_radius
from .search import alpha_exact, min_code_size, sample_alpha
from .words import Code, MatrixWord, Word

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

POOL_HELP = (
    "Football pool with a match and a rematch. A ticket set wins when some ORDERED pair of "
    "tickets, possibly the same ticket twice, misses at most r games. This differs from the "
    "distinct-pair covering relation used by the janson command."
)


class UsageError(Exception):
    pass


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--seed", type=int, default=argparse.SUPPRESS if suppress else 0, help="64-bit seed")
    parser.add_argument("--threads", type=int, default=argparse.SUPPRESS if suppress else 1)
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", default=default)
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv", default=default)
    parser.add_argument("--out", type=Path, default=default, help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gencover", description="Generalized covering radii of q-ary codes.")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def leaf(subparsers, name, **kw):
        p = subparsers.add_parser(name, **kw)
        _global_options(p, suppress=True)
        return p

    p = leaf(sub, "radius", help="t-th covering radius of a code file")
    p.add_argument("--code", type=Path, required=True)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--deep-holes", action="store_true", help="list every deep hole")

    p = leaf(sub, "search", help="exact minimal code size k_t(n, r, q)")
    for name in ("n", "t", "r", "q"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--budget", type=int, default=None)

    b = sub.add_parser("bounds", help="rate bounds")
    bsub = b.add_subparsers(dest="bounds_command", required=True)
    p = leaf(bsub, "curve", help="bound curves as CSV")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--points", type=int, default=101)
    p = leaf(bsub, "check", help="entropy identity, phi positivity and ball-size grid suites")
    p.add_argument("--q", type=int, action="append", help="alphabet(s) for the identity/phi grids")
    p.add_argument("--points", type=int, default=1000)

    p = leaf(sub, "alpha", help="fraction of (n, M)_q codes with R_2 <= floor(rho n)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--m", type=int, required=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--sample", action="store_true")
    p.add_argument("--trials", type=int, default=10_000)

    p = leaf(sub, "janson", help="upper bound on P[target uncovered] for a Bernoulli(p) code")
    p.add_argument("--target", required=True, help="two rows separated by a comma, e.g. 0000,0110")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--p", type=float, required=True)

    pool = sub.add_parser("pool", help="second-order football pool", description=POOL_HELP)
    psub = pool.add_subparsers(dest="pool_command", required=True)
    p = leaf(psub, "solve", help="minimal ticket set", description=POOL_HELP)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--budget", type=int, default=None)
    p = leaf(psub, "verify", help="does a ticket set win for given outcomes", description=POOL_HELP)
    p.add_argument("--tickets", type=Path, required=True)
    p.add_argument("--match", required=True)
    p.add_argument("--rematch", required=True)
    p.add_argument("--r", type=int, required=True)
    return parser


def _emit(args, payload: dict | None = None, text: str | None = None) -> None:
    if text is None:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        args.out.write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def cmd_radius(args) -> int:
    code = Code.load(args.code)
    rep = t_covering_radius(code, args.t, threads=args.threads)
    payload = {
        "schema": 1, "n": code.n, "q": code.q, "t": args.t, "m": code.M,
        "radius": rep.radius, "deep_hole": [str(r) for r in rep.deep_hole.rows], "scanned": rep.scanned,
    }
    if args.deep_holes:
        payload["deep_holes"] = [[str(r) for r in h.rows] for h in deep_holes(code, args.t, threads=args.threads)]
    _emit(args, payload)
    return EXIT_OK


def cmd_search(args) -> int:
    kw = {"seed": args.seed}
    if args.budget is not None:
        kw["budget"] = args.budget
    result = min_code_size(args.n, args.t, args.r, args.q, **kw)
    _emit(args, result.to_json())
    return EXIT_OK


def cmd_bounds_curve(args) -> int:
    if args.fmt == "json":
        rows = [vars(p) for p in bounds.emit_rate_curves(args.q, args.points)]
        _emit(args, {"schema": 1, "q": args.q, "rows": rows})
    else:
        _emit(args, text=bounds.curves_to_csv(bounds.emit_rate_curves(args.q, args.points)))
    return EXIT_OK


def cmd_bounds_check(args) -> int:
    qs = tuple(args.q) if args.q else (2, 3, 4, 5)
    residual = bounds.identity_suite(args.points, qs)
    phi_min, phi_end = bounds.phi_suite(args.points, qs)
    violations = bounds.ball_entropy_suite()
    checks = {
        "entropy_identity": {"max_residual": residual, "pass": residual < 1e-10},
        "phi_positive": {"min_interior": phi_min, "max_endpoint": phi_end,
                         "pass": phi_min > 0.0 and phi_end < 1e-12},
        "ball_entropy": {"violations": len(violations), "pass": not violations},
    }
    ok = all(c["pass"] for c in checks.values())
    _emit(args, {"schema": 1, "q": list(qs), "checks": checks, "pass": ok})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_alpha(args) -> int:
    if args.exact:
        frac = alpha_exact(args.n, args.rho, args.m, args.q)
        payload = {"schema": 1, "n": args.n, "q": args.q, "rho": args.rho, "m": args.m,
                   "numerator": frac.numerator, "denominator": frac.denominator, "value": float(frac)}
    else:
        est = sample_alpha(args.n, args.rho, args.m, args.q, args.trials, seed=args.seed, threads=args.threads)
        payload = est.to_json()
    _emit(args, payload)
    return EXIT_OK


def _parse_target(text: str, q: int) -> MatrixWord:
    rows = [r for r in text.split(",") if r]
    if len(rows) != 2:
        raise UsageError("--target needs exactly two comma-separated rows")
    return MatrixWord.from_strs(rows, q)


def cmd_janson(args) -> int:
    cert = janson_certificate(_parse_target(args.target, args.q), args.r, args.p)
    _emit(args, cert.to_json())
    return EXIT_OK


def cmd_pool_solve(args) -> int:
    kw = {"seed": args.seed}
    if args.budget is not None:
        kw["budget"] = args.budget
    sol = pool_solve(args.n, args.q, args.r, **kw)
    payload = {"schema": 1, "n": sol.n, "q": sol.q, "r": sol.r, "exact": sol.exact,
               "lower": sol.lower, "upper": sol.upper}
    if sol.tickets is not None:
        payload["tickets"] = [str(w) for w in sol.tickets]
    elif sol.upper_tickets is not None:
        payload["greedy_tickets"] = [str(w) for w in sol.upper_tickets]
    _emit(args, payload)
    return EXIT_OK if sol.exact else EXIT_BUDGET


def cmd_pool_verify(args) -> int:
    tickets = Code.load(args.tickets)
    inst = PoolInstance(tickets.n, tickets.q, args.r, tickets,
                        Word.from_str(args.match, tickets.q), Word.from_str(args.rematch, tickets.q))
    verdict = pool_verify(inst)
    payload = {"schema": 1, "win": verdict.win, "missed": verdict.missed, "empty_tickets": verdict.empty_tickets,
               "witness": [str(w) for w in verdict.witness] if verdict.witness else None}
    _emit(args, payload)
    return EXIT_OK if verdict.win else EXIT_FAIL


def _dispatch(args) -> int:
    if args.command == "bounds":
        return {"curve": cmd_bounds_curve, "check": cmd_bounds_check}[args.bounds_command](args)
    if args.command == "pool":
        return {"solve": cmd_pool_solve, "verify": cmd_pool_verify}[args.pool_command](args)
    return {"radius": cmd_radius, "search": cmd_search, "alpha": cmd_alpha, "janson": cmd_janson}[args.command](args)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("seed", 0), ("threads", 1), ("fmt", None), ("out", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        return _dispatch(args)
    except BudgetExceeded as exc:
        print(f"gencover: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, ValueError, FileNotFoundError) as exc:
        print(f"gencover: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
