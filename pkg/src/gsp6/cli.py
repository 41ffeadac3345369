"""Command-line front end.

Exit status: 0 on success or a true verdict, 1 on a false verdict (or a
search that found nothing), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import census as census_mod
from .curves import (
    HYPERELLIPTIC,
    QUARTIC,
    CurveEquation,
    CurveNotFound,
    count_points,
    curve_search,
    frobenius_from_counts,
    point_counts,
)
from .localp import check_localp, template_from_dict
from .pipeline import (
    SurjectivityCertificate,
    crt_lift,
    run_pipeline,
    search_weil_triples,
    verify,
)

KINDS = (HYPERELLIPTIC, QUARTIC)


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="table")
    common.add_argument("--threads", type=_positive, default=None,
                        help="worker threads (default: $GSP6_THREADS or 1)")

    parser = argparse.ArgumentParser(prog="gsp6", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", parents=[common], help="closed forms vs exhaustive counts")
    p.add_argument("--ell", type=_positive, required=True)
    p.add_argument("--q", type=_positive, required=True)
    p.add_argument("--degree6", action="store_true", help="also count D6*- and R6")

    p = sub.add_parser("weil-search", parents=[common], help="admissible Weil triples")
    p.add_argument("--ell", type=_positive, required=True)
    p.add_argument("--q", type=_positive, required=True)
    p.add_argument("--max", type=_positive, default=None)

    p = sub.add_parser("curve-search", parents=[common], help="find a curve over F_q")
    p.add_argument("--ell", type=_positive, required=True)
    p.add_argument("--q", type=_positive, required=True)
    p.add_argument("--kind", choices=KINDS, default=HYPERELLIPTIC)
    p.add_argument("--strategy", choices=("sparse", "random"), default="sparse")
    p.add_argument("--seed", type=_nonneg, default=0)
    p.add_argument("--limit", type=_nonneg, default=10_000)

    p = sub.add_parser("count-points", parents=[common], help="N_r of a curve over F_q")
    p.add_argument("--curve", required=True)
    p.add_argument("--q", type=_positive, required=True)
    p.add_argument("--r", type=int, choices=(1, 2, 3), default=None,
                   help="extension degree (default: all three and the sextic)")

    p = sub.add_parser("check-localp", parents=[common], help="local conditions at p")
    p.add_argument("--curve", required=True)
    p.add_argument("--p", type=_positive, required=True)
    p.add_argument("--template", default=None)

    p = sub.add_parser("lift", parents=[common], help="CRT lift modulo p^3 q")
    p.add_argument("--fp", required=True)
    p.add_argument("--fq", required=True)
    p.add_argument("--p", type=_positive, required=True)
    p.add_argument("--q", type=_positive, required=True)

    p = sub.add_parser("verify", parents=[common], help="re-check a certificate")
    p.add_argument("--cert", required=True)

    p = sub.add_parser("pipeline", parents=[common], help="search, lift and certify")
    p.add_argument("--ell", type=_positive, required=True)
    p.add_argument("--p", type=_positive, required=True)
    p.add_argument("--q", type=_positive, required=True)
    p.add_argument("--kind", choices=KINDS, default=HYPERELLIPTIC)
    p.add_argument("--strategy", choices=("sparse", "random"), default="sparse")
    p.add_argument("--seed", type=_nonneg, default=0)
    p.add_argument("--limit", type=_nonneg, default=10_000)
    p.add_argument("--out", default=None)
    return parser


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("GSP6_THREADS")
    if env is None:
        return 1
    try:
        return _positive(env)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"GSP6_THREADS: {exc}")


def _load_json(path: str, flag: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"{flag}: cannot read {path}: {exc}")


def _load_curve(path: str, flag: str) -> CurveEquation:
    try:
        return CurveEquation.from_dict(_load_json(path, flag))
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"{flag}: invalid curve file: {exc}")


def _emit(payload: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(payload, sort_keys=True) + "\n")
        return
    for key, value in payload.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        out.write(f"{key}: {value}\n")


def _weil_payload(w) -> dict:
    return {"q": str(w.q), "a": str(w.a), "b": str(w.b), "c": str(w.c),
            "coefficients": [str(c) for c in w.coefficients()]}


def _run(args, out) -> int:
    threads = _threads(args)
    cmd = args.command

    if cmd == "census":
        rep = census_mod.brute_census(args.ell, args.q, include_degree6=args.degree6,
                                      threads=threads)
        _emit(rep.to_dict(), args.format, out)
        return 0

    if cmd == "weil-search":
        triples = search_weil_triples(args.ell, args.q, args.max)
        _emit({"ell": args.ell, "q": args.q, "triples": [list(t) for t in triples]},
              args.format, out)
        return 0 if triples else 1

    if cmd == "curve-search":
        try:
            e, w, flag, idx = curve_search(args.ell, args.q, args.kind, args.strategy,
                                           args.seed, args.limit, threads)
        except CurveNotFound as exc:
            print(f"not found: {exc}", file=sys.stderr)
            return 1
        _emit({"curve": e.to_dict(), "equation": str(e), "weil": _weil_payload(w),
               "twist_flag": flag, "index": idx}, args.format, out)
        return 0

    if cmd == "count-points":
        e = _load_curve(args.curve, "--curve")
        if e.modulus is not None and e.modulus != args.q:
            raise UsageError(f"--q {args.q} differs from the curve file modulus {e.modulus}")
        e = e.reduce(args.q)
        if args.r is not None:
            _emit({"q": args.q, "r": args.r, "N": str(count_points(e, args.r, threads))},
                  args.format, out)
            return 0
        pc = point_counts(e, threads)
        _emit({"q": args.q, "N1": str(pc.N1), "N2": str(pc.N2), "N3": str(pc.N3),
               "weil": _weil_payload(frobenius_from_counts(pc))}, args.format, out)
        return 0

    if cmd == "check-localp":
        e = _load_curve(args.curve, "--curve")
        t = "infer"
        if args.template:
            try:
                t = template_from_dict(_load_json(args.template, "--template"))
            except (KeyError, ValueError) as exc:
                raise UsageError(f"--template: {exc}")
        rep = check_localp(e, args.p, t)
        _emit(rep.to_dict(), args.format, out)
        return 0 if rep.passed else 1

    if cmd == "lift":
        fp = _load_curve(args.fp, "--fp")
        fq = _load_curve(args.fq, "--fq")
        _emit(crt_lift(fp, fq.reduce(args.q), args.p, args.q).to_dict(), args.format, out)
        return 0

    if cmd == "verify":
        try:
            cert = SurjectivityCertificate.from_dict(_load_json(args.cert, "--cert"))
        except (KeyError, ValueError, TypeError) as exc:
            raise UsageError(f"--cert: malformed certificate: {exc}")
        ok = verify(cert, threads)
        _emit({"verified": ok, "conclusion": cert.conclusion}, args.format, out)
        return 0 if ok else 1

    if cmd == "pipeline":
        try:
            cert = run_pipeline(args.ell, args.p, args.q, args.kind, args.seed, args.limit,
                                args.strategy, threads)
        except CurveNotFound as exc:
            print(f"not found: {exc}", file=sys.stderr)
            return 1
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(cert.to_json() + "\n")
        _emit(cert.to_dict(), args.format, out)
        return 0 if cert.conclusion else 1

    raise UsageError(f"unknown command {cmd!r}")  # argparse prevents this


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _run(args, out)
    except UsageError as exc:
        print(f"gsp6 {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # violated preconditions (non-prime q, p = ell, ...) count as usage errors
        print(f"gsp6 {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
