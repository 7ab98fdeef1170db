"""Command-line driver.

    torsion-twists model --p 2 --a 1 --b 1 --d 5
    torsion-twists verify all
    torsion-twists local --p 3 --a 2 --d 7 --q 7
    torsion-twists scan --p 2 --a 1 --b 1 --json

Exit codes: 0 success, 1 mathematical negative (a failed identity), 2 usage
error, 3 resource or precision exhaustion (Undetermined verdicts with --strict).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import List, Optional

from .curve import EllipticCurve, SingularCurve, bad_primes, curve_from_parameter
from .field import ResourceLimitError, is_prime
from .localsolve import (
    COMPLEX,
    REAL,
    LocalPlace,
    Status,
    ZeroBound,
    cubic_local,
    els_scan,
    quartic_local,
    quartic_real,
)
from .textform import TextFormatError, parse_cyc, parse_rational
from .twist import (
    NotPowerFree,
    NullspaceDimensionUnexpected,
    build_zw,
    cubic_model,
    expected_relation,
    fit_relation,
    quadratic_model,
    verify_cocycle,
    verify_cubic_relation,
    verify_inverse,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(args, payload: dict, text: List[str]) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(text))


def _check_p(args) -> None:
    if args.p not in (2, 3):
        raise UsageError(f"p={args.p} models are not available: explicit twist models exist only for p=2 and p=3")
    field = getattr(args, "field", None)
    if field and field != ("Q" if args.p == 2 else "Qzeta3"):
        raise UsageError(f"--field {field} does not match p={args.p}")
    if args.p == 2 and (args.a is None or args.b is None):
        raise UsageError("p=2 needs --a and --b (curve y^2 = x^3 + a x^2 + b x)")
    if args.p == 3 and args.a is None:
        raise UsageError("p=3 needs --a (curve E_a)")


def _parse_int(text: str, name: str) -> int:
    try:
        return int(text)
    except (TypeError, ValueError):
        raise UsageError(f"--{name} must be an integer, got {text!r}")


def _build_model(args, d: int, allow_singular: bool = False):
    if args.p == 2:
        return quadratic_model(parse_rational(args.a), parse_rational(args.b), d)
    a = parse_cyc(args.a)
    model = cubic_model(a, d)
    try:
        curve_from_parameter(a)
    except SingularCurve:
        if not allow_singular:
            raise
        print(f"warning: E_a is singular at a = {a}; the model is printed anyway", file=sys.stderr)
    return model


def cmd_model(args) -> int:
    _check_p(args)
    if args.d is None:
        raise UsageError("model needs --d")
    model = _build_model(args, _parse_int(args.d, "d"), allow_singular=True)
    payload = dict(model.as_dict(), equation=model.equation())
    _emit(args, payload, [model.equation()])
    return EXIT_OK


def _run_checks(what: str):
    checks = []
    if what in ("relation", "all"):
        t0 = time.perf_counter()
        z, w = build_zw()
        checks.append(("d z^3 + 3 d alpha z w + d^2 w^3 + beta = 0", verify_cubic_relation(z, w), t0))
    if what in ("inverse", "all"):
        t0 = time.perf_counter()
        checks.append(("phi(z, w) = (x, y)", verify_inverse(), t0))
    if what in ("cocycle", "all"):
        for k in (1, 2):
            t0 = time.perf_counter()
            checks.append((f"phi^sigma o phi^-1 = translation by {'' if k == 1 else k}S (sigma(t) = z3^{k} t)", verify_cocycle(k), t0))
    extra = {}
    if what in ("fit", "all"):
        t0 = time.perf_counter()
        z, w = build_zw()
        try:
            res = fit_relation(z, w)
            ok = all(x == y for x, y in zip(res.normalized, expected_relation()))
            extra["fit"] = res.as_dict()
        except NullspaceDimensionUnexpected as exc:
            ok = False
            extra["fit"] = {"error": str(exc)}
        checks.append(("fitted relation equals (d, 3 d alpha, d^2, beta)", ok, t0))
    return checks, extra


def cmd_verify(args) -> int:
    checks, extra = _run_checks(args.what)
    now = time.perf_counter()
    rows = [{"identity": name, "pass": ok, "seconds": round(now - t0, 3)} for name, ok, t0 in checks]
    text = [f"{'PASS' if r['pass'] else 'FAIL'}  {r['identity']}" for r in rows]
    if "fit" in extra and "normalized" in extra["fit"]:
        text.append("fitted vector (z^3, z*w, w^3, 1):")
        text.extend(f"  {v}" for v in extra["fit"]["normalized"])
    _emit(args, {"checks": rows, **extra}, text)
    return EXIT_OK if all(r["pass"] for r in rows) else EXIT_NEGATIVE


def cmd_fit(args) -> int:
    z, w = build_zw()
    try:
        res = fit_relation(z, w)
    except NullspaceDimensionUnexpected as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NEGATIVE
    ok = all(x == y for x, y in zip(res.normalized, expected_relation()))
    payload = dict(res.as_dict(), matches_model=ok)
    text = [f"rank {res.rank} from {res.equations} equations; generator normalised to first entry d:"]
    text += [f"  {m}: {v}" for m, v in zip(payload["monomials"], payload["normalized"])]
    text.append("matches (d, 3 d alpha, d^2, beta): " + ("yes" if ok else "no"))
    _emit(args, payload, text)
    return EXIT_OK if ok else EXIT_NEGATIVE


def _precision(args) -> Optional[int]:
    if args.precision is None:
        return None
    if args.precision < 1:
        raise UsageError("--precision must be positive")
    return args.precision


def cmd_local(args) -> int:
    _check_p(args)
    if args.d is None or args.q is None:
        raise UsageError("local needs --d and --q")
    model = _build_model(args, _parse_int(args.d, "d"))
    N = _precision(args)
    rows = []
    if args.q == "inf":
        places = [REAL] if args.p == 2 else [COMPLEX]
    else:
        q = _parse_int(args.q, "q")
        if not is_prime(q):
            raise UsageError(f"--q {q} is not prime")
        places = [LocalPlace(q, "Rational")] if args.p == 2 else LocalPlace.above(q)
    for pl in places:
        if args.p == 2:
            v = quartic_real(model) if pl.kind == "Real" else quartic_local(model, pl.q, N)
        else:
            v = cubic_local(model, pl, N)
        rows.append({**pl.as_dict(), **v.as_dict()})
    text = [model.equation()]
    for r in rows:
        place = f"q={r['q']} {r['kind']}" + (f" (z3 -> {r['root']})" if "root" in r else "")
        line = f"{place}: {r['status']}"
        if r.get("witness"):
            line += f"  witness {json.dumps(r['witness'], sort_keys=True)}"
        if r.get("reason"):
            line += f"  ({r['reason']})"
        text.append(line)
    _emit(args, {"model": model.as_dict(), "places": rows}, text)
    if args.strict and any(r["status"] == Status.UNDETERMINED.value for r in rows):
        return EXIT_RESOURCE
    return EXIT_OK


def _parse_places(text: Optional[str]) -> List[int]:
    if not text:
        return []
    out = []
    for part in text.split(","):
        q = _parse_int(part.strip(), "places")
        if not is_prime(q):
            raise UsageError(f"--places entry {q} is not prime")
        out.append(q)
    return out


def cmd_scan(args) -> int:
    _check_p(args)
    a = parse_rational(args.a) if args.p == 2 else parse_cyc(args.a)
    b = parse_rational(args.b) if args.p == 2 else None
    if args.p == 3:
        curve_from_parameter(a)
    report = els_scan(args.p, a, b, precision=_precision(args),
                      verify_good_primes_below=args.verify_good_primes_below,
                      places=_parse_places(args.places))
    text = [f"p={report['p']} curve {report['curve']}  ({report['header']['d_signs']} d)"]
    for row in report["candidates"]:
        marks = []
        for pl in row["places"]:
            if pl["kind"] == "Good":
                continue
            tag = f"{pl['q']}" + (f"[{pl['root']}]" if "root" in pl else "") + ("*" if pl.get("good") else "")
            marks.append(f"{tag}:{pl['status'][0]}")
        text.append(f"d={row['d']:>6}  {row['verdict']:<12} " + " ".join(marks))
    text.append("S = Solvable, E = Empty, U = Undetermined; other good places Solvable by the Hasse bound")
    _emit(args, report, text)
    verdicts = [row["verdict"] for row in report["candidates"]]
    if args.strict and verdicts and all(v == "Inconclusive" for v in verdicts):
        return EXIT_RESOURCE
    return EXIT_OK


def cmd_bad_primes(args) -> int:
    field = args.field or ("Q" if args.b is not None else "Qzeta3")
    if field == "Q":
        if args.a is None or args.b is None:
            raise UsageError("--field Q needs --a and --b (curve y^2 = x^3 + a x^2 + b x)")
        a, b = parse_rational(args.a), parse_rational(args.b)
        E = EllipticCurve(Fraction(0), a, Fraction(0), b, Fraction(0), field="Q")
        label = f"y^2 = x^3 + ({a})*x^2 + ({b})*x"
    else:
        if args.a is None:
            raise UsageError("--field Qzeta3 needs --a (curve E_a)")
        E, _, _ = curve_from_parameter(parse_cyc(args.a))
        label = f"E_a, a = {args.a}"
    places = [P.as_dict() for P in bad_primes(E)]
    text = [label] + [f"  q={P['q']} {P['kind']}" + (f" (z3 -> {P['root']})" if "root" in P else "") for P in places]
    _emit(args, {"curve": label, "field": field, "places": places}, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="torsion-twists", description="Twists of elliptic curves by torsion cocycles")
    sub = parser.add_subparsers(dest="command", required=True)

    def curve_opts(p, need_p=True):
        if need_p:
            p.add_argument("--p", type=int, required=True, help="2 or 3")
        p.add_argument("--a", help="p=2: rational a; p=3: element of Q(z3), e.g. 2-z3")
        p.add_argument("--b", help="p=2 only: rational b")
        p.add_argument("--field", choices=["Q", "Qzeta3"])
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("model", help="print a twist model")
    curve_opts(p)
    p.add_argument("--d")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("verify", help="symbolic identities for the cubic model")
    p.add_argument("what", nargs="?", default="all", choices=["relation", "cocycle", "inverse", "fit", "all"])
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fit", help="recover the cubic relation by linear algebra")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("local", help="local solvability at the places above q")
    curve_opts(p)
    p.add_argument("--d")
    p.add_argument("--q", help="prime, or 'inf'")
    p.add_argument("--precision", type=int)
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_local)

    p = sub.add_parser("scan", help="ELS scan over the candidate twists")
    curve_opts(p)
    p.add_argument("--precision", type=int)
    p.add_argument("--verify-good-primes-below", type=int, default=0)
    p.add_argument("--places", help="comma-separated extra primes to check explicitly")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("bad-primes", help="places of bad reduction")
    curve_opts(p, need_p=False)
    p.set_defaults(func=cmd_bad_primes)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, TextFormatError, NotPowerFree, SingularCurve, ZeroBound, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceLimitError, MemoryError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
