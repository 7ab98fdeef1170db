"""Check the cubic twist model of E_a symbolically and at sample points.

    python3 scripts/verify_cubic_model.py --a 2-z3 --d 2 --points 20
"""

import argparse
import time

from torsion_twists.field import KummerElement
from torsion_twists.funcfield import evaluate, twisted_sigma
from torsion_twists.textform import parse_cyc
from torsion_twists.twist import (
    build_zw,
    cubic_model,
    expected_relation,
    fit_relation,
    inverse_map,
    sample_points,
    verify_cocycle,
    verify_cubic_relation,
    verify_inverse,
)


def symbolic_checks():
    z, w = build_zw()
    fit = fit_relation(z, w)
    yield "relation", verify_cubic_relation(z, w)
    yield "inverse", verify_inverse()
    for k in (1, 2):
        yield f"cocycle k={k}", verify_cocycle(k)
    yield "twisted invariance", all(twisted_sigma(f, k) == f for f in (z, w) for k in range(3))
    yield "fit", fit.normalized == [type(fit.normalized[0])(e) for e in expected_relation()]


def point_checks(a, d, count):
    z, w = build_zw()
    model = cubic_model(a, d)
    t = KummerElement.t(d)
    ok = 0
    pts = sample_points(a, count)
    for P in pts:
        zv, wv = evaluate(z, P, a=a, d=d), evaluate(w, P, a=a, d=d)
        X, Y = inverse_map(zv, wv, t, lambda p: KummerElement(p.eval_cyc(a=a), modulus=d))
        ok += model.evaluate(zv, wv).is_zero() and X == KummerElement(P.x, modulus=d) \
            and Y == KummerElement(P.y, modulus=d)
    return ok, len(pts)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a", default="2-z3")
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--points", type=int, default=20)
    args = ap.parse_args()

    failed = False
    for name, ok in symbolic_checks():
        print(f"{name:20s} {'ok' if ok else 'FAILED'}")
        failed |= not ok
    t0 = time.perf_counter()
    a = parse_cyc(args.a)
    good, total = point_checks(a, args.d, args.points)
    print(f"points a={a} d={args.d}: {good}/{total} on the model and round-trip ({time.perf_counter() - t0:.2f}s)")
    failed |= good != total or total == 0
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
