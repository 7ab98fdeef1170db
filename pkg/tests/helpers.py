"""Shared generators for the test suite."""

import random

from torsion_twists.curve import EllipticCurve, Point, SingularCurve
from torsion_twists.field import Cyc


def rand_cyc(rng: random.Random, bound: int = 9) -> Cyc:
    return Cyc(rng.randint(-bound, bound), rng.randint(-bound, bound))


def curve_through_points(rng: random.Random, n_points: int = 3):
    """A random Weierstrass curve over Q(z3) with n_points <= 3 known affine points.

    a1, a3 are drawn at random; a2, a4, a6 then solve the linear system
    a2 x^2 + a4 x + a6 = y^2 + a1 x y + a3 y - x^3 at the chosen points.
    """
    while True:
        a1, a3 = rand_cyc(rng), rand_cyc(rng)
        pts = [(rand_cyc(rng), rand_cyc(rng)) for _ in range(3)]
        xs = [p[0] for p in pts]
        if len({(x.r, x.s) for x in xs}) < 3:
            continue
        rhs = [y * y + a1 * x * y + a3 * y - x ** 3 for x, y in pts]
        # Vandermonde solve via Lagrange interpolation of c2 X^2 + c1 X + c0
        c = [Cyc(0), Cyc(0), Cyc(0)]
        for i in range(3):
            xi = xs[i]
            others = [xs[j] for j in range(3) if j != i]
            den = (xi - others[0]) * (xi - others[1])
            w = rhs[i] / den
            c[2] = c[2] + w
            c[1] = c[1] - w * (others[0] + others[1])
            c[0] = c[0] + w * others[0] * others[1]
        try:
            E = EllipticCurve(a1, c[2], a3, c[1], c[0], field="Qzeta3")
        except SingularCurve:
            continue
        return E, [Point(x, y) for x, y in pts[:n_points]]
