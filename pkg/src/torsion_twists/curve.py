"""Elliptic curves in general Weierstrass form and the 3-torsion family E_a.

The group law is written once against plain ring operations, so the same code
runs over Q, Q(z3), Q(z3)(a, d) and over the function field of a curve (where
it derives translation maps from the generic point).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, List, Optional, Tuple

from sympy import factorint

from .field import ZETA, Cyc, ParamFrac, Poly, SplitType, split_type

__all__ = [
    "SingularCurve",
    "GroupLawError",
    "EllipticCurve",
    "Point",
    "INFINITY",
    "Place",
    "curve_from_parameter",
    "family_coefficients",
    "point_add",
    "point_neg",
    "scalar_mul",
    "discriminant",
    "bad_primes",
    "family_discriminant",
]


class SingularCurve(ValueError):
    pass


class GroupLawError(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class Point:
    """Affine point (x, y); ``INFINITY`` is the identity."""

    x: Any = None
    y: Any = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __iter__(self):
        yield self.x
        yield self.y

    def __str__(self):
        return "O" if self.is_infinity else f"({self.x}, {self.y})"


INFINITY = Point()


def _is_zero(v) -> bool:
    if hasattr(v, "is_zero"):
        return v.is_zero()
    return v == 0


@dataclass(frozen=True)
class EllipticCurve:
    """y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6.

    ``field`` is one of "Q", "Qzeta3" or "param" (coefficients in Q(z3)(a, d)).
    """

    a1: Any
    a2: Any
    a3: Any
    a4: Any
    a6: Any
    field: str = "Qzeta3"

    def __post_init__(self):
        if self.field in ("Q", "Qzeta3") and _is_zero(discriminant(self)):
            raise SingularCurve(f"discriminant of {self} vanishes")

    @property
    def coeffs(self) -> Tuple[Any, Any, Any, Any, Any]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def base_change(self, lift: Callable[[Any], Any], field: str = "ext") -> "EllipticCurve":
        return EllipticCurve(*(lift(c) for c in self.coeffs), field=field)

    def contains(self, P: Point) -> bool:
        if P.is_infinity:
            return True
        x, y = P
        lhs = y * y + self.a1 * x * y + self.a3 * y
        rhs = x * x * x + self.a2 * x * x + self.a4 * x + self.a6
        return _is_zero(lhs - rhs)

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self.coeffs) + "]"


def family_coefficients() -> Tuple[Poly, Poly]:
    """(a1, a3) of the 3-torsion family as polynomials in a."""
    a = Poly.var("a")
    z = Poly.const(ZETA)
    a1 = (2 + z) * a + 1 - z
    a3 = (1 + z) * a * a - z * a
    return a1, a3


def curve_from_parameter(a=None) -> Tuple[EllipticCurve, Point, Point]:
    """E_a : y^2 + ((2+z3)a + 1 - z3) x y + ((1+z3)a^2 - z3 a) y = x^3, S = (0,0), T = (-a, a).

    ``a=None`` keeps a symbolic; coefficients are then :class:`ParamFrac`.
    """
    a1, a3 = family_coefficients()
    if a is None:
        lift = ParamFrac.coerce
        av = ParamFrac.coerce(Poly.var("a"))
        E = EllipticCurve(lift(a1), lift(0), lift(a3), lift(0), lift(0), field="param")
        zero = lift(0)
    else:
        av = Cyc.coerce(a if not isinstance(a, str) else Fraction(a))
        E = EllipticCurve(a1.eval_cyc(a=av), Cyc(0), a3.eval_cyc(a=av), Cyc(0), Cyc(0), field="Qzeta3")
        zero = Cyc(0)
    S = Point(zero, zero)
    T = Point(-av, av)
    return E, S, T


def point_neg(E: EllipticCurve, P: Point) -> Point:
    if P.is_infinity:
        return P
    return Point(P.x, -P.y - E.a1 * P.x - E.a3)


def _div(num, den, what: str):
    if _is_zero(den):
        raise GroupLawError(f"group law denominator {what} vanishes: {den}")
    return num / den


def point_add(E: EllipticCurve, P: Point, Q: Point) -> Point:
    """Chord-tangent addition for the full five-coefficient Weierstrass form."""
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    a1, a2, a3, a4, a6 = E.coeffs
    x1, y1 = P
    x2, y2 = Q
    if _is_zero(x1 - x2):
        if _is_zero(y1 + y2 + a1 * x2 + a3):
            return INFINITY
        den = 2 * y1 + a1 * x1 + a3
        lam = _div(3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1, den, "2y + a1 x + a3")
        nu = _div(-x1 * x1 * x1 + a4 * x1 + 2 * a6 - a3 * y1, den, "2y + a1 x + a3")
    else:
        den = x2 - x1
        lam = _div(y2 - y1, den, "x2 - x1")
        nu = _div(y1 * x2 - y2 * x1, den, "x2 - x1")
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return Point(x3, y3)


def scalar_mul(E: EllipticCurve, n: int, P: Point) -> Point:
    if n < 0:
        return scalar_mul(E, -n, point_neg(E, P))
    result, base = INFINITY, P
    while n:
        if n & 1:
            result = point_add(E, result, base)
        n >>= 1
        if n:
            base = point_add(E, base, base)
    return result


def discriminant(E: EllipticCurve):
    a1, a2, a3, a4, a6 = E.coeffs
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def family_discriminant() -> Poly:
    """Discriminant of E_a as a polynomial in a: a3^3 (a1^3 - 27 a3)."""
    a1, a3 = family_coefficients()
    return a3 ** 3 * (a1 ** 3 - 27 * a3)


@dataclass(frozen=True, order=True)
class Place:
    """A finite place of Q or Q(z3), named by its residue characteristic.

    ``root`` is the image of z3 in F_q for split places (the place is then
    the kernel of z3 -> root); it is None otherwise.
    """

    q: int
    kind: str
    root: Optional[int] = None

    def as_dict(self):
        out = {"q": self.q, "kind": self.kind}
        if self.root is not None:
            out["root"] = self.root
        return out


def cube_roots_of_unity_mod(q: int) -> List[int]:
    return sorted(r for r in range(2, q) if (r * r + r + 1) % q == 0)


def _places_above(q: int) -> List[Place]:
    kind = split_type(q)
    if kind is SplitType.SPLIT:
        return [Place(q, "Split", r) for r in cube_roots_of_unity_mod(q)]
    return [Place(q, kind.value)]


def places_above(q: int) -> List[Place]:
    """All places of Q(z3) above the rational prime q."""
    return _places_above(q)


def _rational_primes(x: Fraction) -> List[int]:
    x = Fraction(x)
    primes = set(factorint(abs(x.numerator))) | set(factorint(x.denominator))
    return sorted(p for p in primes if p > 1)


def bad_primes(E: EllipticCurve) -> List[Place]:
    """Places dividing the discriminant (integral models are assumed)."""
    delta = discriminant(E)
    if E.field == "Q":
        delta = Fraction(delta.r) if isinstance(delta, Cyc) else Fraction(delta)
        return [Place(q, "Rational") for q in _rational_primes(delta)]
    delta = Cyc.coerce(delta)
    out: List[Place] = []
    for q in _rational_primes(delta.norm()):
        for place in _places_above(q):
            if place.kind == "Split":
                if not _vanishes_at(delta, place):
                    continue
            out.append(place)
    return sorted(out)


def _vanishes_at(c: Cyc, place: Place) -> bool:
    q, r = place.q, place.root
    num_r, num_s = Fraction(c.r), Fraction(c.s)
    den = num_r.denominator * num_s.denominator
    value = int(num_r * den) + int(num_s * den) * r
    return value % q == 0
