"""Function field K(E)(t) of a Weierstrass curve, t^3 = d.

Elements are stored flat as (U + V*y) / D with U, V in Q(z3)[a, d, t, x]
(t-degree <= 2) and D in Q(z3)[a, d, x] free of t.  Every product is reduced by
the curve equation, so the representation is always of degree <= 1 in y, and a
function is zero exactly when U and V are the zero polynomial.
"""

from __future__ import annotations

from functools import cached_property
from typing import Dict, Optional, Tuple

from .curve import EllipticCurve, Point, curve_from_parameter, point_add, scalar_mul
from .field import ZETA, Cyc, KummerElement, ParamFrac, Poly, poly_gcd
from .textform import parse_expression

__all__ = [
    "FunctionField",
    "CurveFunction",
    "PoleAtPoint",
    "NotEigenfunction",
    "ff_mul",
    "evaluate",
    "translate_by_S",
    "twisted_sigma",
    "translation_eigenvalue",
    "family_function_field",
]


class PoleAtPoint(ZeroDivisionError):
    pass


class NotEigenfunction(ValueError):
    pass


_ONE = Poly.const(1)
_X = Poly.var("x")


def _as_poly(c) -> Poly:
    if isinstance(c, Poly):
        return c
    if isinstance(c, ParamFrac):
        if c.den != 1:
            raise ValueError("curve coefficients must be polynomial in a")
        return c.num
    return Poly.const(c)


class FunctionField:
    """Ambient function field of y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6.

    Coefficients are polynomials in ``a`` (or constants).  ``S`` is the
    distinguished 3-torsion point used for translations, when there is one.
    """

    def __init__(self, a1, a2, a3, a4, a6, S: Optional[Point] = None):
        self.a = tuple(_as_poly(c) for c in (a1, a2, a3, a4, a6))
        a1, a2, a3, a4, a6 = self.a
        # y^2 = cubic - lin * y
        self.cubic = _X ** 3 + a2 * _X * _X + a4 * _X + a6
        self.lin = a1 * _X + a3
        self.S = S
        self._translations: Dict[int, Tuple["CurveFunction", "CurveFunction"]] = {}

    @classmethod
    def from_curve(cls, E: EllipticCurve, S: Optional[Point] = None) -> "FunctionField":
        return cls(*E.coeffs, S=S)

    def __eq__(self, other):
        return isinstance(other, FunctionField) and self.a == other.a

    def __hash__(self):
        return hash(self.a)

    # elements ---------------------------------------------------------------
    def element(self, U, V=0, D=1, *, reduce: bool = True) -> "CurveFunction":
        return CurveFunction(self, Poly.const(U) if not isinstance(U, Poly) else U,
                             Poly.const(V) if not isinstance(V, Poly) else V,
                             Poly.const(D) if not isinstance(D, Poly) else D, reduce=reduce)

    def const(self, c) -> "CurveFunction":
        """Embed a scalar (Q(z3), polynomial in a/d/t, ParamFrac or Kummer element)."""
        if isinstance(c, CurveFunction):
            return c
        if isinstance(c, KummerElement):
            t = Poly.var("t")
            out = self.element(0)
            for i, ci in enumerate(c.c):
                if not ci.is_zero():
                    out = out + self.element(ci.num * t ** i, 0, ci.den)
            return out
        if isinstance(c, ParamFrac):
            return self.element(c.num, 0, c.den)
        return self.element(Poly.const(c) if not isinstance(c, Poly) else c)

    @cached_property
    def x(self) -> "CurveFunction":
        return self.element(_X)

    @cached_property
    def y(self) -> "CurveFunction":
        return self.element(0, 1)

    @cached_property
    def t(self) -> "CurveFunction":
        return self.element(Poly.var("t"))

    @cached_property
    def one(self) -> "CurveFunction":
        return self.element(1)

    @cached_property
    def curve(self) -> EllipticCurve:
        return EllipticCurve(*(self.const(c) for c in self.a), field="function field")

    def lift_point(self, P: Point) -> Point:
        if P.is_infinity:
            return P
        return Point(self.const(P.x), self.const(P.y))

    @property
    def generic_point(self) -> Point:
        return Point(self.x, self.y)

    def translation(self, k: int = 1) -> Tuple["CurveFunction", "CurveFunction"]:
        """Coordinates of (x, y) + kS, derived from the group law with the generic point."""
        if self.S is None:
            raise ValueError("no distinguished point S on this function field")
        k %= 3
        if k not in self._translations:
            if k == 0:
                self._translations[k] = (self.x, self.y)
            else:
                E = self.curve
                kS = scalar_mul(E, k, self.lift_point(self.S))
                P = point_add(E, self.generic_point, kS)
                self._translations[k] = (P.x, P.y)
        return self._translations[k]

    def parse(self, text: str) -> "CurveFunction":
        env = {"x": self.x, "y": self.y, "t": self.t, "a": self.const(Poly.var("a")),
               "d": self.const(Poly.var("d")), "z3": self.const(ZETA)}
        return parse_expression(text, env, self.const)


def family_function_field() -> FunctionField:
    """Function field of E_a with S = (0, 0), a kept symbolic."""
    E, S, _ = curve_from_parameter()
    return FunctionField.from_curve(E, S=Point(Poly(), Poly()))


class CurveFunction:
    """(U + V*y) / D in canonical form."""

    __slots__ = ("ff", "U", "V", "D")

    def __init__(self, ff: FunctionField, U: Poly, V: Poly, D: Poly, *, reduce: bool = True):
        if D.is_zero():
            raise ZeroDivisionError("zero denominator")
        if D.degree("t") > 0:
            raise ValueError("denominator must be free of t")
        self.ff = ff
        if U.is_zero() and V.is_zero():
            self.U, self.V, self.D = U, V, _ONE
            return
        if reduce and not D.is_constant():
            U, V, D = _cancel(U, V, D)
        lc = D.content_scalar()
        if lc != 1:
            inv = Poly.const(lc.inverse())
            U, V, D = U * inv, V * inv, D * inv
        self.U, self.V, self.D = U, V, D

    # predicates -------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.U.is_zero() and self.V.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def _coerce(self, other) -> "CurveFunction":
        if isinstance(other, CurveFunction):
            if other.ff is not self.ff and other.ff != self.ff:
                raise ValueError("functions on different curves")
            return other
        return self.ff.const(other)

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self.D == other.D:
            return self.U == other.U and self.V == other.V
        return (self - other).is_zero()

    __hash__ = None

    # arithmetic -------------------------------------------------------------
    def __neg__(self):
        return CurveFunction(self.ff, -self.U, -self.V, self.D, reduce=False)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self.D == other.D:
            return CurveFunction(self.ff, self.U + other.U, self.V + other.V, self.D)
        g = poly_gcd(self.D, other.D)
        if g.is_constant():
            m1, m2 = other.D, self.D
        else:
            m1, m2 = other.D.divexact(g), self.D.divexact(g)
        return CurveFunction(self.ff, self.U * m1 + other.U * m2, self.V * m1 + other.V * m2, self.D * m1)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        ff = self.ff
        vv = self.V * other.V
        U = self.U * other.U + vv * ff.cubic
        V = self.U * other.V + self.V * other.U - vv * ff.lin
        return CurveFunction(ff, U, V, self.D * other.D)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.ff.one, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def y_conjugate(self) -> "CurveFunction":
        """Image under the hyperelliptic involution y -> -y - a1 x - a3."""
        return CurveFunction(self.ff, self.U - self.V * self.ff.lin, -self.V, self.D, reduce=False)

    def y_norm(self) -> Poly:
        """(U + V y)(U + V ybar), a polynomial in x (and a, d, t)."""
        ff = self.ff
        return self.U * self.U - self.U * self.V * ff.lin - self.V * self.V * ff.cubic

    def inverse(self) -> "CurveFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero function")
        conj = self.y_conjugate()
        N = self.y_norm()
        U, V = conj.U * self.D, conj.V * self.D
        if N.degree("t") > 0:
            # clear t from the denominator with the Kummer norm
            extra = N.galois(1) * N.galois(2)
            U, V, N = U * extra, V * extra, N * extra
            assert N.degree("t") <= 0
        return CurveFunction(self.ff, U, V, N)

    def __truediv__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    # maps -------------------------------------------------------------------
    def galois(self, k: int) -> "CurveFunction":
        """Act on scalars only: t -> z3^k t."""
        return CurveFunction(self.ff, self.U.galois(k), self.V.galois(k), self.D, reduce=False)

    def compose(self, X: "CurveFunction", Y: "CurveFunction") -> "CurveFunction":
        """f(X, Y) for a rational map (x, y) -> (X, Y) of the curve to itself."""
        num = _horner(self.U, X) + _horner(self.V, X) * Y
        return num / _horner(self.D, X)

    def is_constant(self) -> bool:
        return self.V.is_zero() and self.U.degree("x") <= 0 and self.D.degree("x") <= 0

    def as_scalar(self) -> KummerElement:
        if not self.is_constant():
            raise ValueError("not a constant function")
        num = KummerElement.from_poly(self.U)
        return num * ParamFrac(self.D).inverse()

    # text -------------------------------------------------------------------
    def __str__(self):
        d = "" if self.D == 1 else f"/({self.D})"
        u = f"({self.U}){d}"
        if self.V.is_zero():
            return u
        return f"{u} + ({self.V}){d}*y"

    def __repr__(self):
        return f"CurveFunction({self})"


def _cancel(U: Poly, V: Poly, D: Poly) -> Tuple[Poly, Poly, Poly]:
    """Divide out the gcd of D with every t-component of U and V."""
    q = [U.divexact(D) if U.degree("t") <= 0 else None, V.divexact(D) if V.degree("t") <= 0 else None]
    if q[0] is not None and q[1] is not None:
        return q[0], q[1], _ONE
    g = D
    for P in (U, V):
        for part in P.coefficients("t").values():
            g = poly_gcd(g, part)
            if g.is_constant():
                return U, V, D
    parts = []
    t = Poly.var("t")
    for P in (U, V):
        out = Poly()
        for e, part in P.coefficients("t").items():
            out = out + part.divexact(g) * t ** e
        parts.append(out)
    return parts[0], parts[1], D.divexact(g)


def _horner(p: Poly, X: CurveFunction) -> CurveFunction:
    ff = X.ff
    coeffs = p.coefficients("x")
    if not coeffs:
        return ff.element(0)
    top = max(coeffs)
    acc = ff.const(coeffs.get(top, Poly()))
    for e in range(top - 1, -1, -1):
        acc = acc * X
        c = coeffs.get(e)
        if c is not None:
            acc = acc + ff.const(c)
    return acc


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def ff_mul(f: CurveFunction, g: CurveFunction) -> CurveFunction:
    return f * g


def _scalar(v, modulus, params) -> KummerElement:
    if isinstance(v, KummerElement):
        return v.subs(**params) if params else v
    p = ParamFrac.coerce(v)
    if params:
        p = p.subs(**params)
    return KummerElement(p, modulus=modulus)


def evaluate(f: CurveFunction, P: Point, **params) -> KummerElement:
    """u(x_P) + v(x_P) y_P, with optional specialization of a and d (e.g. a=2, d=5)."""
    if P.is_infinity:
        raise PoleAtPoint("evaluation at the point at infinity is not supported")
    d_val = params.get("d")
    modulus = Poly.var("d") if d_val is None else d_val
    xP = _scalar(P.x, modulus, params)
    yP = _scalar(P.y, modulus, params)

    a_only = {"a": params["a"]} if "a" in params else {}

    def ev(p: Poly) -> KummerElement:
        acc = KummerElement(0, modulus=modulus)
        coeffs = p.coefficients("x")
        if not coeffs:
            return acc
        for e in range(max(coeffs), -1, -1):
            acc = acc * xP
            c = coeffs.get(e)
            if c is not None:
                k = KummerElement.from_poly(c.subs(**a_only))
                acc = acc + (k.with_modulus(modulus) if d_val is not None else k)
        return acc

    den = ev(f.D)
    if den.is_zero():
        raise PoleAtPoint(f"denominator {f.D} vanishes at {P}")
    return (ev(f.U) + ev(f.V) * yP) / den


def translate_by_S(f: CurveFunction, k: int = 1) -> CurveFunction:
    """f composed with P -> P + kS."""
    X, Y = f.ff.translation(k)
    return f.compose(X, Y)


def twisted_sigma(f: CurveFunction, k: int) -> CurveFunction:
    """Twisted action f -> f^sigma o tau_{kS} for sigma(t) = z3^k t."""
    k %= 3
    if k == 0:
        return f
    return translate_by_S(f.galois(k), k)


def translation_eigenvalue(f: CurveFunction) -> Cyc:
    """The scalar c with f(P + S) = c f(P); raises NotEigenfunction otherwise."""
    if f.is_zero():
        raise NotEigenfunction("zero function")
    ratio = translate_by_S(f) / f
    if not ratio.is_constant():
        raise NotEigenfunction(f"f o tau_S / f = {ratio} is not constant")
    if ratio.U.variables() or ratio.D.variables():
        raise NotEigenfunction(f"eigenvalue {ratio} is not in Q(z3)")
    return ratio.U.to_cyc() / ratio.D.to_cyc()
