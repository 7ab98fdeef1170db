"""Twist models attached to torsion points: the quartic (p = 2) and the cubic (p = 3).

For p = 3 the curve is E_a with S = (0, 0), T = (-a, a).  The functions z and
w (scaled by 1/t and 1/t^2, t^3 = d) satisfy

    d z^3 + 3 d alpha z w + d^2 w^3 + beta = 0,

and every identity in this module is checked exactly with a and d symbolic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from sympy import factorint

from .curve import Point, SingularCurve
from .field import ZETA, Cyc, ParamFrac, Poly, poly_gcd
from .funcfield import CurveFunction, FunctionField, family_function_field

__all__ = [
    "NotPowerFree",
    "NotSquareFree",
    "NotCubeFree",
    "NullspaceDimensionUnexpected",
    "DenominatorVanishes",
    "QuarticModel",
    "CubicModel",
    "is_power_free",
    "quadratic_model",
    "cubic_alpha",
    "cubic_beta",
    "printed_beta",
    "cubic_model",
    "build_zw",
    "verify_cubic_relation",
    "inverse_map",
    "verify_inverse",
    "verify_cocycle",
    "cocycle_display",
    "fit_relation",
    "FitResult",
    "cocycle_composite",
    "expected_relation",
    "sample_points",
]


class NotPowerFree(ValueError):
    pass


class NotSquareFree(NotPowerFree):
    pass


class NotCubeFree(NotPowerFree):
    pass


class NullspaceDimensionUnexpected(ArithmeticError):
    def __init__(self, dim: int):
        super().__init__(f"nullspace has dimension {dim}, expected 1")
        self.dim = dim


class DenominatorVanishes(ZeroDivisionError):
    pass


_a = Poly.var("a")
_d = Poly.var("d")
_z = Poly.const(ZETA)


def _eval_a(p: Poly, a):
    """Evaluate a polynomial in a (symbolic if a is None)."""
    if a is None:
        return p
    if isinstance(a, Poly):
        return p.subs(a=a)
    return p.eval_cyc(a=Cyc.coerce(a))


def is_power_free(d: int, p: int) -> bool:
    if d == 0:
        return False
    return all(e < p for e in factorint(abs(d)).values())


# ---------------------------------------------------------------------------
# p = 2
# ---------------------------------------------------------------------------


def _fmt_term(coeff, mono: str, first: bool) -> str:
    c = Fraction(coeff)
    if c == 0:
        return ""
    sign = "-" if c < 0 else "+"
    mag = abs(c)
    body = (str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}"))
    if first:
        return ("-" if c < 0 else "") + body
    return f" {sign} {body}"


@dataclass(frozen=True)
class QuarticModel:
    """d*y^2 = A*x^4 + B*x^2 + C, the twist of y^2 = x^3 + a x^2 + b x by d."""

    d: int
    A: Fraction
    B: Fraction
    C: Fraction
    a: Optional[Fraction] = None
    b: Optional[Fraction] = None

    p = 2

    def rhs(self, x):
        return self.A * x ** 4 + self.B * x ** 2 + self.C

    def equation(self) -> str:
        rhs = ""
        for coeff, mono in ((self.A, "x^4"), (self.B, "x^2"), (self.C, "")):
            rhs += _fmt_term(coeff, mono, not rhs)
        lhs = "y^2" if self.d == 1 else ("-y^2" if self.d == -1 else f"{self.d}*y^2")
        return f"{lhs} = {rhs or '0'}"

    def as_dict(self) -> dict:
        return {"p": 2, "d": self.d, "A": str(self.A), "B": str(self.B), "C": str(self.C)}

    def discriminant(self) -> Fraction:
        """Discriminant of the binary quartic d*(A x^4 + B x^2 z^2 + C z^4)."""
        a, c, e = self.d * self.A, self.d * self.B, self.d * self.C
        return 16 * a * e * (c * c - 4 * a * e) ** 2


def quadratic_model(a, b, d: int) -> QuarticModel:
    a, b = Fraction(a), Fraction(b)
    if b * (a * a - 4 * b) == 0:
        raise SingularCurve(f"y^2 = x^3 + {a}x^2 + {b}x is singular")
    if not is_power_free(d, 2):
        raise NotSquareFree(f"d = {d} is not square-free")
    return QuarticModel(d, a * a - 4 * b, -2 * a * d, Fraction(d * d), a, b)


def j_invariant_2torsion(a, b) -> Fraction:
    a, b = Fraction(a), Fraction(b)
    c4 = 16 * (a * a - 3 * b)
    return c4 ** 3 / (16 * b * b * (a * a - 4 * b))


def quartic_jacobian_j(model: QuarticModel) -> Fraction:
    """j-invariant of the Jacobian of Y^2 = d*(A x^4 + B x^2 + C)."""
    a, c, e = model.d * model.A, model.d * model.B, model.d * model.C
    I = 12 * a * e + c * c
    J = 72 * a * c * e - 2 * c ** 3
    p, q = -27 * I, -27 * J
    return 1728 * 4 * p ** 3 / (4 * p ** 3 + 27 * q * q)


# ---------------------------------------------------------------------------
# p = 3: coefficients
# ---------------------------------------------------------------------------

ALPHA = _a ** 3 + 2 * _z ** 2 * _a ** 2 + 2 * _z * _a + 1

_BETA_COEFFS = [  # constant term first
    -1,
    3 * (2 - ZETA),
    3 * (7 * ZETA - 4),
    1 - 63 * ZETA,
    3 * (35 * ZETA + 12),
    -3 * (35 * ZETA + 23),
    63 * ZETA + 64,
    -3 * (ZETA + 11),
    3 * (3 + ZETA),
    -1,
]
PRINTED_BETA = Poly.from_coeffs("a", _BETA_COEFFS)
# the a^7 coefficient must read -3(7 z3 + 11) for the model relation to hold
BETA = PRINTED_BETA - 18 * _z * _a ** 7


def cubic_alpha(a=None):
    """a^3 + 2 z3^2 a^2 + 2 z3 a + 1."""
    return _eval_a(ALPHA, a)


def cubic_beta(a=None):
    """The constant term of the cubic model (degree 9 in a)."""
    return _eval_a(BETA, a)


def printed_beta(a=None):
    """beta exactly as typeset, including the a^7 misprint."""
    return _eval_a(PRINTED_BETA, a)


@dataclass(frozen=True)
class CubicModel:
    """d Z^3 + 3 d alpha Z W V + d^2 W^3 + beta V^3 = 0 (affine chart V = 1)."""

    d: int
    alpha: Union[Cyc, Poly]
    beta: Union[Cyc, Poly]
    a: Optional[Cyc] = None

    p = 3

    @property
    def form(self) -> Dict[Tuple[int, int, int], Cyc]:
        """Ternary cubic as {(eZ, eW, eV): coefficient}."""
        alpha, beta = Cyc.coerce(self.alpha), Cyc.coerce(self.beta)
        out = {(3, 0, 0): Cyc(self.d), (1, 1, 1): 3 * self.d * alpha,
               (0, 3, 0): Cyc(self.d * self.d), (0, 0, 3): beta}
        return {k: v for k, v in out.items() if not v.is_zero()}

    def evaluate(self, Z, W, V=1):
        d = self.d
        return d * Z ** 3 + 3 * d * self.alpha * Z * W * V + d * d * W ** 3 + self.beta * V ** 3

    def discriminant(self) -> Cyc:
        """For a X^3 + b Y^3 + c Z^3 + 3 m XYZ this is a b c (a b c + m^3)^3."""
        alpha, beta = Cyc.coerce(self.alpha), Cyc.coerce(self.beta)
        abc = self.d ** 3 * beta
        m = self.d * alpha
        return abc * (abc + m * m * m) ** 3

    @property
    def is_singular(self) -> bool:
        return self.discriminant().is_zero()

    def equation(self) -> str:
        d = self.d
        parts = [f"{d}*z^3", f"({3 * d * Cyc.coerce(self.alpha)})*z*w", f"{d * d}*w^3", f"({self.beta})"]
        if Cyc.coerce(self.alpha).is_rational():
            parts[1] = f"{3 * d * Cyc.coerce(self.alpha)}*z*w"
        return " + ".join(parts) + " = 0"

    def as_dict(self) -> dict:
        return {"p": 3, "d": self.d, "alpha": str(self.alpha), "beta": str(self.beta)}


def cubic_model(a, d: int, *, check_power_free: bool = True) -> CubicModel:
    if check_power_free and not is_power_free(d, 3):
        raise NotCubeFree(f"d = {d} is not cube-free")
    a = Cyc.coerce(a)
    return CubicModel(d, cubic_alpha(a), cubic_beta(a), a)


# ---------------------------------------------------------------------------
# p = 3: the functions z, w and the isomorphism
# ---------------------------------------------------------------------------

# z = (Z_Y y + Z_X) / (t x) + Z_0 / t,  w = (W_Y y + W_X) / (t^2 x) + W_0 / t^2
Z_Y = (1 + _z) * _a ** 2 + (-2 * _z - 1) * _a + _z
Z_X = (1 + _z) * _a ** 4 + (-3 * _z - 1) * _a ** 3 + (2 * _z - 1) * _a ** 2 + _a
Z_0 = (1 + _z) * _a ** 3 - 2 * _z * _a ** 2 - 2 * _a + _z + 1
W_Y = (-1 - _z) * _a ** 2 + (1 + 2 * _z) * _a - _z
W_X = _a ** 4 + (-2 * _z - 3) * _a ** 3 + (3 * _z + 2) * _a ** 2 - _z * _a
W_0 = -_z * _a ** 3 - 2 * _a ** 2 + (2 + 2 * _z) * _a - _z

# inverse (z, w) -> (X, Y)
INV_NUM = (_z + 2) * _a ** 4 + (-5 * _z - 4) * _a ** 3 + (5 * _z + 1) * _a ** 2 + (1 - _z) * _a
INV_DEN0 = -_a ** 3 + (2 * _z + 2) * _a ** 2 - 2 * _z * _a - 1
INV_Y0 = (-_z - 1) * _a ** 3 + 2 * _z * _a ** 2 + 2 * _a + (-_z - 1)
INV_YC = (-_z - 1) * _a ** 4 + (3 * _z + 1) * _a ** 3 + (-2 * _z + 1) * _a ** 2 - _a

# sigma o phi^-1 for sigma(t) = z3 t, as displayed: (X1 * y / x^2, Y1 * y / x^3)
COCYCLE_X = (-_z - 1) * _a ** 2 + _z * _a
COCYCLE_Y = -_z * _a ** 4 - 2 * _a ** 3 + (1 + _z) * _a ** 2


@lru_cache(maxsize=None)
def _family_ff() -> FunctionField:
    return family_function_field()


def build_zw(ff: Optional[FunctionField] = None) -> Tuple[CurveFunction, CurveFunction]:
    """The functions z (scaled by 1/t) and w (scaled by 1/t^2) on E_a."""
    ff = ff or _family_ff()
    x, y, t = ff.x, ff.y, ff.t
    c = ff.const
    z = (c(Z_Y) * y + c(Z_X)) / (t * x) + c(Z_0) / t
    w = (c(W_Y) * y + c(W_X)) / (t * t * x) + c(W_0) / (t * t)
    return z, w


def verify_cubic_relation(z: CurveFunction, w: CurveFunction, alpha=None, beta=None) -> bool:
    """True iff d z^3 + 3 d alpha z w + d^2 w^3 + beta is the zero function."""
    alpha = ALPHA if alpha is None else alpha
    beta = BETA if beta is None else beta
    c = z.ff.const
    expr = c(_d) * z ** 3 + c(3 * _d * Poly.const(alpha) if not isinstance(alpha, Poly) else 3 * _d * alpha) * z * w
    expr = expr + c(_d * _d) * w ** 3 + c(beta)
    return expr.is_zero()


def inverse_map(z0, w0, t, lift: Callable[[Poly], object]):
    """(X, Y) = phi(z0, w0) for the cube root ``t`` (pass z3^k t for phi^sigma).

    ``lift`` embeds polynomials in a into the ring of z0, w0.
    """
    den = t * z0 + t * t * w0 + lift(INV_DEN0)
    if _is_zero(den):
        raise DenominatorVanishes("t z + t^2 w + const vanishes")
    zy = lift(Z_Y)
    if _is_zero(zy):
        raise DenominatorVanishes("(1+z3)a^2 + (-2z3-1)a + z3 vanishes")
    num = lift(INV_NUM)
    X = num / den
    Y = num / zy * (t * z0 + lift(INV_Y0)) / den + lift(INV_YC) / zy
    return X, Y


def _is_zero(v) -> bool:
    return v.is_zero() if hasattr(v, "is_zero") else v == 0


def verify_inverse(ff: Optional[FunctionField] = None) -> bool:
    """phi(z(x, y), w(x, y)) == (x, y) as rational maps."""
    ff = ff or _family_ff()
    z, w = build_zw(ff)
    X, Y = inverse_map(z, w, ff.t, ff.const)
    return X == ff.x and Y == ff.y


def cocycle_composite(k: int, ff: Optional[FunctionField] = None) -> Tuple[CurveFunction, CurveFunction]:
    """phi^sigma o phi^-1 for sigma(t) = z3^k t, as a pair of functions of (x, y)."""
    ff = ff or _family_ff()
    z, w = build_zw(ff)
    return inverse_map(z, w, ff.const(_z ** (k % 3)) * ff.t, ff.const)


def cocycle_display(ff: Optional[FunctionField] = None) -> Tuple[CurveFunction, CurveFunction]:
    """The pair printed for k = 1: (X1 y / x^2, Y1 y / x^3)."""
    ff = ff or _family_ff()
    x, y = ff.x, ff.y
    return ff.const(COCYCLE_X) * y / (x * x), ff.const(COCYCLE_Y) * y / (x * x * x)


def verify_cocycle(k: int, ff: Optional[FunctionField] = None) -> bool:
    """phi^sigma o phi^-1 equals translation by kS."""
    ff = ff or _family_ff()
    X, Y = cocycle_composite(k, ff)
    tX, tY = ff.translation(k)
    return X == tX and Y == tY


# ---------------------------------------------------------------------------
# linear dependence of z^3, z w, w^3, 1
# ---------------------------------------------------------------------------


@dataclass
class FitResult:
    vector: List[Poly]
    normalized: List[ParamFrac]
    rank: int
    equations: int

    def as_dict(self) -> dict:
        return {
            "monomials": ["z^3", "z*w", "w^3", "1"],
            "vector": [str(v) for v in self.vector],
            "normalized": [str(v) for v in self.normalized],
            "rank": self.rank,
            "equations": self.equations,
        }


def _det(m: Sequence[Sequence[Poly]]) -> Poly:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = Poly()
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def _row_primitive(row: List[Poly]) -> List[Poly]:
    nz = [e for e in row if not e.is_zero()]
    if not nz:
        return row
    g = reduce(poly_gcd, nz[1:], nz[0].monic())
    if g.is_constant():
        s = Poly.const(nz[0].content_scalar().inverse())
        return [e * s for e in row]
    return [e.divexact(g) for e in row]


def _echelon(rows: List[List[Poly]], ncols: int) -> List[List[Poly]]:
    """Fraction-free row echelon form (rows are made primitive along the way)."""
    rows = [r for r in (_row_primitive(list(r)) for r in rows) if any(not e.is_zero() for e in r)]
    basis: List[List[Poly]] = []
    col = 0
    while rows and col < ncols:
        pivots = [r for r in rows if not r[col].is_zero()]
        if not pivots:
            col += 1
            continue
        piv = min(pivots, key=lambda r: sum(len(e) for e in r))
        rows = [r for r in rows if r is not piv]
        new_rows = []
        for r in rows:
            if r[col].is_zero():
                new_rows.append(r)
                continue
            nr = [piv[col] * r[j] - r[col] * piv[j] for j in range(ncols)]
            if any(not e.is_zero() for e in nr):
                new_rows.append(_row_primitive(nr))
        basis.append(piv)
        rows = new_rows
        col += 1
    return basis


def fit_relation(z: CurveFunction, w: CurveFunction, *, normalize_to: Optional[Poly] = None) -> FitResult:
    """Nullspace of the coefficient system for (z^3, z w, w^3, 1) over Q(z3)(a, d).

    Each monomial is written as (U + V y) / D over a common denominator and the
    coefficients of every t^i x^j y^k are equated.  The generator is returned
    primitive, and also scaled so its first entry equals ``normalize_to``
    (default: d).
    """
    ff = z.ff
    mons = [z ** 3, z * w, w ** 3, ff.one]
    L = reduce(lambda acc, f: acc * f.D.divexact(poly_gcd(acc, f.D)), mons[1:], mons[0].D)
    columns: List[Dict[Tuple[int, int, int], Poly]] = []
    for f in mons:
        scale = L.divexact(f.D)
        col: Dict[Tuple[int, int, int], Dict] = {}
        for yk, P in ((0, f.U * scale), (1, f.V * scale)):
            for m, c in P.by_monomial().items():
                ea, ed, et, ex = m
                col.setdefault((yk, et, ex), {})[(ea, ed, 0, 0)] = c
        columns.append({k: Poly.from_monomials(v) for k, v in col.items()})
    keys = sorted(set().union(*columns))
    n = len(mons)
    rows = [[columns[i].get(k, Poly()) for i in range(n)] for k in keys]
    basis = _echelon(rows, n)
    rank = len(basis)
    if rank != n - 1:
        raise NullspaceDimensionUnexpected(n - rank)
    vec = []
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in basis]
        dj = _det(minor)
        vec.append(dj if j % 2 == 0 else -dj)
    nz = [v for v in vec if not v.is_zero()]
    g = reduce(poly_gcd, nz[1:], nz[0].monic())
    vec = [v.divexact(g) for v in vec]
    lead = next(v for v in vec if not v.is_zero())
    vec = [v * Poly.const(lead.content_scalar().inverse()) for v in vec]
    target = _d if normalize_to is None else normalize_to
    if vec[0].is_zero():
        normalized = [ParamFrac(v) for v in vec]
    else:
        normalized = [ParamFrac(v * target, vec[0]) for v in vec]
    return FitResult(vec, normalized, rank, len(keys))


def expected_relation() -> List[Poly]:
    """(d, 3 d alpha, d^2, beta)."""
    return [_d, 3 * _d * ALPHA, _d * _d, BETA]


# ---------------------------------------------------------------------------
# sample points on E_a over Q(z3)
# ---------------------------------------------------------------------------


def sample_points(a, count: int = 20, box: int = 8) -> List[Point]:
    """Non-torsion affine points of E_a(Q(z3)).

    Small x = u + v z3 are tried first; the list is then padded with sums of
    earlier points and translates by S, T.  Fewer than ``count`` points are
    returned only if the search finds none at all.
    """
    from .curve import point_add, scalar_mul, curve_from_parameter
    from .field import cyc_sqrt

    E, S, T = curve_from_parameter(a)
    torsion = [point_add(E, scalar_mul(E, i, S), scalar_mul(E, j, T)) for i in range(3) for j in range(3)]
    tx = {(P.x, P.y) for P in torsion if not P.is_infinity}
    found: List = []
    coords = sorted(((u, v) for u in range(-box, box + 1) for v in range(-box, box + 1)),
                    key=lambda p: (abs(p[0]) + abs(p[1]), p))
    for u, v in coords:
        x = Cyc(u, v)
        lin = E.a1 * x + E.a3
        root = cyc_sqrt(lin * lin + 4 * x ** 3)
        if root is None:
            continue
        for y in {(-lin + root) / 2, (-lin - root) / 2}:
            if (x, y) not in tx:
                found.append(type(S)(x, y))
        if len(found) >= count:
            return found[:count]
    seen = set((P.x, P.y) for P in found)
    i = 0
    while found and len(found) < count and i < 4 * count:
        P = found[i % len(found)]
        for Q in [found[(i + 1) % len(found)]] + torsion[1:]:
            R = point_add(E, P, Q)
            if not R.is_infinity and (R.x, R.y) not in tx and (R.x, R.y) not in seen:
                seen.add((R.x, R.y))
                found.append(R)
                if len(found) >= count:
                    break
        i += 1
    return found[:count]
