"""Exact arithmetic over Q, Q(z3) and the Kummer extension Q(z3)(a, d)(t), t^3 = d.

Everything here is exact. ``z3`` denotes a primitive cube root of unity with
minimal polynomial ``z3^2 + z3 + 1``.

Polynomials (:class:`Poly`) live in Q(z3)[a, d, t, x] / (t^3 - d).  The symbol
``d`` is kept as an honest variable, so a single identity checked with symbolic
``d`` covers every twist.  Parameter polynomials in ``a`` and ``d`` only are the
``ParamPoly`` of the docs; rational functions of them are :class:`ParamFrac`.
"""

from __future__ import annotations

import enum
import os
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, Optional, Tuple, Union

__all__ = [
    "Cyc",
    "ZETA",
    "SplitType",
    "split_type",
    "is_prime",
    "Poly",
    "ParamPoly",
    "ParamFrac",
    "KummerElement",
    "ResourceLimitError",
    "cyc_mul",
    "cyc_norm",
    "kummer_mul",
    "galois_on_scalars",
    "poly_gcd",
    "monomial_limit",
    "cyc_sqrt",
    "rational_sqrt",
]

Number = Union[int, Fraction]


class ResourceLimitError(RuntimeError):
    """Raised when an intermediate polynomial exceeds the monomial budget."""


def monomial_limit() -> int:
    return int(os.environ.get("TWIST_MONOMIAL_LIMIT", "250000"))


def _norm_num(c: Number) -> Number:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"cannot convert {c!r} to a rational")


# ---------------------------------------------------------------------------
# Q(z3)
# ---------------------------------------------------------------------------


class Cyc:
    """An element r + s*z3 of Q(z3)."""

    __slots__ = ("r", "s")

    def __init__(self, r: Number = 0, s: Number = 0):
        self.r = _norm_num(r if isinstance(r, int) else _to_fraction(r))
        self.s = _norm_num(s if isinstance(s, int) else _to_fraction(s))

    @classmethod
    def coerce(cls, v) -> "Cyc":
        if isinstance(v, Cyc):
            return v
        if isinstance(v, (int, Fraction)):
            return cls(v, 0)
        raise TypeError(f"cannot coerce {type(v).__name__} into Q(z3)")

    def __repr__(self):
        return f"Cyc({self.r!r}, {self.s!r})"

    def __str__(self):
        if self.s == 0:
            return str(self.r)
        if self.r == 0:
            return "z3" if self.s == 1 else ("-z3" if self.s == -1 else f"{self.s}*z3")
        sign = "-" if self.s < 0 else "+"
        mag = abs(self.s)
        tail = "z3" if mag == 1 else f"{mag}*z3"
        return f"{self.r}{sign}{tail}"

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.s == 0 and self.r == other
        if not isinstance(other, Cyc):
            return NotImplemented
        return self.r == other.r and self.s == other.s

    def __hash__(self):
        return hash((self.r, self.s))

    def __bool__(self):
        return self.r != 0 or self.s != 0

    def is_zero(self) -> bool:
        return self.r == 0 and self.s == 0

    def __neg__(self):
        return Cyc(-self.r, -self.s)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyc(self.r + other, self.s)
        if not isinstance(other, Cyc):
            return NotImplemented
        return Cyc(self.r + other.r, self.s + other.s)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyc(self.r - other, self.s)
        if not isinstance(other, Cyc):
            return NotImplemented
        return Cyc(self.r - other.r, self.s - other.s)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyc(self.r * other, self.s * other)
        if not isinstance(other, Cyc):
            return NotImplemented
        # z3^2 = -1 - z3
        rr = self.s * other.s
        return Cyc(self.r * other.r - rr, self.r * other.s + self.s * other.r - rr)

    __rmul__ = __mul__

    def conj(self) -> "Cyc":
        """Image under z3 -> z3^2."""
        return Cyc(self.r - self.s, -self.s)

    def norm(self) -> Fraction:
        return Fraction(self.r * self.r - self.r * self.s + self.s * self.s)

    def inverse(self) -> "Cyc":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(z3)")
        c = self.conj()
        return Cyc(Fraction(c.r) / n, Fraction(c.s) / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(z3)")
            return Cyc(Fraction(self.r) / other, Fraction(self.s) / other)
        if not isinstance(other, Cyc):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Cyc.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = Cyc(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_rational(self) -> bool:
        return self.s == 0

    def denominator(self) -> int:
        return _lcm(Fraction(self.r).denominator, Fraction(self.s).denominator)


ZETA = Cyc(0, 1)


def cyc_mul(x: Cyc, y: Cyc) -> Cyc:
    return x * y


def cyc_norm(x: Cyc) -> Fraction:
    """r^2 - r*s + s^2, i.e. x times its conjugate."""
    return x.norm()


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a // gcd(a, b) * b if a and b else 0


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class SplitType(str, enum.Enum):
    SPLIT = "Split"
    INERT = "Inert"
    RAMIFIED = "Ramified"


def split_type(q: int) -> SplitType:
    """Decomposition type of the rational prime q in Q(z3)."""
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    if q == 3:
        return SplitType.RAMIFIED
    return SplitType.SPLIT if q % 3 == 1 else SplitType.INERT


# ---------------------------------------------------------------------------
# Polynomials in a, d, t, x over Q(z3), with t^3 = d
# ---------------------------------------------------------------------------

GENS = ("a", "d", "t", "x")
_IDX = {g: i for i, g in enumerate(GENS)}
# internal key: (e_z3, e_a, e_d, e_t, e_x) with e_z3 in {0, 1}, e_t in {0, 1, 2}
Key = Tuple[int, int, int, int, int]
_ONE_KEY: Key = (0, 0, 0, 0, 0)


def _mono_key(ez, mono):
    return (ez,) + tuple(mono)


class Poly:
    """Sparse polynomial in a, d, t, x with Q(z3) coefficients, reduced by t^3 = d.

    Coefficients in Q(z3) are stored as two rational terms keyed by the z3
    exponent, which keeps the inner multiplication loop on plain ints.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Optional[Dict[Key, Number]] = None):
        self.terms: Dict[Key, Number] = {k: v for k, v in (terms or {}).items() if v != 0}
        self._hash = None

    # constructors -----------------------------------------------------------
    @classmethod
    def const(cls, c) -> "Poly":
        if isinstance(c, Poly):
            return c
        if isinstance(c, Cyc):
            return cls({_ONE_KEY: c.r, (1, 0, 0, 0, 0): c.s})
        if isinstance(c, (int, Fraction)):
            return cls({_ONE_KEY: _norm_num(c)})
        raise TypeError(f"cannot make a constant polynomial from {type(c).__name__}")

    @classmethod
    def var(cls, name: str) -> "Poly":
        if name == "z3":
            return cls({(1, 0, 0, 0, 0): 1})
        e = [0, 0, 0, 0]
        e[_IDX[name]] = 1
        return cls({_mono_key(0, e): 1})

    @classmethod
    def monomial(cls, coeff, exps: Dict[str, int]) -> "Poly":
        e = [0, 0, 0, 0]
        for name, k in exps.items():
            e[_IDX[name]] += k
        p = cls.const(coeff)
        et = e[2]
        e[1] += et // 3
        e[2] = et % 3
        mono = tuple(e)
        return cls({(k[0],) + mono: v for k, v in p.terms.items()})

    @classmethod
    def from_coeffs(cls, var: str, coeffs: Iterable) -> "Poly":
        """sum(coeffs[i] * var^i)."""
        v = cls.var(var)
        result, power = cls(), cls.const(1)
        for c in coeffs:
            result = result + power * cls.const(c)
            power = power * v
        return result

    # basic predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_constant(self) -> bool:
        return all(k[1:] == (0, 0, 0, 0) for k in self.terms)

    def to_cyc(self) -> Cyc:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return Cyc(self.terms.get(_ONE_KEY, 0), self.terms.get((1, 0, 0, 0, 0), 0))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Cyc)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # ring operations --------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, Cyc)):
            return Poly.const(other)
        return None

    def __neg__(self):
        return Poly({k: -v for k, v in self.terms.items()})

    def __add__(self, other):
        other = Poly._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = _norm_num(out.get(k, 0) + v)
        return Poly(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = Poly._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = _norm_num(out.get(k, 0) - v)
        return Poly(out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = Poly._coerce(other)
        if other is None:
            return NotImplemented
        if not self.terms or not other.terms:
            return Poly()
        out: Dict[Key, Number] = {}
        get = out.get
        for (z1, a1, d1, t1, x1), c1 in self.terms.items():
            for (z2, a2, d2, t2, x2), c2 in other.terms.items():
                c = c1 * c2
                t = t1 + t2
                dd = d1 + d2
                if t >= 3:
                    t -= 3
                    dd += 1
                z = z1 + z2
                if z == 2:
                    # z3^2 = -1 - z3
                    k0 = (0, a1 + a2, dd, t, x1 + x2)
                    k1 = (1, a1 + a2, dd, t, x1 + x2)
                    out[k0] = get(k0, 0) - c
                    out[k1] = get(k1, 0) - c
                else:
                    k = (z, a1 + a2, dd, t, x1 + x2)
                    out[k] = get(k, 0) + c
        if len(out) > monomial_limit():
            raise ResourceLimitError(
                f"polynomial product has {len(out)} terms (limit {monomial_limit()}; "
                "raise TWIST_MONOMIAL_LIMIT to allow more)"
            )
        return Poly({k: _norm_num(v) for k, v in out.items()})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly.const(1), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "Poly":
        if isinstance(c, Cyc):
            return self * Poly.const(c)
        return Poly({k: _norm_num(v * c) for k, v in self.terms.items()})

    # structure --------------------------------------------------------------
    def by_monomial(self) -> Dict[Tuple[int, int, int, int], Cyc]:
        """Map exponent tuple (a, d, t, x) -> Q(z3) coefficient."""
        out: Dict[Tuple[int, int, int, int], list] = {}
        for k, v in self.terms.items():
            slot = out.setdefault(k[1:], [0, 0])
            slot[k[0]] += v
        return {m: Cyc(r, s) for m, (r, s) in out.items() if r != 0 or s != 0}

    @classmethod
    def from_monomials(cls, items: Dict[Tuple[int, int, int, int], Cyc]) -> "Poly":
        terms: Dict[Key, Number] = {}
        for m, c in items.items():
            c = Cyc.coerce(c)
            if c.r:
                terms[(0,) + tuple(m)] = c.r
            if c.s:
                terms[(1,) + tuple(m)] = c.s
        return cls(terms)

    def degree(self, var: Optional[str] = None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return max(sum(k[1:]) for k in self.terms)
        i = _IDX[var] + 1
        return max(k[i] for k in self.terms)

    def variables(self) -> Tuple[str, ...]:
        used = set()
        for k in self.terms:
            for g, e in zip(GENS, k[1:]):
                if e:
                    used.add(g)
        return tuple(g for g in GENS if g in used)

    def coefficients(self, var: str) -> Dict[int, "Poly"]:
        """Split by powers of ``var``: {exponent: coefficient polynomial}."""
        i = _IDX[var] + 1
        groups: Dict[int, Dict[Key, Number]] = {}
        for k, v in self.terms.items():
            e = k[i]
            kk = k[:i] + (0,) + k[i + 1:]
            groups.setdefault(e, {})[kk] = v
        return {e: Poly(t) for e, t in groups.items()}

    def leading_term(self) -> Tuple[Tuple[int, int, int, int], Cyc]:
        """Lex-leading monomial (order a > d > t > x) and its coefficient."""
        mons = self.by_monomial()
        m = max(mons)
        return m, mons[m]

    def galois(self, k: int) -> "Poly":
        """Ring map t -> z3^k t fixing a, d, x and Q(z3)."""
        k %= 3
        if k == 0 or not any(key[3] for key in self.terms):
            return self
        result = Poly()
        for et, coeff in self.coefficients("t").items():
            factor = ZETA ** ((k * et) % 3)
            result = result + coeff * Poly.monomial(factor, {"t": et})
        return result

    def conj_z3(self) -> "Poly":
        """Apply the automorphism z3 -> z3^2 to the coefficients."""
        out: Dict[Key, Number] = {}
        for k, v in self.terms.items():
            if k[0] == 0:
                out[k] = _norm_num(out.get(k, 0) + v)
            else:
                # s*z3 -> s*z3^2 = -s - s*z3
                k0 = (0,) + k[1:]
                out[k0] = _norm_num(out.get(k0, 0) - v)
                out[k] = _norm_num(out.get(k, 0) - v)
        return Poly(out)

    def subs(self, **values) -> "Poly":
        """Substitute variables by polynomials or scalars (t is reduced by t^3 = d)."""
        if not values:
            return self
        vals = {name: Poly.const(v) if not isinstance(v, Poly) else v for name, v in values.items()}
        result = Poly()
        cache: Dict[Tuple[str, int], Poly] = {}

        def power(name, e):
            key = (name, e)
            if key not in cache:
                cache[key] = vals[name] ** e
            return cache[key]

        for m, c in self.by_monomial().items():
            term = Poly.const(c)
            rest = {}
            for g, e in zip(GENS, m):
                if not e:
                    continue
                if g in vals:
                    term = term * power(g, e)
                else:
                    rest[g] = e
            if rest:
                term = term * Poly.monomial(1, rest)
            result = result + term
        return result

    def eval_cyc(self, **values) -> Cyc:
        return self.subs(**values).to_cyc()

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        _, lc = self.leading_term()
        return self * Poly.const(lc.inverse())

    def content_scalar(self) -> Cyc:
        _, lc = self.leading_term()
        return lc

    def divexact(self, other: "Poly") -> Optional["Poly"]:
        """self / other if the division is exact, else None.  t-free inputs only."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return Poly()
        if other.degree("t") > 0 or self.degree("t") > 0:
            raise ValueError("exact division is only defined for t-free polynomials")
        gm, gc = other.leading_term()
        ginv = gc.inverse()
        if len(other.terms) <= 2 and other.is_constant():
            return self * Poly.const(ginv)
        quotient: Dict[Tuple[int, int, int, int], Cyc] = {}
        rem = self.by_monomial()
        gmons = other.by_monomial()
        while rem:
            rm = max(rem)
            if any(r < g for r, g in zip(rm, gm)):
                return None
            qm = tuple(r - g for r, g in zip(rm, gm))
            qc = rem[rm] * ginv
            quotient[qm] = qc
            for m, c in gmons.items():
                mm = tuple(u + v for u, v in zip(m, qm))
                val = rem.get(mm, Cyc(0)) - qc * c
                if val.is_zero():
                    rem.pop(mm, None)
                else:
                    rem[mm] = val
        return Poly.from_monomials(quotient)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.by_monomial().items(), reverse=True):
            mono = "*".join(
                g if e == 1 else f"{g}^{e}" for g, e in zip(GENS, m) if e
            )
            if not mono:
                parts.append(_wrap(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{_wrap(c)}*{mono}")
        out = " + ".join(parts)
        return out.replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({self})"


def _wrap(c: Cyc) -> str:
    s = str(c)
    if c.s != 0 and c.r != 0:
        return f"({s})"
    if c.s == 0 and isinstance(c.r, Fraction) and c.r.denominator != 1:
        return f"({s})" if c.r > 0 else f"-({-c.r})"
    return s


ParamPoly = Poly


# ---------------------------------------------------------------------------
# gcd over Q(z3)[a, d, x]
# ---------------------------------------------------------------------------


def _content(f: Poly, var: str) -> Poly:
    coeffs = list(f.coefficients(var).values())
    return reduce(poly_gcd, coeffs[1:], coeffs[0].monic())


def _prem(f: Poly, g: Poly, var: str) -> Poly:
    """Lazy pseudo-remainder of f by g w.r.t. ``var`` (differs from prem by a power of lc(g))."""
    dg = g.degree(var)
    lcg = g.coefficients(var)[dg]
    r = f
    v = Poly.var(var)
    while not r.is_zero() and r.degree(var) >= dg:
        dr = r.degree(var)
        lcr = r.coefficients(var)[dr]
        r = r * lcg - lcr * g * (v ** (dr - dg))
    return r


def _primitive(f: Poly, var: str) -> Poly:
    c = _content(f, var)
    if c.is_constant():
        return f.monic()
    q = f.divexact(c)
    assert q is not None
    return q.monic()


_GCD_PRIME = 1000003  # = 1 mod 3, so z3 has an image in F_p
_GCD_ROOT = pow(2, (_GCD_PRIME - 1) // 3, _GCD_PRIME)
_SPECIAL_POINTS = ({"a": 7919, "d": 104729, "x": 15485863}, {"a": 31337, "d": 271828, "x": 314159})


def _image_mod_p(f: Poly, var: str, point: Dict[str, int]) -> Optional[list]:
    """f with the other variables specialised, z3 -> root, as a list mod p."""
    p, idx = _GCD_PRIME, _IDX[var]
    out: Dict[int, int] = {}
    for k, c in f.terms.items():
        c = Fraction(c)
        if c.denominator % p == 0:
            return None
        val = c.numerator * pow(c.denominator, -1, p) % p
        if k[0]:
            val = val * _GCD_ROOT % p
        for name, e in zip(GENS, k[1:]):
            if e and name != var:
                val = val * pow(point[name], e, p) % p
        out[k[1 + idx]] = (out.get(k[1 + idx], 0) + val) % p
    deg = f.degree(var)
    if out.get(deg, 0) == 0:
        return None
    return [out.get(i, 0) for i in range(deg + 1)]


def _univariate_gcd_degree(u: list, w: list) -> int:
    p = _GCD_PRIME
    while w:
        inv = pow(w[-1], -1, p)
        while len(u) >= len(w):
            c = u[-1] * inv % p
            shift = len(u) - len(w)
            for i, wi in enumerate(w):
                u[shift + i] = (u[shift + i] - c * wi) % p
            while u and u[-1] == 0:
                u.pop()
        u, w = w, u
    return len(u) - 1


def _monomial_content(f: Poly) -> Tuple[int, ...]:
    """Exponents of the largest monomial dividing f (t-free input)."""
    mons = list(f.by_monomial())
    return tuple(min(m[i] for m in mons) for i in range(4))


def _gcd_free_of(f: Poly, g: Poly, var: str) -> bool:
    """Sufficient test that gcd(f, g) has degree 0 in var.

    Specialising the other variables (and reducing mod a prime over which z3
    exists) can only raise the gcd degree, as long as the leading
    coefficients in var survive.
    """
    for point in _SPECIAL_POINTS:
        u, w = _image_mod_p(f, var, point), _image_mod_p(g, var, point)
        if u is None or w is None:
            continue
        if _univariate_gcd_degree(u, w) == 0:
            return True
    return False


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd of t-free polynomials over Q(z3), via recursive primitive PRS."""
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    if f.is_constant() or g.is_constant():
        return Poly.const(1)
    # cheap exits: one divides the other
    if len(g) <= len(f):
        if f.divexact(g) is not None:
            return g.monic()
    elif g.divexact(f) is not None:
        return f.monic()
    mf, mg = _monomial_content(f), _monomial_content(g)
    if mf != (0, 0, 0, 0) or mg != (0, 0, 0, 0):
        common = Poly.monomial(1, dict(zip(GENS, (min(i, j) for i, j in zip(mf, mg)))))
        f1 = f.divexact(Poly.monomial(1, dict(zip(GENS, mf))))
        g1 = g.divexact(Poly.monomial(1, dict(zip(GENS, mg))))
        return (common * poly_gcd(f1, g1)).monic()
    shared = [v for v in ("x", "d", "a") if f.degree(v) > 0 or g.degree(v) > 0]
    for v in shared:
        if f.degree(v) > 0 and g.degree(v) > 0 and _gcd_free_of(f, g, v):
            return poly_gcd(_content(f, v), _content(g, v))
    var = shared[0]
    if f.degree(var) <= 0:
        return poly_gcd(f, _content(g, var))
    if g.degree(var) <= 0:
        return poly_gcd(_content(f, var), g)
    cf, cg = _content(f, var), _content(g, var)
    c = poly_gcd(cf, cg)
    pf = f.divexact(cf) if not cf.is_constant() else f
    pg = g.divexact(cg) if not cg.is_constant() else g
    if pf.degree(var) < pg.degree(var):
        pf, pg = pg, pf
    while not pg.is_zero():
        r = _prem(pf, pg, var)
        pf = pg
        pg = _primitive(r, var) if not r.is_zero() else r
        if not pg.is_zero() and pg.degree(var) == 0:
            # a unit in the var-direction: primitive gcd is trivial
            pf = Poly.const(1)
            break
    h = _primitive(pf, var) if pf.degree(var) > 0 else Poly.const(1)
    return (c * h).monic()


# ---------------------------------------------------------------------------
# rational functions in a, d
# ---------------------------------------------------------------------------


class ParamFrac:
    """num/den with num, den in Q(z3)[a, d]; always gcd-reduced with monic den."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, reduced: bool = False):
        num = Poly.const(num) if not isinstance(num, Poly) else num
        den = Poly.const(1) if den is None else (Poly.const(den) if not isinstance(den, Poly) else den)
        if den.is_zero():
            raise ZeroDivisionError("ParamFrac with zero denominator")
        if num.is_zero():
            self.num, self.den = Poly(), Poly.const(1)
            return
        if not reduced and not den.is_constant():
            g = poly_gcd(num, den)
            if not g.is_constant():
                num = num.divexact(g)
                den = den.divexact(g)
        lc = den.content_scalar()
        if lc != 1:
            inv = Poly.const(lc.inverse())
            num, den = num * inv, den * inv
        self.num, self.den = num, den

    @classmethod
    def coerce(cls, v) -> "ParamFrac":
        if isinstance(v, ParamFrac):
            return v
        if isinstance(v, (Poly, Cyc, int, Fraction)):
            return cls(Poly.const(v) if not isinstance(v, Poly) else v, reduced=True)
        raise TypeError(f"cannot coerce {type(v).__name__} into ParamFrac")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def to_cyc(self) -> Cyc:
        return self.num.to_cyc() / self.den.to_cyc()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Cyc, Poly)):
            other = ParamFrac.coerce(other)
        if not isinstance(other, ParamFrac):
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self):
        return hash((self.num, self.den))

    def __neg__(self):
        return ParamFrac(-self.num, self.den, reduced=True)

    def __add__(self, other):
        try:
            other = ParamFrac.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == other.den:
            return ParamFrac(self.num + other.num, self.den)
        return ParamFrac(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = ParamFrac.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = ParamFrac.coerce(other)
        except TypeError:
            return NotImplemented
        return ParamFrac(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "ParamFrac":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero ParamFrac")
        return ParamFrac(self.den, self.num)

    def __truediv__(self, other):
        try:
            other = ParamFrac.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return ParamFrac.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return ParamFrac(self.num ** n, self.den ** n, reduced=True)

    def scale_z3(self, k: int) -> "ParamFrac":
        return self * ZETA ** (k % 3)

    def subs(self, **values) -> "ParamFrac":
        num = self.num.subs(**values)
        den = self.den.subs(**values)
        if den.is_zero():
            raise ZeroDivisionError(f"denominator {self.den} vanishes under {values}")
        return ParamFrac(num, den)

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"ParamFrac({self})"


# ---------------------------------------------------------------------------
# Kummer extension: c0 + c1 t + c2 t^2, t^3 = d
# ---------------------------------------------------------------------------

D_POLY = Poly.var("d")


class KummerElement:
    """c0 + c1*t + c2*t^2 over Q(z3)(a, d) with t^3 = ``modulus`` (default: d)."""

    __slots__ = ("c", "modulus")

    def __init__(self, c0=0, c1=0, c2=0, modulus=None):
        self.c = (ParamFrac.coerce(c0), ParamFrac.coerce(c1), ParamFrac.coerce(c2))
        self.modulus = ParamFrac.coerce(D_POLY if modulus is None else modulus)

    @classmethod
    def t(cls, modulus=None) -> "KummerElement":
        return cls(0, 1, 0, modulus)

    @classmethod
    def from_poly(cls, p: Poly, modulus=None) -> "KummerElement":
        """Read a t-polynomial (x-free) as a Kummer element."""
        if p.degree("x") > 0:
            raise ValueError("x occurs in a Kummer scalar")
        parts = p.coefficients("t")
        el = cls(parts.get(0, 0), parts.get(1, 0), parts.get(2, 0))
        return el if modulus is None else el.with_modulus(modulus)

    def with_modulus(self, modulus) -> "KummerElement":
        """Specialize d := modulus in the coefficients and in t^3 = d."""
        m = ParamFrac.coerce(modulus)
        if m == ParamFrac.coerce(D_POLY):
            return KummerElement(*self.c, modulus=m)
        if not m.den.is_constant():
            raise ValueError("modulus must be a polynomial")
        sub = m.num * Poly.const(m.den.to_cyc().inverse())
        return KummerElement(*(ci.subs(d=sub) for ci in self.c), modulus=m)

    def _coerce(self, other) -> "KummerElement":
        if isinstance(other, KummerElement):
            return other
        return KummerElement(ParamFrac.coerce(other), modulus=self.modulus)

    def is_zero(self) -> bool:
        return all(ci.is_zero() for ci in self.c)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Cyc, Poly, ParamFrac)):
            other = self._coerce(other)
        if not isinstance(other, KummerElement):
            return NotImplemented
        return all(x == y for x, y in zip(self.c, other.c))

    def __hash__(self):
        return hash(self.c)

    def __neg__(self):
        return KummerElement(*(-ci for ci in self.c), modulus=self.modulus)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return KummerElement(*(x + y for x, y in zip(self.c, other.c)), modulus=self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return KummerElement(*(x - y for x, y in zip(self.c, other.c)), modulus=self.modulus)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        x0, x1, x2 = self.c
        y0, y1, y2 = other.c
        m = self.modulus
        # t^3 = m, t^4 = m t
        c0 = x0 * y0 + m * (x1 * y2 + x2 * y1)
        c1 = x0 * y1 + x1 * y0 + m * (x2 * y2)
        c2 = x0 * y2 + x1 * y1 + x2 * y0
        return KummerElement(c0, c1, c2, modulus=m)

    __rmul__ = __mul__

    def galois(self, k: int) -> "KummerElement":
        """t -> z3^k t."""
        k %= 3
        return KummerElement(
            self.c[0], self.c[1].scale_z3(k), self.c[2].scale_z3(2 * k), modulus=self.modulus
        )

    def norm(self) -> ParamFrac:
        n = self * self.galois(1) * self.galois(2)
        assert n.c[1].is_zero() and n.c[2].is_zero()
        return n.c[0]

    def inverse(self) -> "KummerElement":
        conj = self.galois(1) * self.galois(2)
        n = (self * conj).c[0]
        if n.is_zero():
            raise ZeroDivisionError(f"{self} is not invertible")
        return conj * n.inverse()

    def __truediv__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self._coerce(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def subs(self, **values) -> "KummerElement":
        m = self.modulus.subs(**values)
        return KummerElement(*(ci.subs(**values) for ci in self.c), modulus=m)

    def __str__(self):
        return f"({self.c[0]})+({self.c[1]})*t+({self.c[2]})*t^2"

    def __repr__(self):
        return f"KummerElement({self})"


def kummer_mul(x: KummerElement, y: KummerElement) -> KummerElement:
    return x * y


def galois_on_scalars(x: KummerElement, k: int) -> KummerElement:
    return x.galois(k)


# ---------------------------------------------------------------------------
# square roots
# ---------------------------------------------------------------------------


def rational_sqrt(q) -> Optional[Fraction]:
    from math import isqrt

    q = Fraction(q)
    if q < 0:
        return None
    n, m = q.numerator, q.denominator
    rn, rm = isqrt(n), isqrt(m)
    if rn * rn == n and rm * rm == m:
        return Fraction(rn, rm)
    return None


def cyc_sqrt(c: Cyc) -> Optional[Cyc]:
    """A square root of c in Q(z3), or None.  Uses z3 = (-1 + sqrt(-3)) / 2."""
    c = Cyc.coerce(c)
    if c.is_zero():
        return Cyc(0)
    p = Fraction(c.r) - Fraction(c.s) / 2
    q = Fraction(c.s) / 2
    root_norm = rational_sqrt(p * p + 3 * q * q)
    if root_norm is None:
        return None
    for sign in (1, -1):
        m = rational_sqrt((p + sign * root_norm) / 2)
        if m is None:
            continue
        if m != 0:
            n = q / (2 * m)
        else:
            n2 = -p / 3
            n = rational_sqrt(n2)
            if n is None:
                continue
        cand = Cyc(m + n, 2 * n)
        if cand * cand == c:
            return cand
    return None
