from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cycs, nonzero_cycs, polys
from torsion_twists.field import (
    ZETA,
    Cyc,
    KummerElement,
    ParamFrac,
    Poly,
    ResourceLimitError,
    SplitType,
    cyc_norm,
    cyc_sqrt,
    galois_on_scalars,
    poly_gcd,
    split_type,
)

a, d = Poly.var("a"), Poly.var("d")


def test_zeta_relations():
    assert ZETA ** 3 == 1
    assert ZETA * ZETA == Cyc(-1, -1)
    assert 1 + ZETA + ZETA ** 2 == 0
    assert ZETA.conj() == ZETA ** 2


def test_norm_values():
    assert cyc_norm(Cyc(2, 1)) == 3
    assert cyc_norm(Cyc(1, -1)) == 3  # 1 - z3 lies over the ramified prime
    assert cyc_norm(ZETA) == 1


def test_inverse_and_division():
    x = Cyc(3, 5)
    assert x * x.inverse() == 1
    assert Cyc(7) / Cyc(2) == Cyc(Fraction(7, 2))
    with pytest.raises(ZeroDivisionError):
        Cyc(0).inverse()


def test_str_forms():
    assert str(Cyc(1, 2)) == "1+2*z3"
    assert str(Cyc(0, -1)) == "-z3"
    assert str(Cyc(Fraction(1, 2), -3)) == "1/2-3*z3"


@pytest.mark.parametrize("q,kind", [(7, SplitType.SPLIT), (13, SplitType.SPLIT), (2, SplitType.INERT),
                                    (5, SplitType.INERT), (3, SplitType.RAMIFIED)])
def test_split_type(q, kind):
    assert split_type(q) is kind


def test_split_type_rejects_composites():
    with pytest.raises(ValueError):
        split_type(15)


@given(cycs(rational=True), cycs(rational=True), cycs(rational=True))
def test_cyc_ring_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x - x == 0


@given(cycs(rational=True), cycs(rational=True))
def test_norm_multiplicative(x, y):
    assert cyc_norm(x * y) == cyc_norm(x) * cyc_norm(y)


@given(nonzero_cycs())
def test_norm_positive(x):
    assert cyc_norm(x) > 0


@given(cycs())
def test_sqrt_of_square(x):
    r = cyc_sqrt(x * x)
    assert r is not None and r * r == x * x


def test_sqrt_none_for_non_square():
    assert cyc_sqrt(Cyc(2)) is None
    assert cyc_sqrt(ZETA) is not None  # z3 = (z3^2)^2


def test_t_cubed_is_d():
    t = Poly.var("t")
    assert t ** 3 == d
    assert t ** 5 == d * t * t


def test_poly_str_and_eval():
    p = (1 + Poly.const(ZETA)) * a ** 2 - 3
    assert p.eval_cyc(a=2) == Cyc(1, 4)
    assert "a^2" in str(p)


@given(polys(), polys(), polys())
@settings(max_examples=40)
def test_poly_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert (p * q) * r == p * (q * r)


@given(polys(max_terms=3), polys(max_terms=3))
@settings(max_examples=30)
def test_gcd_divides(p, q):
    if p.is_zero() or q.is_zero():
        return
    g = poly_gcd(p * q, p)
    assert (p * q).divexact(g) is not None
    assert p.divexact(g) is not None


def test_gcd_known():
    f = (a - 1) * (a + Poly.const(ZETA)) * d
    g = (a - 1) * (d + a)
    assert poly_gcd(f, g) == a - 1


def test_param_frac_reduces():
    f = ParamFrac((a - 1) * (a + 2), (a - 1) * d)
    assert f.den == d
    assert f == ParamFrac(a + 2, d)


def test_kummer_norm_and_inverse():
    t = KummerElement.t()
    x = KummerElement(1, 2, Cyc(0, 1))
    assert x * x.inverse() == 1
    assert t * t * t == KummerElement(d)
    assert x.norm() == (x * x.galois(1) * x.galois(2)).c[0]


@given(cycs(), cycs(), cycs(), st.integers(0, 5))
@settings(max_examples=50)
def test_galois_order_three(c0, c1, c2, k):
    x = KummerElement(c0, c1, c2)
    assert galois_on_scalars(galois_on_scalars(galois_on_scalars(x, k), k), k) == x.galois(3 * k) == x
    assert galois_on_scalars(x, 1).galois(1) == galois_on_scalars(x, 2)


def test_galois_moves_t():
    t = KummerElement.t()
    assert galois_on_scalars(t, 1) == KummerElement(0, ZETA, 0)
    assert galois_on_scalars(t, 2) == KummerElement(0, ZETA ** 2, 0)


def test_monomial_limit(monkeypatch):
    monkeypatch.setenv("TWIST_MONOMIAL_LIMIT", "50")
    p = sum((Poly.monomial(1, {"a": i, "d": j}) for i in range(8) for j in range(3)), Poly())
    with pytest.raises(ResourceLimitError):
        p * p
