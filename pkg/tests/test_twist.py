from fractions import Fraction

import pytest

from torsion_twists.curve import SingularCurve, curve_from_parameter
from torsion_twists.field import ZETA, Cyc, KummerElement, ParamFrac, Poly
from torsion_twists.funcfield import evaluate, twisted_sigma
from torsion_twists.twist import (
    ALPHA,
    BETA,
    INV_DEN0,
    Z_Y,
    DenominatorVanishes,
    NotCubeFree,
    NotSquareFree,
    NullspaceDimensionUnexpected,
    build_zw,
    cocycle_composite,
    cocycle_display,
    cubic_alpha,
    cubic_beta,
    cubic_model,
    expected_relation,
    fit_relation,
    inverse_map,
    is_power_free,
    j_invariant_2torsion,
    printed_beta,
    quadratic_model,
    quartic_jacobian_j,
    sample_points,
    verify_cocycle,
    verify_cubic_relation,
    verify_inverse,
)

A = Poly.var("a")
D = Poly.var("d")
Z = Poly.const(ZETA)


# --- p = 2 ------------------------------------------------------------------

def test_quadratic_model_examples():
    m = quadratic_model(1, 1, 5)
    assert (m.A, m.B, m.C) == (-3, -10, 25)
    assert m.equation() == "5*y^2 = -3*x^4 - 10*x^2 + 25"
    assert quadratic_model(0, -1, 1).equation() == "y^2 = 4*x^4 + 1"
    assert m.as_dict() == {"p": 2, "d": 5, "A": "-3", "B": "-10", "C": "25"}


def test_quadratic_model_errors():
    with pytest.raises(NotSquareFree):
        quadratic_model(1, 1, 4)
    with pytest.raises(SingularCurve):
        quadratic_model(2, 1, 3)
    with pytest.raises(SingularCurve):
        quadratic_model(1, 0, 3)


@pytest.mark.parametrize("ab", [(1, 1), (0, -1), (3, 2), (Fraction(1, 2), -3)])
@pytest.mark.parametrize("d", [1, -1, 5, -6, 7])
def test_quartic_jacobian_matches_source_curve(ab, d):
    assert quartic_jacobian_j(quadratic_model(*ab, d)) == j_invariant_2torsion(*ab)


def test_power_free():
    assert is_power_free(6, 2) and not is_power_free(12, 2)
    assert is_power_free(12, 3) and not is_power_free(24, 3)
    assert not is_power_free(0, 2)
    with pytest.raises(NotCubeFree):
        cubic_model(2, 16)


# --- p = 3 coefficients -----------------------------------------------------

# coefficients of the degree-9 polynomial as typeset, highest degree first
_TYPESET = [(-1, 0), (9, 3), (-33, -3), (64, 63), (-69, -105), (36, 105), (1, -63), (-12, 21), (6, -3), (-1, 0)]


def test_alpha_beta_at_small_a():
    assert cubic_alpha(0) == Cyc(1)
    assert cubic_beta(0) == Cyc(-1)
    assert cubic_alpha(1) == Cyc(0)


def test_printed_beta_at_one_by_horner():
    acc = Cyc(0)
    for r, s in _TYPESET:
        acc = acc * 1 + Cyc(r, s)
    assert acc == 18 * ZETA
    assert printed_beta(1) == 18 * ZETA


def test_printed_beta_matches_typeset_everywhere():
    for k in range(-3, 4):
        a = Cyc(k, 1 - k)
        acc = Cyc(0)
        for r, s in _TYPESET:
            acc = acc * a + Cyc(r, s)
        assert printed_beta(a) == acc


def test_corrected_beta_differs_only_in_a7():
    diff = BETA - printed_beta()
    assert diff == -18 * Z * A ** 7
    assert cubic_beta(1) == Cyc(0)


def test_cubic_model_fields():
    a = Cyc(2, -1)
    m = cubic_model(a, 2)
    assert m.alpha == cubic_alpha(a) and m.beta == cubic_beta(a)
    assert not m.is_singular
    assert set(m.form) == {(3, 0, 0), (1, 1, 1), (0, 3, 0), (0, 0, 3)}
    assert m.as_dict()["d"] == 2


def test_cubic_model_a0_equation():
    assert cubic_model(0, 2).equation() == "2*z^3 + 6*z*w + 4*w^3 + (-1) = 0"


def test_discriminant_vanishes_with_beta():
    # a = 1 kills alpha and beta: the form degenerates to d(Z^3 + d W^3)
    assert cubic_model(1, 2).is_singular


# --- symbolic identities ----------------------------------------------------

def test_z_y_coefficient():
    assert Z_Y == (1 + Z) * A ** 2 + (-2 * Z - 1) * A + Z


def test_relation_holds_symbolically():
    z, w = build_zw()
    assert verify_cubic_relation(z, w)


def test_relation_rejects_perturbations():
    z, w = build_zw()
    two = z.ff.const(Poly.const(2))
    assert not verify_cubic_relation(two * z, w)
    assert not verify_cubic_relation(z, w, beta=BETA + Poly.const(1))
    assert not verify_cubic_relation(z, w, beta=printed_beta())


def test_w_times_t_squared_is_t_free():
    z, w = build_zw()
    t = z.ff.t
    for f in (z * t, w * t * t):
        assert all(m[2] == 0 for P in (f.U, f.V, f.D) for m in P.by_monomial())


def test_twisted_invariance():
    z, w = build_zw()
    for k in range(3):
        assert twisted_sigma(z, k) == z
        assert twisted_sigma(w, k) == w


def test_inverse_symbolic():
    assert verify_inverse()


def test_inverse_denominator_constant():
    assert INV_DEN0 == -A ** 3 + (2 * Z + 2) * A ** 2 - 2 * Z * A - 1


@pytest.mark.parametrize("k", [0, 1, 2])
def test_cocycle(k):
    assert verify_cocycle(k)


def test_cocycle_k1_matches_display():
    assert cocycle_composite(1) == cocycle_display()


def test_cocycle_k0_is_identity():
    ff = build_zw()[0].ff
    assert cocycle_composite(0) == (ff.x, ff.y)


# --- fitting ----------------------------------------------------------------

def test_fit_recovers_relation():
    z, w = build_zw()
    res = fit_relation(z, w)
    assert res.rank == 3
    expected = expected_relation()
    assert res.normalized == [ParamFrac(e) for e in expected]
    assert res.normalized[1] == ParamFrac(3 * D * ALPHA)


def test_fit_vector_is_primitive_multiple():
    z, w = build_zw()
    vec = fit_relation(z, w).vector
    expected = expected_relation()
    # cross ratios vanish: vec is proportional to expected
    for i in range(4):
        assert (vec[i] * expected[0] - vec[0] * expected[i]).is_zero()


def test_fit_degenerate_zero_w():
    z, _ = build_zw()
    with pytest.raises(NullspaceDimensionUnexpected) as err:
        fit_relation(z, z.ff.const(Poly()))
    assert err.value.dim == 2


def test_fit_w_equal_z_gives_swap_relation():
    # z^3 and w^3 coincide, z w = z^2 and 1 stay independent: the nullspace is a line
    z, _ = build_zw()
    res = fit_relation(z, z)
    assert [v.is_zero() for v in res.vector] == [False, True, False, True]
    assert (res.vector[0] + res.vector[2]).is_zero()


# --- concrete points --------------------------------------------------------

def _points_check(a, d, count):
    E, _, _ = curve_from_parameter(a)
    pts = sample_points(a, count)
    assert len(pts) == count
    z, w = build_zw()
    m = cubic_model(a, d)

    def lift(p):
        return KummerElement(p.eval_cyc(a=a), modulus=d)

    t = KummerElement.t(d)
    for P in pts:
        assert E.contains(P)
        zv, wv = evaluate(z, P, a=a, d=d), evaluate(w, P, a=a, d=d)
        assert m.evaluate(zv, wv).is_zero()
        X, Y = inverse_map(zv, wv, t, lift)
        assert X == KummerElement(P.x, modulus=d)
        assert Y == KummerElement(P.y, modulus=d)


def test_twenty_points_satisfy_model():
    _points_check(Cyc(2, -1), 2, 20)


def test_points_other_twist():
    _points_check(Cyc(2, -1), 7, 5)


def test_inverse_map_denominator_vanishes():
    # t z + t^2 w + INV_DEN0 = 0 when the constant is forced to vanish at z = w = 0
    with pytest.raises(DenominatorVanishes):
        inverse_map(Cyc(0), Cyc(0), Cyc(1), lambda p: Cyc(0) if p is INV_DEN0 else Cyc(1))
    with pytest.raises(DenominatorVanishes):
        inverse_map(Cyc(1), Cyc(0), Cyc(1), lambda p: Cyc(0) if p is Z_Y else Cyc(1))
