import random

import pytest

from helpers import curve_through_points
from torsion_twists.curve import (
    INFINITY,
    EllipticCurve,
    GroupLawError,
    Place,
    SingularCurve,
    bad_primes,
    curve_from_parameter,
    discriminant,
    family_discriminant,
    point_add,
    point_neg,
    scalar_mul,
)
from torsion_twists.field import Cyc, Poly


def test_family_points_are_three_torsion():
    E, S, T = curve_from_parameter(2)
    for P in (S, T):
        assert E.contains(P)
        assert not scalar_mul(E, 2, P).is_infinity
        assert scalar_mul(E, 3, P).is_infinity
    # S and T generate distinct subgroups
    assert point_add(E, S, T) not in (INFINITY, S, T, scalar_mul(E, 2, S), scalar_mul(E, 2, T))


def test_symbolic_family_torsion():
    E, S, T = curve_from_parameter()
    assert E.contains(S) and E.contains(T)
    assert scalar_mul(E, 3, S).is_infinity
    assert scalar_mul(E, 3, T).is_infinity


def test_family_discriminant_matches_general_formula():
    E, _, _ = curve_from_parameter()
    delta = discriminant(E)
    assert delta.num == family_discriminant() and delta.den == Poly.const(1)


@pytest.mark.parametrize("a", [0, 1, Cyc(0, 1) ** 2 * -1])
def test_singular_parameters(a):
    with pytest.raises(SingularCurve):
        curve_from_parameter(a)


def test_rational_curve_discriminant():
    E = EllipticCurve(0, 1, 0, 1, 0, field="Q")  # y^2 = x^3 + x^2 + x
    assert discriminant(E) == -48
    assert [P.q for P in bad_primes(E)] == [2, 3]


def test_bad_places_of_family():
    E, _, _ = curve_from_parameter(3)
    assert bad_primes(E) == [Place(2, "Inert"), Place(3, "Ramified"), Place(7, "Split", 2)]


def test_neg_and_identity():
    rng = random.Random(5)
    E, (P,) = curve_through_points(rng, 1)
    assert point_add(E, P, point_neg(E, P)).is_infinity
    assert point_add(E, P, INFINITY) == P
    assert scalar_mul(E, -1, P) == point_neg(E, P)


def test_doubling_matches_addition():
    rng = random.Random(6)
    E, (P, Q, _) = curve_through_points(rng)
    R = point_add(E, P, Q)
    assert E.contains(R)
    assert point_add(E, R, R) == point_add(E, P, point_add(E, Q, point_add(E, P, Q)))


def test_group_law_error_names_denominator():
    from torsion_twists.curve import _div

    with pytest.raises(GroupLawError, match="2y"):
        _div(Cyc(1), Cyc(0), "2y + a1 x + a3")


def test_two_torsion_doubles_to_identity():
    E = EllipticCurve(Cyc(0), Cyc(0), Cyc(0), Cyc(-1), Cyc(0))  # y^2 = x^3 - x
    assert scalar_mul(E, 2, type(INFINITY)(Cyc(1), Cyc(0))).is_infinity


def test_associativity_sample():
    rng = random.Random(7)
    for _ in range(10):
        E, (P, Q, R) = curve_through_points(rng)
        lhs = point_add(E, point_add(E, P, Q), R)
        rhs = point_add(E, P, point_add(E, Q, R))
        assert lhs == rhs
