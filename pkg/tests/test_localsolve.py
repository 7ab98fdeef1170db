import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torsion_twists.curve import bad_primes, curve_from_parameter
from torsion_twists.field import Cyc
from torsion_twists.localsolve import (
    COMPLEX,
    CriterionFails,
    LocalPlace,
    PadicApprox,
    Status,
    ZeroBound,
    brute_force_cubic,
    brute_force_quartic,
    cubic_local,
    els_candidates,
    els_scan,
    hensel_lift,
    is_square_qp,
    quartic_local,
    quartic_real,
    recheck_cubic_witness,
    recheck_quartic_witness,
    valuation,
)
from torsion_twists.twist import CubicModel, QuarticModel, cubic_model, quadratic_model

# --- q-adic helpers ---------------------------------------------------------


def test_valuation():
    assert valuation(50, 5) == 2
    assert valuation(Fraction(3, 25), 5) == -2
    assert valuation(0, 7, cap=9) == 9


@pytest.mark.parametrize("q", [3, 5, 7, 11])
def test_is_square_qp_matches_squares(q):
    for n in range(1, 60):
        assert is_square_qp(n * n, q)
        assert is_square_qp(n * n * q * q, q)
        assert not is_square_qp(n * n * q, q)


def test_is_square_q2():
    assert is_square_qp(17, 2) and is_square_qp(4 * 17, 2)
    assert not is_square_qp(5, 2) and not is_square_qp(3, 2) and not is_square_qp(2, 2)


def test_hensel_sqrt2_mod_7():
    r = hensel_lift([-2, 0, 1], 3, 7, 5)
    assert r.to_int() % 7 == 3
    assert (r.to_int() ** 2 - 2) % 7 ** 5 == 0
    # Newton iteration oracle in plain integers
    x = 3
    for _ in range(5):
        x = (x - (x * x - 2) * pow(2 * x, -1, 7 ** 5)) % 7 ** 5
    assert r.to_int() == x


def test_hensel_linear_is_exact():
    r = hensel_lift([-5, 1], 12, 7, 4)
    assert r.exact and r.to_int() == 5


def test_hensel_criterion_fails():
    with pytest.raises(CriterionFails):
        hensel_lift([1, 0, 1], 0, 7, 4)
    with pytest.raises(CriterionFails):
        hensel_lift([-2, 0, 1], 1, 7, 4)


@settings(max_examples=60)
@given(st.sampled_from([3, 5, 7, 11, 13]), st.integers(1, 200), st.integers(1, 8))
def test_hensel_lifts_squares(q, n, N):
    if n % q == 0:
        return
    target = n * n
    r = hensel_lift([-target, 0, 1], n % q, q, N)
    assert (r.to_int() ** 2 - target) % q ** N == 0
    assert r.to_int() % q == n % q


def test_padic_from_int_roundtrip():
    p = PadicApprox.from_int(7 * 7 * 10, 7, 6)
    assert p.valuation == 2 and p.to_int() == 490
    assert PadicApprox.from_int(0, 7, 4).is_zero


# --- quartic ----------------------------------------------------------------


@pytest.mark.parametrize("d,q", [(5, 5), (7, 7), (55, 11)])
def test_quartic_obstruction(d, q):
    v = quartic_local(quadratic_model(1, 1, d), q, 6)
    assert v.status is Status.EMPTY
    assert v.certificate["closed_boxes"] > 0


def test_quartic_trivial_twist():
    v = quartic_local(quadratic_model(1, 1, 1), 11, 6)
    assert v.status is Status.SOLVABLE
    assert v.witness["x"] == "0" and v.witness["y"] == "1"
    v = quartic_local(quadratic_model(0, -1, 1), 3, 6)
    assert v.status is Status.SOLVABLE


def test_quartic_rejects_composite():
    with pytest.raises(ValueError):
        quartic_local(quadratic_model(1, 1, 1), 9)


def test_quartic_real():
    assert quartic_real(QuarticModel(1, Fraction(-1), Fraction(0), Fraction(1))).status is Status.SOLVABLE
    assert quartic_real(QuarticModel(-1, Fraction(-3), Fraction(2), Fraction(1))).status is Status.SOLVABLE
    # -y^2 = x^4 + 1 has no real points
    assert quartic_real(QuarticModel(-1, Fraction(1), Fraction(0), Fraction(1))).status is Status.EMPTY
    # -y^2 = x^4 - 3x^2 + 1 does (x^2 = 1)
    assert quartic_real(QuarticModel(-1, Fraction(1), Fraction(-3), Fraction(1))).status is Status.SOLVABLE


def _real_oracle(m: QuarticModel) -> bool:
    s = 1 if m.d > 0 else -1
    xs = [Fraction(k, 8) for k in range(-400, 401)]
    return any(s * m.rhs(x) >= 0 for x in xs) or s * m.A > 0


@settings(max_examples=200)
@given(st.integers(-10, 10), st.integers(-10, 10), st.sampled_from([-6, -3, -2, -1, 1, 2, 3, 5]))
def test_quartic_real_matches_sampling(a, b, d):
    if b * (a * a - 4 * b) == 0:
        return
    m = quadratic_model(a, b, d)
    assert (quartic_real(m).status is Status.SOLVABLE) == _real_oracle(m)


@settings(max_examples=80)
@given(st.integers(-10, 10), st.integers(-10, 10), st.sampled_from([-10, -7, -6, -5, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10]),
       st.sampled_from([2, 3, 5, 7, 11]))
def test_quartic_witness_rechecks(a, b, d, q):
    if b * (a * a - 4 * b) == 0:
        return
    m = quadratic_model(a, b, d)
    v = quartic_local(m, q)
    assert v.status is not Status.UNDETERMINED
    if v.status is Status.SOLVABLE:
        assert recheck_quartic_witness(m, q, v.witness)


def test_quartic_oracle_subset():
    rng = random.Random(11)
    for _ in range(150):
        a, b = rng.randint(-10, 10), rng.randint(-10, 10)
        if b * (a * a - 4 * b) == 0:
            continue
        d = rng.choice([-10, -7, -6, -5, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10])
        q = rng.choice([3, 5, 7])
        m = quadratic_model(a, b, d)
        assert quartic_local(m, q, 3).status is brute_force_quartic(m, q, 3)


def test_quartic_monotone_in_depth():
    m = quadratic_model(1, 1, 5)
    statuses = [quartic_local(m, 5, N).status for N in range(0, 7)]
    first = next(i for i, s in enumerate(statuses) if s is not Status.UNDETERMINED)
    assert all(s is statuses[first] for s in statuses[first:])


# --- cubic ------------------------------------------------------------------


def test_place_kinds():
    assert [p.kind for p in LocalPlace.above(7)] == ["Split", "Split"]
    assert [p.kind for p in LocalPlace.above(5)] == ["Inert"]
    assert [p.kind for p in LocalPlace.above(3)] == ["Ramified"]
    assert LocalPlace.above(7)[0].as_dict()["q"] == 7
    assert COMPLEX.as_dict()["q"] == "inf"


@pytest.mark.parametrize("q", [2, 3, 5, 7, 13])
def test_trivial_cubic_twist_everywhere(q):
    m = cubic_model(Cyc(2, -1), 1)
    for pl in LocalPlace.above(q):
        v = cubic_local(m, pl, 2)
        assert v.status is Status.SOLVABLE
        assert recheck_cubic_witness(m, pl, v.witness)


def test_complex_place():
    assert cubic_local(cubic_model(5, 7), COMPLEX).status is Status.SOLVABLE


def test_ramified_without_global_point():
    m = cubic_model(Cyc(2, -1), 7)
    v = cubic_local(m, LocalPlace.above(3)[0], 2)
    assert v.status is Status.UNDETERMINED
    assert v.reason == "ramified place out of scope"


@pytest.mark.parametrize("a,q", [(2, 7), (2, 13), (4, 7), (6, 13), (Cyc(2, -1), 19), (-2, 13)])
def test_good_split_prime_twist_is_empty(a, q):
    E, _, _ = curve_from_parameter(Cyc.coerce(a))
    assert q not in {P.q for P in bad_primes(E)}
    m = cubic_model(a, q)
    for pl in LocalPlace.above(q):
        assert cubic_local(m, pl, 4).status is Status.EMPTY


def test_cubic_witness_rechecks():
    rng = random.Random(5)
    for _ in range(25):
        m = CubicModel(rng.choice([2, 3, 5, 6]), Cyc(rng.randint(-5, 5), rng.randint(-5, 5)),
                       Cyc(rng.randint(-5, 5), rng.randint(-5, 5)))
        if m.is_singular:
            continue
        for q in (2, 5, 7):
            for pl in LocalPlace.above(q):
                v = cubic_local(m, pl, 2)
                if v.status is Status.SOLVABLE:
                    assert recheck_cubic_witness(m, pl, v.witness)


def test_cubic_oracle_subset():
    rng = random.Random(7)
    checked = 0
    while checked < 30:
        m = CubicModel(rng.choice([1, 2, 3, 5, 6, 7, 10]), Cyc(rng.randint(-10, 10), rng.randint(-10, 10)),
                       Cyc(rng.randint(-10, 10), rng.randint(-10, 10)))
        if m.is_singular:
            continue
        for q in (2, 5, 7):
            for pl in LocalPlace.above(q):
                assert cubic_local(m, pl, 1).status is brute_force_cubic(m, pl, 1)
                checked += 1


# --- candidates and scan ----------------------------------------------------


def test_candidates_quartic():
    assert els_candidates(2, 1, 1) == [-6, -3, -2, -1, 1, 2, 3, 6]
    with pytest.raises(ZeroBound):
        els_candidates(2, 0, -1)


def test_candidates_cubic():
    cands = els_candidates(3, 2)
    assert 1 in cands and 3 in cands and 9 in cands
    assert len(set(cands)) == len(cands)
    assert cands == sorted(cands)
    for c in cands:
        assert all(c % (p ** 3) for p in range(2, 50))


def test_scan_quartic_11():
    rep = els_scan(2, 1, 1)
    verdicts = {row["d"]: row["verdict"] for row in rep["candidates"]}
    assert sorted(verdicts) == [-6, -3, -2, -1, 1, 2, 3, 6]
    assert verdicts[1] == "ELS"
    assert all(v in ("ELS", "NotELS") for v in verdicts.values())


def test_scan_is_deterministic_json():
    a = json.dumps(els_scan(2, 1, 1), sort_keys=True)
    b = json.dumps(els_scan(2, 1, 1), sort_keys=True)
    assert a == b


def test_scan_cubic_trivial_row():
    rep = els_scan(3, 2, precision=2)
    row = next(r for r in rep["candidates"] if r["d"] == 1)
    assert row["verdict"] == "ELS"
