import os
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from torsion_twists.field import Cyc, Poly

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

small_int = st.integers(min_value=-50, max_value=50)
rationals = st.builds(Fraction, st.integers(-30, 30), st.integers(1, 12))


@st.composite
def cycs(draw, rational=False):
    num = rationals if rational else small_int
    return Cyc(draw(num), draw(num))


@st.composite
def nonzero_cycs(draw):
    c = draw(cycs())
    return c if not c.is_zero() else Cyc(1)


@st.composite
def polys(draw, gens=("a", "d"), max_terms=4, max_deg=3):
    p = Poly()
    for _ in range(draw(st.integers(0, max_terms))):
        exps = {g: draw(st.integers(0, max_deg)) for g in gens}
        p = p + Poly.monomial(draw(cycs()), exps)
    return p
