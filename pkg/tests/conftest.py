from fractions import Fraction

from hypothesis import settings, strategies as st

from bsmotive.motive import MotiveExpr
from bsmotive.ncpoly import NCPoly
from bsmotive.poly import CommPoly, Var

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

MU_ORDERS = (2, 3, 5)


@st.composite
def motives(draw, max_terms=5, lhalf=(-4, 8), mu_orders=MU_ORDERS):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = draw(st.integers(*lhalf))
        mus = tuple(sorted(draw(st.lists(st.sampled_from(mu_orders), max_size=2))))
        terms[(e, mus)] = draw(st.integers(-5, 5))
    return MotiveExpr(terms)


def integral_motives(**kw):
    """Motives with only even, nonnegative L-exponents (those with point counts)."""
    return motives(lhalf=(0, 8), **kw).map(
        lambda x: MotiveExpr({(2 * abs(e), m): c for (e, m), c in x.terms.items()}))


VARS = [Var(i, n) for i, n in enumerate("xyzw")]


@st.composite
def comm_polys(draw, nvars=3, max_terms=4, max_exp=2, rational=True):
    vs = VARS[:nvars]
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        mono = tuple((v, draw(st.integers(0, max_exp))) for v in vs)
        if rational:
            c = Fraction(draw(st.integers(-4, 4)), draw(st.integers(1, 3)))
        else:
            c = draw(st.integers(-4, 4))
        terms[mono] = terms.get(mono, 0) + c
    return CommPoly(terms)


@st.composite
def nc_polys(draw, m=2, degree=None, max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(1, max_terms))):
        k = degree if degree is not None else draw(st.integers(1, 3))
        w = tuple(draw(st.lists(st.integers(1, m), min_size=k, max_size=k)))
        terms[w] = terms.get(w, 0) + draw(st.integers(-3, 3))
    return NCPoly(m, terms)
