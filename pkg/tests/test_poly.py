from fractions import Fraction
import itertools

import pytest
from hypothesis import given, strategies as st

from bsmotive.poly import CommPoly, UnassignedVariable, Var, variables

from conftest import VARS, comm_polys

x, y, z, w = (CommPoly.var(v) for v in VARS)


def test_basic_arithmetic_and_render():
    f = x * y - z ** 2
    assert f.render() == "x*y - z^2"
    assert (f + z ** 2) == x * y
    assert (x + 1) ** 2 == x * x + 2 * x + 1
    assert CommPoly().render() == "0"
    assert (Fraction(1, 2) * x).render() == "1/2*x"


def test_variables_helper():
    a, b = variables("a b", start=10)
    assert a.id == 10 and b.name == "b"


def test_var_identity_is_id_only():
    assert Var(3, "p", 2) == Var(3, "q", 1)
    assert hash(Var(3, "p")) == hash(Var(3))


def test_degree_and_content():
    f = 6 * x ** 2 * y + 4 * x * y ** 3
    assert f.degree() == 4 and f.degree(VARS[0]) == 2 and f.degree(VARS[2]) == 0
    assert f.content() == 2
    assert f.monomial_content() == ((VARS[0], 1), (VARS[1], 1))
    assert f.divide_monomial(f.monomial_content()) == 6 * x + 4 * y ** 2
    assert CommPoly().degree() == -1


def test_linear_split():
    f = (y + 1) * x + z ** 2
    a, b = f.linear_split(VARS[0])
    assert a == y + 1 and b == z ** 2
    assert (x ** 2 + y).linear_split(VARS[0]) is None
    assert (y + 1).linear_split(VARS[0]) is None


def test_specialize_polynomial_value():
    f = x ** 2 + x * y
    assert f.specialize(VARS[0], y + 1) == (y + 1) ** 2 + (y + 1) * y
    assert f.substitute({VARS[0]: 2, VARS[1]: 3}) == 10


def test_eval_mod_p():
    f = Fraction(1, 2) * x + y
    assert f.eval_mod_p({VARS[0]: 1, VARS[1]: 0}, 7) == 4
    with pytest.raises(ZeroDivisionError):
        f.eval_mod_p({VARS[0]: 1, VARS[1]: 0}, 2)
    with pytest.raises(UnassignedVariable):
        f.eval_mod_p({VARS[0]: 1}, 7)


def test_weights():
    a, b = Var(0, "a", 1), Var(1, "b", 2)
    f = CommPoly.var(a) ** 2 * CommPoly.var(b) + CommPoly.var(b) ** 2
    assert f.monomial_weights(3) == {1}
    assert f.is_weight_homogeneous(3) and f.is_weight_homogeneous(3, 1)
    assert not f.is_weight_homogeneous(3, 0)


@given(comm_polys(), comm_polys(), comm_polys())
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == CommPoly()


@given(comm_polys(), comm_polys(), st.lists(st.integers(0, 6), min_size=3, max_size=3))
def test_evaluation_is_homomorphism(f, g, pt):
    q = 7
    point = dict(zip(VARS[:3], pt))
    try:
        fv, gv = f.eval_mod_p(point, q), g.eval_mod_p(point, q)
    except ZeroDivisionError:
        return
    assert (f * g).eval_mod_p(point, q) == fv * gv % q
    assert (f + g).eval_mod_p(point, q) == (fv + gv) % q


@given(comm_polys(), st.integers(-3, 3))
def test_specialize_agrees_with_eval(f, value):
    g = f.specialize(VARS[0], value)
    assert VARS[0] not in g.variables()
    q = 11
    for b, c in itertools.product(range(0, 11, 5), repeat=2):
        point = {VARS[0]: value % q, VARS[1]: b, VARS[2]: c}
        assert g.eval_mod_p(point, q) == f.eval_mod_p(point, q)


@given(comm_polys())
def test_linear_split_reconstructs(f):
    split = f.linear_split(VARS[0])
    if split is None:
        assert f.degree(VARS[0]) != 1
    else:
        a, b = split
        assert a * x + b == f


@given(comm_polys())
def test_primitive_has_integer_coprime_coefficients(f):
    c, p = f.primitive()
    assert p.scale(c) == f
    if not f.is_zero():
        assert all(v.denominator == 1 for v in p.terms.values())
        assert p.content() == 1
