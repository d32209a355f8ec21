from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bsmotive.ncpoly import (DimensionMismatch, NCPoly, NCSyntaxError, NotHomogeneous, Superpotential,
                             UnknownGenerator, cyclic_derivative, jacobi_relations, matmul, parse,
                             trace_polynomial, word_text)
from bsmotive.poly import CommPoly, Var

from conftest import nc_polys


def test_parse_and_render():
    p = parse("X^2*Y + Y*X^2", 2)
    assert p.terms == {(1, 1, 2): 1, (2, 1, 1): 1}
    assert p.render() == "X^2*Y + Y*X^2"
    assert parse("XXY+YXX", 2) == p
    assert parse("-1/3 X^3 + 2 Y X", 2).terms == {(1, 1, 1): Fraction(-1, 3), (2, 1): 2}
    assert parse("X1*X4^2", 4).terms == {(1, 4, 4): 1}


def test_parse_cancellation():
    assert parse("X*Y - X*Y + Y^2", 2).terms == {(2, 2): 1}


@pytest.mark.parametrize("text", ["X^", "X +", "2*", "X ** Y", "(X)", "X/2", "1/0 X"])
def test_parse_errors(text):
    with pytest.raises(NCSyntaxError):
        parse(text, 2)


def test_unknown_generator_position():
    with pytest.raises(UnknownGenerator) as exc:
        parse("X*Y + Z", 2)
    assert exc.value.pos == 6


def test_scalar_symbols_rejected():
    # scalars must be literals, not letters
    with pytest.raises(NCSyntaxError):
        parse("a*X*Y*Z", 3)


def test_word_text():
    assert word_text((1, 1, 2), 2) == "X^2Y"
    assert word_text((), 2) == "1"
    assert word_text((1, 2), 4) == "X1*X2"


def test_superpotential_validation():
    with pytest.raises(NotHomogeneous):
        Superpotential.parse("X^2 + Y", 2)
    with pytest.raises(NotHomogeneous):
        Superpotential.parse("X", 1)
    with pytest.raises(NotHomogeneous):
        Superpotential.parse("X - X", 1)
    assert Superpotential.parse("X^3 + Y^3", 2).degree == 3


def test_cyclic_derivatives_nc_example():
    W = Superpotential.parse("X^2*Y + Y*X^2", 2)
    assert cyclic_derivative(W, 1) == parse("2 X*Y + 2 Y*X", 2)
    assert cyclic_derivative(W, 2) == parse("2 X^2", 2)


def test_jacobi_relations_sklyanin_like():
    W = Superpotential.parse("X*Y*Z + X*Z*Y", 3)
    rels = jacobi_relations(W)
    assert rels == [parse("Y*Z + Z*Y", 3), parse("Z*X + X*Z", 3), parse("X*Y + Y*X", 3)]


def test_cyclic_derivative_power():
    assert cyclic_derivative(parse("X^3", 1), 1) == parse("3 X^2", 1)


def test_components():
    W = Superpotential.parse("X^3 + Y^3", 2)
    comps = W.components()
    assert [g for g, _ in comps] == [(1,), (2,)]
    assert all(V.render() == "X^3" and V.m == 1 for _, V in comps)
    assert len(Superpotential.parse("X^2*Y + Y*X^2", 2).components()) == 1
    mixed = Superpotential.parse("X*Y + Z^2", 3).components()
    assert [(g, V.render()) for g, V in mixed] == [((1, 2), "X*Y"), ((3,), "X^2")]


def _cell_matrices():
    a, b, d, e, f, g, h = (CommPoly.var(Var(i, n)) for i, n in enumerate("abdefgh"))
    X = [[CommPoly.const(0), b], [CommPoly.const(1), d]]
    Y = [[e, f], [g, h]]
    return X, Y


def test_trace_polynomial_cell():
    X, Y = _cell_matrices()
    tr = trace_polynomial(Superpotential.parse("X^2*Y + Y*X^2", 2), [X, Y])
    assert tr.render() == "2*b*d*g + 2*d^2*h + 2*b*e + 2*b*h + 2*d*f"


def test_trace_dimension_errors():
    X, Y = _cell_matrices()
    with pytest.raises(DimensionMismatch):
        trace_polynomial(parse("X*Y", 2), [X])
    with pytest.raises(DimensionMismatch):
        trace_polynomial(parse("X*Y", 2), [X, [[CommPoly.const(1)]]])


def _random_matrices(draw, m, n):
    return [[[CommPoly.const(draw(st.integers(-3, 3))) for _ in range(n)] for _ in range(n)]
            for _ in range(m)]


@given(nc_polys(m=2), st.data())
def test_trace_invariant_under_cyclic_rotation(p, data):
    n = data.draw(st.integers(1, 3))
    mats = _random_matrices(data.draw, 2, n)
    rotated = {}
    for word, c in p.terms.items():
        k = data.draw(st.integers(0, max(len(word) - 1, 0)))
        r = word[k:] + word[:k]
        rotated[r] = rotated.get(r, 0) + c
    assert trace_polynomial(p, mats) == trace_polynomial(NCPoly(2, rotated), mats)


@given(nc_polys(m=2), st.data())
def test_trace_invariant_under_conjugation(p, data):
    # conjugating by an elementary unipotent keeps Tr(W)
    n = data.draw(st.integers(2, 3))
    mats = _random_matrices(data.draw, 2, n)
    t = data.draw(st.integers(-2, 2))
    P = [[CommPoly.const(1 if i == j else 0) for j in range(n)] for i in range(n)]
    Pinv = [row[:] for row in P]
    P[0][1], Pinv[0][1] = CommPoly.const(t), CommPoly.const(-t)
    conj = [matmul(matmul(P, A), Pinv) for A in mats]
    assert trace_polynomial(p, mats) == trace_polynomial(p, conj)


@given(nc_polys(m=2, degree=3))
def test_euler_relation_for_cyclic_derivatives(p):
    # sum_i X_i * d_i W is the cyclic symmetrisation: its trace is deg * Tr(W)
    mats = [[[CommPoly.const(1), CommPoly.const(2)], [CommPoly.const(0), CommPoly.const(-1)]],
            [[CommPoly.const(3), CommPoly.const(1)], [CommPoly.const(1), CommPoly.const(1)]]]
    total = {}
    for i in (1, 2):
        for w, c in cyclic_derivative(p, i).terms.items():
            key = (i,) + w
            total[key] = total.get(key, 0) + c
    assert trace_polynomial(NCPoly(2, total), mats) == trace_polynomial(p, mats).scale(3)


@given(nc_polys(m=2))
def test_render_parse_roundtrip(p):
    if p.terms:
        assert parse(p.render(), 2) == p
