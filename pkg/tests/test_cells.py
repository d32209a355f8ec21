from math import comb

import pytest
from hypothesis import given, strategies as st

from bsmotive.cells import (Coord, cell_dimension, cell_parametrization, cell_weights, cell_weights_json,
                            enumerate_cells, make_cell, word_less)
from bsmotive.ncpoly import Superpotential, trace_polynomial


def pattern(M):
    return [["*" if isinstance(e, Coord) else e for e in row] for row in M]


def catalan_like(m, n):
    # number of m-ary tree ideals with n nodes
    return comb(m * n, n) // ((m - 1) * n + 1)


def test_word_order():
    X, Y = 1, 2
    assert word_less((), (X,))
    assert word_less((X,), (Y,))
    # letters are read from the root, i.e. right to left
    assert word_less((X, X), (Y,))
    assert word_less((Y, X), (X, Y))
    assert not word_less((X, Y), (X, Y))


def test_two_cells_m2_n2():
    cells = enumerate_cells(2, 2)
    assert [c.dim for c in cells] == [6, 5]
    first, second = cells
    assert first.nodes == ((), (1,))
    assert pattern(first.matrices[0]) == [[0, "*"], [1, "*"]]
    assert pattern(first.matrices[1]) == [["*", "*"], ["*", "*"]]
    assert second.nodes == ((), (2,))
    assert pattern(second.matrices[0]) == [["*", "*"], [0, "*"]]
    assert pattern(second.matrices[1]) == [[0, "*"], [1, "*"]]
    assert [c.name for c in first.coords] == ["b", "d", "e", "f", "g", "h"]
    assert [c.name for c in second.coords] == ["a", "b", "d", "f", "h"]


def test_cell_traces_for_nc_example():
    W = Superpotential.parse("X^2*Y + Y*X^2", 2)
    traces = [trace_polynomial(W, c.poly_matrices()).render() for c in enumerate_cells(2, 2)]
    assert traces == ["2*b*d*g + 2*d^2*h + 2*b*e + 2*b*h + 2*d*f", "2*d^2*h + 2*a*b + 2*b*d"]


@pytest.mark.parametrize("n", range(1, 6))
def test_companion_cell(n):
    (cell,) = enumerate_cells(1, n)
    assert cell.dim == n
    (M,) = cell.matrices
    for r in range(n):
        for c in range(n - 1):
            assert M[r][c] == (1 if r == c + 1 else 0)
        assert isinstance(M[r][n - 1], Coord) and M[r][n - 1].name == f"a{r + 1}"


def test_companion_traces():
    W = Superpotential.parse("X^3", 1)
    got = [trace_polynomial(W, enumerate_cells(1, n)[0].poly_matrices()).render() for n in (2, 3)]
    assert got == ["a2^3 + 3*a1*a2", "a3^3 + 3*a2*a3 + 3*a1"]


@pytest.mark.parametrize("m,n", [(m, n) for m in (1, 2, 3) for n in range(1, 5)])
def test_cell_count(m, n):
    assert len(enumerate_cells(m, n)) == catalan_like(m, n)


@pytest.mark.parametrize("m,n", [(2, 3), (3, 2), (2, 4)])
def test_dimension_rule_and_leaf_count(m, n):
    for cell in enumerate_cells(m, n):
        assert len(cell.leaves) == n * (m - 1) + 1
        assert cell_dimension(cell) == cell.dim
        assert all(w not in cell.nodes for w in cell.leaves)


def test_top_cell_dimension():
    # the cell of words in X only has the largest dimension, (m-1)n^2 + n
    for m, n in [(2, 2), (2, 3), (3, 2)]:
        dims = [c.dim for c in enumerate_cells(m, n)]
        assert max(dims) == (m - 1) * n * n + n
        assert min(dims) >= (m - 1) * n * n


def test_weights():
    first = enumerate_cells(2, 2)[0]
    w = cell_weights_json(first, 3)
    # X column at node X hits leaf X^2 (length 2): rows 1 (len 0) and X (len 1)
    assert w["b"] == 2 and w["d"] == 1
    # Y column at node X hits leaf YX (length 2), Y column at node 1 hits leaf Y
    assert w["e"] == 1 and w["f"] == 2 and w["h"] == 1 and w["g"] == 0
    with pytest.raises(ValueError):
        cell_weights(first, 1)


def test_make_cell_rejects_non_ideal():
    with pytest.raises(ValueError):
        make_cell(2, [(), (1, 2)])
    with pytest.raises(ValueError):
        make_cell(2, [(1,)])


def test_parametrization_vector():
    mats, v = cell_parametrization(enumerate_cells(2, 3)[0])
    assert v == (1, 0, 0) and len(mats) == 2


POTENTIALS = {1: ["X^3", "2*X^3"], 2: ["X^2*Y + Y*X^2", "X^3 + Y^3", "X*Y*X - Y^3"],
              3: ["X*Y*Z + X*Z*Y", "X^3 + Y*Z*Y"]}


@given(st.sampled_from([(m, t) for m, ts in POTENTIALS.items() for t in ts]), st.integers(1, 3))
def test_trace_of_potential_is_weight_zero(mt, n):
    # Tr W is mu_d-invariant on every cell
    m, text = mt
    W = Superpotential.parse(text, m)
    for cell in enumerate_cells(m, n):
        f = trace_polynomial(W, cell.poly_matrices(3))
        assert f.is_weight_homogeneous(3, 0)
