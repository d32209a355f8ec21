import itertools

import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from bsmotive.motive import L, L_HALF, mu, reduce_mu2
from bsmotive.oracle import count_hypersurface, count_stratum, prime_compatible
from bsmotive.poly import CommPoly, Var
from bsmotive.stratify import (LAMBDA, Stratifier, Stratum, StuckError, WeightError, delta, delta_with_mu,
                               motive_of, normalize, split, torsor_class)

from conftest import VARS, comm_polys

x, y, z, w = (CommPoly.var(v) for v in VARS)
QUADRIC = x * y - z ** 2


def stratum_count(s: Stratum, q: int) -> int:
    """Brute-force count of a stratum, including its free variables and factor."""
    assert not s.involves_lambda()
    pts = count_stratum(s.equations, s.inequations, s.variables, q)
    return pts * q ** s.free_vars * s.factor.evaluate_count(q)


# -- worked values -----------------------------------------------------------------


def test_quadric_fibers():
    assert motive_of(QUADRIC, 1) == L ** 2 + L
    assert motive_of(QUADRIC, 0) == L ** 2


def test_equivariant_quadric():
    wts = [Var(0, "x", 1), Var(1, "y", 1), Var(2, "z", 1)]
    f = CommPoly.var(wts[0]) * CommPoly.var(wts[1]) - CommPoly.var(wts[2]) ** 2
    assert motive_of(f, 1, equivariant=2) == L ** 2 - (1 - mu(2)) * L
    assert reduce_mu2(motive_of(f, 1, equivariant=2)) == L ** 2 - L * L_HALF
    assert reduce_mu2(delta_with_mu(f, 2)) == L * L_HALF


def test_affine_line_deltas():
    a = Var(0, "a", 1)
    assert delta_with_mu(CommPoly.var(a) ** 3, 3) == 1 - mu(3)
    assert delta_with_mu(CommPoly.var(a) ** 2, 2) == 1 - mu(2)
    assert delta(CommPoly.var(a) ** 3) == -2


def test_nc_example_rank_one():
    assert delta(2 * x ** 2 * y) == L


def test_sum_of_squares_fibers():
    f = x ** 2 + y ** 2
    assert motive_of(f, 0) == 2 * L - 1
    assert motive_of(f, 1) == L - 1


def test_torsor_class():
    assert torsor_class(3, 1, None) == 3
    assert torsor_class(3, 1, 3) == mu(3)
    assert torsor_class(2, 3, 6) == mu(2)
    assert torsor_class(3, 0, 3) == 3
    with pytest.raises(WeightError):
        torsor_class(2, 1, 3)


def test_weight_check():
    a = Var(0, "a", 1)
    with pytest.raises(WeightError):
        delta_with_mu(CommPoly.var(a) ** 2, 3)


def test_ambient_must_contain_variables():
    with pytest.raises(ValueError):
        Stratum.hypersurface(x * y, 0, [VARS[0]])


def test_ambient_free_variables():
    assert motive_of(x, 0, ambient=VARS[:3]) == L ** 2


def test_stuck_reports_residue():
    a, b = Var(0, "a1"), Var(1, "a2")
    f = CommPoly.var(b) ** 4 + 4 * CommPoly.var(a) * CommPoly.var(b) ** 2 + 2 * CommPoly.var(a) ** 2
    with pytest.raises(StuckError) as exc:
        delta(f)
    doc = exc.value.to_json()
    assert doc["reason"] == "no rule applies" and doc["stratum"]["equations"]


def test_explain_trace_lines():
    s = Stratifier(explain=True)
    s.delta(QUADRIC)
    assert s.trace and all("var=" in line and "branch=" in line for line in s.trace)


def test_depth_limit():
    with pytest.raises(StuckError):
        Stratifier(max_depth=1).delta(x * y * z - x - y)


def test_lambda_is_reserved():
    assert LAMBDA.id < 0 and LAMBDA.weight == 0


def test_normalize_empty_and_free():
    assert normalize(Stratum((CommPoly.const(1),), (), frozenset(VARS[:1]))) is None
    s = normalize(Stratum((x,), (y,), frozenset(VARS[:3])))
    assert s.free_vars == 1 and s.factor == L - 1 and not s.equations


# -- oracle-backed properties ------------------------------------------------------

PRIMES = [5, 7, 11]
small_polys = comm_polys(nvars=3, max_terms=4, max_exp=2, rational=False)


@settings(max_examples=150, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(small_polys, st.integers(0, 2))
def test_motive_matches_point_counts(f, lam):
    s = Stratifier()
    try:
        value = s.motive_of(f, lam, ambient=VARS[:3])
    except StuckError:
        assume(False)
    primes = [q for q in PRIMES if prime_compatible(s.records, q)]
    assume(primes)
    for q in primes:
        assert value.evaluate_count(q) == count_hypersurface(f, lam, q, VARS[:3])


@settings(max_examples=150, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(small_polys)
def test_delta_matches_count_difference(f):
    s = Stratifier()
    try:
        value = s.delta(f, ambient=VARS[:3])
    except StuckError:
        assume(False)
    primes = [q for q in PRIMES if prime_compatible(s.records, q)]
    assume(primes)
    for q in primes:
        diff = count_hypersurface(f, 0, q, VARS[:3]) - count_hypersurface(f, 1, q, VARS[:3])
        assert value.evaluate_count(q) == diff


@given(small_polys, small_polys)
def test_split_partitions(f, g):
    # every point of the parent lies in exactly one branch, and no other point does
    base = Stratum((f,), (), frozenset(VARS[:3]))
    nonzero, zero = split(base, g)
    q = 5
    for pt in itertools.product(range(q), repeat=3):
        point = dict(zip(VARS[:3], pt))
        assert nonzero.contains(point, q) + zero.contains(point, q) == base.contains(point, q)


def coprime(q, *polys):
    return all(c.numerator % q and c.denominator % q for g in polys for c in g.terms.values())


@given(small_polys, small_polys)
def test_normalize_preserves_counts(f, g):
    base = Stratum((f,), (g,), frozenset(VARS[:3]))
    norm = normalize(base)
    for q in (5, 7):
        if coprime(q, f, g):
            want = stratum_count(base, q)
            assert (0 if norm is None else stratum_count(norm, q)) == want


@settings(max_examples=150, suppress_health_check=[HealthCheck.filter_too_much])
@given(small_polys)
def test_branch_counts_sum_to_parent(f):
    # one rule application: signed branch counts reproduce the parent count
    s = Stratifier()
    base = normalize(Stratum.hypersurface(f, 1, VARS[:3]))
    assume(base is not None and base.equations)
    step = s._choose(base, None, lam_symbolic=False)
    assume(step is not None)
    kind, _, branches = step
    primes = [q for q in PRIMES if prime_compatible(s.records + [("unit", c) for c in f.terms.values()], q)]
    assume(primes)
    for q in primes:
        total = sum(sign * stratum_count(br, q) for sign, _, br in branches)
        assert total == stratum_count(base, q), kind


@settings(max_examples=120, suppress_health_check=[HealthCheck.filter_too_much])
@given(comm_polys(nvars=4, max_terms=5, max_exp=3, rational=True))
def test_recursion_terminates(f):
    # each branch strictly shrinks variables or constraint degree, so depth stays bounded
    s = Stratifier()
    try:
        s.delta(f, ambient=VARS[:4])
    except StuckError as exc:
        assert "depth" not in exc.reason
    assert s.max_seen_depth <= 4 * (4 + 1) * 4
