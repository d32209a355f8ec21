"""Brute-force F_q point counts used as an independent check on motives.

Everything here enumerates points over prime fields with numpy and knows
nothing about cells or elimination: hypersurface counts, stable framed
representations ``(A_1..A_m, v)``, and Lagrange interpolation of counts.
"""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .ncpoly import Superpotential
from .poly import CommPoly, Var

DEFAULT_BUDGET = 10**8
CHUNK = 1 << 18


class TooLarge(RuntimeError):
    pass


class NonIntegralQuotient(ArithmeticError):
    pass


@dataclass
class CountReport:
    description: str
    q: int
    count: int
    elapsed: float

    def to_json(self) -> str:
        return json.dumps(asdict(self))


def is_prime(q: int) -> bool:
    return q >= 2 and all(q % f for f in range(2, int(q ** 0.5) + 1))


def gl_order(n: int, q: int) -> int:
    out = 1
    for k in range(n):
        out *= q ** n - q ** k
    return out


def _residue(c: Fraction, q: int) -> int:
    c = Fraction(c)
    if c.denominator % q == 0:
        raise ValueError(f"coefficient {c} is undefined mod {q}")
    return c.numerator * pow(c.denominator, -1, q) % q


def _digits(start: int, stop: int, q: int, width: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((len(idx), width), dtype=np.int32)
    for j in range(width):
        out[:, j] = idx % q
        idx //= q
    return out


def poly_evaluator(f: CommPoly, order: Sequence[Var], q: int):
    """Vectorised ``f mod q`` on an array of points, columns ordered as ``order``."""
    col = {v: i for i, v in enumerate(order)}
    terms = [(_residue(c, q), [(col[v], e) for v, e in m]) for m, c in f.terms.items()]

    def ev(points: np.ndarray) -> np.ndarray:
        total = np.zeros(len(points), dtype=np.int64)
        for c, mono in terms:
            t = np.full(len(points), c, dtype=np.int64)
            for j, e in mono:
                for _ in range(e):
                    t = t * points[:, j] % q
            total = (total + t) % q
        return total

    return ev


def count_hypersurface(f: CommPoly, lam, q: int, ambient: Iterable[Var] | None = None,
                       budget: int = DEFAULT_BUDGET) -> int:
    """``#{x in F_q^N : f(x) = lam}`` by exhaustive enumeration."""
    if not is_prime(q):
        raise ValueError(f"q must be prime, got {q}")
    fvars = sorted(f.variables())
    amb = set(ambient) if ambient is not None else set(fvars)
    if not set(fvars) <= amb:
        raise ValueError("ambient must contain the variables of f")
    extra = len(amb) - len(fvars)
    size = q ** len(fvars)
    if size > budget:
        raise TooLarge(f"{q}^{len(fvars)} points exceed budget {budget}")
    g = f - CommPoly.const(Fraction(lam))
    ev = poly_evaluator(g, fvars, q)
    hits = 0
    for start in range(0, size, CHUNK):
        pts = _digits(start, min(size, start + CHUNK), q, len(fvars))
        hits += int(np.count_nonzero(ev(pts) == 0))
    return hits * q ** extra


def count_stratum(equations, inequations, variables, q: int, budget: int = DEFAULT_BUDGET) -> int:
    """Points of ``{equations = 0, inequations != 0}`` in ``F_q^variables``."""
    vs = sorted(variables)
    size = q ** len(vs)
    if size > budget:
        raise TooLarge(f"{q}^{len(vs)} points exceed budget {budget}")
    eqs = [poly_evaluator(g, vs, q) for g in equations]
    ineqs = [poly_evaluator(g, vs, q) for g in inequations]
    hits = 0
    for start in range(0, size, CHUNK):
        pts = _digits(start, min(size, start + CHUNK), q, len(vs))
        mask = np.ones(len(pts), dtype=bool)
        for ev in eqs:
            mask &= ev(pts) == 0
        for ev in ineqs:
            mask &= ev(pts) != 0
        hits += int(np.count_nonzero(mask))
    return hits


# -- stable framed representations ---------------------------------------------


def _full_rank(M: np.ndarray, q: int) -> np.ndarray:
    """Batched test ``rank(M[b]) == M.shape[2]`` over F_q for M of shape (B, K, n).

    Fraction-free elimination: swap a pivot into row j, then replace each lower
    row r by ``piv * r - r[j] * pivot_row``; no inverses needed.
    """
    M = (M % q).astype(np.int32)
    B, K, n = M.shape
    if K < n:
        return np.zeros(B, dtype=bool)
    ok = np.ones(B, dtype=bool)
    rows = np.arange(B)
    for j in range(n):
        nz = M[:, j:, j] != 0
        has = nz.any(axis=1)
        ok &= has
        p = nz.argmax(axis=1) + j
        pivot = M[rows, p].copy()
        M[rows, p] = M[:, j]
        M[:, j] = pivot
        below = M[:, j + 1:, j:]
        M[:, j + 1:, j:] = (below * pivot[:, None, j:j + 1]
                            - below[:, :, :1] * pivot[:, None, j:]) % q
    return ok


def _apply(A: np.ndarray, v: np.ndarray, q: int) -> np.ndarray:
    # A: (B,n,n) or (n,n); v: (B,n)
    return np.einsum("...ij,...j->...i", A, v) % q


def _stable_mask(mats: list[np.ndarray], v: np.ndarray, q: int, n: int, B: int) -> np.ndarray:
    """Words of length < n applied to v span F_q^n iff the pair is stable."""
    vec = np.broadcast_to(v, (B, n)).astype(np.int64)
    level = [vec]
    vecs = [vec]
    for _ in range(n - 1):
        level = [_apply(A, w, q) for w in level for A in mats]
        vecs.extend(level)
    return _full_rank(np.stack(vecs, axis=1), q)


def _trace_values(W: Superpotential, mats: list[np.ndarray], q: int, B: int, n: int) -> np.ndarray:
    memo: dict[tuple, np.ndarray] = {}

    def product(w):
        if len(w) == 1:
            return mats[w[0] - 1]
        if w not in memo:
            memo[w] = np.matmul(mats[w[0] - 1], product(w[1:])) % q
        return memo[w]

    total = np.zeros(B, dtype=np.int64)
    for w, c in W.poly.terms.items():
        P = np.broadcast_to(product(w), (B, n, n))
        tr = np.trace(P, axis1=1, axis2=2) % q
        total = (total + _residue(c, q) * tr) % q
    return total


def _masked_count(mats: list[np.ndarray], known: np.ndarray, v, W, lam, q: int, n: int) -> int:
    """Stable (and trace-constrained) rows; rows flagged in ``known`` are already stable."""
    mask = known.copy()
    todo = ~known
    if todo.any():
        mask[todo] = _stable_mask([A[todo] for A in mats], v, q, n, int(todo.sum()))
    if W is not None:
        mask &= _trace_values(W, mats, q, len(mask), n) == lam
    return int(np.count_nonzero(mask))


def _count_block(args) -> int:
    m, n, q, outer_range, v, W, lam = args
    nn = n * n
    size = q ** nn
    if m == 1:
        count = 0
        for start in range(0, size, CHUNK):
            inner = _digits(start, min(size, start + CHUNK), q, nn).reshape(-1, n, n)
            count += _masked_count([inner], np.zeros(len(inner), bool), v, W, lam, q, n)
        return count
    lo, hi = outer_range
    # several outer tuples share one numpy pass when the last matrix ranges over few values
    group = max(1, CHUNK // size)
    inner_all = _digits(0, size, q, nn).reshape(-1, n, n) if size <= CHUNK else None
    count = 0
    for a in range(lo, hi, group):
        b = min(hi, a + group)
        digits = _digits(a, b, q, nn * (m - 1))
        fixed = [digits[:, k * nn:(k + 1) * nn].reshape(-1, n, n) for k in range(m - 1)]
        pre = _stable_mask(fixed, v, q, n, b - a)
        if W is None:
            # the last matrix is irrelevant once the others already span
            count += int(np.count_nonzero(pre)) * size
            fixed = [F[~pre] for F in fixed]
            pre = pre[~pre]
        g = len(pre)
        if not g:
            continue
        if inner_all is not None:
            mats = [np.repeat(F, size, axis=0) for F in fixed] + [np.tile(inner_all, (g, 1, 1))]
            count += _masked_count(mats, np.repeat(pre, size), v, W, lam, q, n)
            continue
        for i in range(g):
            for start in range(0, size, CHUNK):
                inner = _digits(start, min(size, start + CHUNK), q, nn).reshape(-1, n, n)
                B = len(inner)
                mats = [np.broadcast_to(F[i], (B, n, n)) for F in fixed] + [inner]
                count += _masked_count(mats, np.full(B, bool(pre[i])), v, W, lam, q, n)
    return count


def count_stable_pairs(m: int, n: int, q: int, constraint: tuple[Superpotential, object] | None = None,
                       budget: int = DEFAULT_BUDGET, symmetric: bool = True, workers: int = 1) -> int:
    """Stable pairs ``(A_1..A_m, v)`` over F_q, optionally with ``Tr W(A) = lam``, divided by ``|GL_n|``.

    With ``symmetric`` (default) only ``v = e_1`` is enumerated and the count is
    multiplied by ``q^n - 1``: GL_n permutes the nonzero vectors transitively
    and preserves stability and traces.  Pairs whose first ``m-1`` matrices are
    already stable skip the stability test for the last matrix.
    """
    if not is_prime(q):
        raise ValueError(f"q must be prime, got {q}")
    if m < 1 or n < 1:
        raise ValueError("need m >= 1 and n >= 1")
    W, lam = (None, 0) if constraint is None else constraint
    if W is not None:
        if W.m != m:
            raise ValueError(f"potential has {W.m} generators, expected {m}")
        lam = _residue(Fraction(lam), q)
    vectors: list[np.ndarray]
    if symmetric:
        vectors = [np.eye(n, dtype=np.int64)[0]]
        evaluations = q ** (m * n * n)
    else:
        vectors = [np.array(v, dtype=np.int64) for v in itertools.product(range(q), repeat=n)][1:]
        evaluations = q ** (m * n * n) * (q ** n - 1)
    if evaluations > budget:
        raise TooLarge(f"{evaluations} evaluations exceed budget {budget}")
    outer_total = q ** (n * n * (m - 1))
    total = 0
    for v in vectors:
        bounds = np.linspace(0, outer_total, max(1, workers) + 1).astype(int)
        jobs = [(m, n, q, (int(a), int(b)), v, W, lam) for a, b in zip(bounds, bounds[1:]) if b > a]
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(workers) as pool:
                total += sum(pool.map(_count_block, jobs))
        else:
            total += sum(_count_block(j) for j in jobs)
    if symmetric:
        total *= q ** n - 1
    order = gl_order(n, q)
    if total % order:
        raise NonIntegralQuotient(f"{total} stable pairs not divisible by |GL_{n}(F_{q})| = {order}")
    return total // order


def timed(description: str, q: int, fn, *args, **kwargs) -> CountReport:
    t0 = time.perf_counter()
    count = fn(*args, **kwargs)
    return CountReport(description, q, count, time.perf_counter() - t0)


# -- interpolation ----------------------------------------------------------------

Q = Var(0, "q")


def interpolate(points: Sequence[tuple[int, int]], degree: int) -> CommPoly | None:
    """Polynomial of degree <= ``degree`` through all points, or None if there is none.

    Points beyond the first ``degree + 1`` act as held-out checks.
    """
    xs = [x for x, _ in points]
    if len(set(xs)) < 2 or len(set(xs)) != len(xs):
        raise ValueError("need at least two distinct abscissae")
    fit = list(points[: degree + 1])
    poly = CommPoly()
    qv = CommPoly.var(Q)
    for i, (xi, yi) in enumerate(fit):
        term = CommPoly.const(Fraction(yi))
        for j, (xj, _) in enumerate(fit):
            if j != i:
                term = term * (qv - xj) * CommPoly.const(Fraction(1, xi - xj))
        poly = poly + term
    for x, y in points[degree + 1:]:
        if poly.substitute({Q: x}).constant_term() != y:
            return None
    return poly


# -- prime selection --------------------------------------------------------------


def root_count(k: int, r, q: int) -> int:
    """``#{x in F_q : x^k = r}``."""
    r = _residue(Fraction(r), q)
    return sum(1 for x in range(q) if pow(x, k, q) == r)


def prime_compatible(records: Iterable[tuple], q: int) -> bool:
    """Whether F_q counts can see the steps the stratifier took over C.

    ``("unit", c)`` needs q coprime to c; ``("torsor", k, r)`` needs ``x^k = r``
    to have k solutions; ``("hyperbolic", r)`` needs r to be a nonzero square
    so that ``x^2 - r y^2`` factors.
    """
    for rec in records:
        if rec[0] not in ("unit", "torsor", "hyperbolic"):
            raise ValueError(f"unknown record {rec!r}")
        try:
            if rec[0] == "unit":
                ok = _residue(rec[1], q) != 0
            elif rec[0] == "torsor":
                ok = root_count(rec[1], rec[2], q) == rec[1]
            else:
                ok = q != 2 and root_count(2, rec[1], q) == 2
        except ValueError:
            # a denominator vanishes mod q
            ok = False
        if not ok:
            return False
    return True
