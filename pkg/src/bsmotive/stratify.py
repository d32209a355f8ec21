"""Motives of hypersurfaces ``V(f - lambda)`` by recursive case splitting.

A :class:`Stratum` is a locally closed set ``{equations = 0, inequations != 0}``
inside affine space on ``variables``, times ``free_vars`` extra free lines,
times an accumulated motive ``factor``.  The recursion eliminates variables
that occur linearly, splits on coefficients and monomial factors, and turns
``c*x^k = r`` into ``k`` points or a ``mu``-torsor.  When nothing applies it
raises :class:`StuckError` carrying the residual stratum.

The value ``lambda`` is threaded through as the reserved variable
:data:`LAMBDA`.  In delta mode (``[V(f)] - [V(f-1)]``) any stratum free of
``lambda`` contributes zero without being computed, and only strata that need
the actual value are specialised to ``lambda = 0`` and ``lambda = 1``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd
from typing import Iterable

from .motive import L, ONE, ZERO, MotiveExpr, mu
from .poly import CommPoly, Var

log = logging.getLogger(__name__)

LAMBDA = Var(-1, "lambda", 0)


class StuckError(RuntimeError):
    """No elimination rule applies; ``stratum`` is the irreducible residue."""

    def __init__(self, stratum: "Stratum", reason: str = "no rule applies"):
        super().__init__(f"{reason}: {stratum.summary()}")
        self.stratum = stratum
        self.reason = reason
        self.cell = None

    def to_json(self) -> dict:
        out = {"reason": self.reason, "stratum": self.stratum.to_json()}
        if self.cell is not None:
            cell = self.cell
            out["cell"] = cell.to_json() if hasattr(cell, "to_json") else cell
        return out


class WeightError(ValueError):
    """The polynomial is not invariant under the mu_d action."""


def _has_lambda(f: CommPoly) -> bool:
    return LAMBDA in f.variables()


def _coord_vars(f: CommPoly) -> frozenset[Var]:
    return f.variables() - {LAMBDA}


def _monic(f: CommPoly) -> CommPoly:
    terms = f.sorted_terms()
    return f.scale(1 / terms[0][1]) if terms else f


@dataclass(frozen=True)
class Stratum:
    equations: tuple[CommPoly, ...] = ()
    inequations: tuple[CommPoly, ...] = ()
    variables: frozenset[Var] = frozenset()
    free_vars: int = 0
    factor: MotiveExpr = field(default=ONE)

    @classmethod
    def hypersurface(cls, f: CommPoly, lam=0, ambient: Iterable[Var] | None = None) -> Stratum:
        if lam is None:
            lam_poly = CommPoly.var(LAMBDA)
        else:
            lam_poly = CommPoly.const(Fraction(lam))
        vs = frozenset(ambient) if ambient is not None else _coord_vars(f)
        missing = _coord_vars(f) - vs
        if missing:
            raise ValueError(f"ambient is missing variables {sorted(map(str, missing))}")
        return cls((f - lam_poly,), (), vs)

    def involves_lambda(self) -> bool:
        return any(_has_lambda(g) for g in self.equations + self.inequations)

    def specialize_lambda(self, value) -> Stratum:
        return replace(
            self,
            equations=tuple(g.specialize(LAMBDA, value) for g in self.equations),
            inequations=tuple(g.specialize(LAMBDA, value) for g in self.inequations),
        )

    def contains(self, point: dict[Var, int], q: int) -> bool:
        return all(g.eval_mod_p(point, q) == 0 for g in self.equations) and all(
            g.eval_mod_p(point, q) != 0 for g in self.inequations
        )

    def summary(self) -> str:
        eqs = ", ".join(f"{g} = 0" for g in self.equations) or "-"
        ineqs = ", ".join(f"{g} != 0" for g in self.inequations) or "-"
        return (f"eqs[{eqs}] ineqs[{ineqs}] vars={len(self.variables)} "
                f"free={self.free_vars} factor={self.factor}")

    def to_json(self) -> dict:
        return {
            "equations": [str(g) for g in self.equations],
            "inequations": [str(g) for g in self.inequations],
            "variables": [str(v) for v in sorted(self.variables)],
            "free_vars": self.free_vars,
            "factor": self.factor.to_json(),
        }


def split(st: Stratum, g: CommPoly) -> tuple[Stratum, Stratum]:
    """``(st and g != 0, st and g = 0)``: disjoint and covering ``st``."""
    nonzero = replace(st, inequations=st.inequations + (g,))
    zero = replace(st, equations=st.equations + (g,))
    assert nonzero.equations == st.equations and zero.inequations == st.inequations
    return nonzero, zero


def eliminate(st: Stratum, x: Var, a: CommPoly, b: CommPoly, drop: CommPoly) -> Stratum:
    """Solve ``a*x + b = 0`` for ``x`` on ``a != 0`` and remove ``drop`` and ``x``.

    Every other constraint ``G`` becomes ``a^deg_x(G) * G(-b/a)``, which has the
    same zero set where ``a`` is invertible.
    """

    def subst(G: CommPoly) -> CommPoly:
        k = G.degree(x)
        if k <= 0:
            return G
        out = CommPoly()
        for e, coeff in G.coefficients_in(x).items():
            out = out + coeff * (-b) ** e * a ** (k - e)
        return out

    eqs = []
    removed = False
    for g in st.equations:
        if not removed and g == drop:
            removed = True
            continue
        eqs.append(subst(g))
    return replace(
        st,
        equations=tuple(eqs),
        inequations=tuple(subst(g) for g in st.inequations),
        variables=st.variables - {x},
    )


def _set_zero(st: Stratum, x: Var) -> Stratum:
    return replace(
        st,
        equations=tuple(g.specialize(x, 0) for g in st.equations),
        inequations=tuple(g.specialize(x, 0) for g in st.inequations),
        variables=st.variables - {x},
    )


def _strip(g: CommPoly, nonzero: set[Var]) -> CommPoly:
    mono = tuple((v, e) for v, e in g.monomial_content() if v in nonzero)
    return g.divide_monomial(mono) if mono else g


def normalize(st: Stratum) -> Stratum | None:
    """Simplify in place of the recursion; None means the stratum is empty."""
    while True:
        nonzero = {next(iter(_coord_vars(g))) for g in st.inequations
                   if g.is_monomial() and len(_coord_vars(g)) == 1 and not _has_lambda(g)}
        eqs: list[CommPoly] = []
        for g in st.equations:
            if g.is_zero():
                continue
            if not g.variables():
                return None
            g = _monic(_strip(g, nonzero))
            if g not in eqs:
                eqs.append(g)
        ineqs: list[CommPoly] = []
        for g in st.inequations:
            if g.is_zero():
                return None
            if not g.variables():
                continue
            if g.is_monomial() and not _has_lambda(g):
                parts = [CommPoly.var(v) for v, _ in g.monomial_content()]
            else:
                parts = [_monic(_strip(g, nonzero))]
            for p in parts:
                if p not in ineqs:
                    ineqs.append(p)
        st = replace(st, equations=tuple(eqs), inequations=tuple(ineqs))

        # x^k = 0 (reduced): x = 0
        zero_var = None
        for g in eqs:
            cv = _coord_vars(g)
            if g.is_monomial() and len(cv) == 1 and not _has_lambda(g):
                zero_var = next(iter(cv))
                break
        if zero_var is not None:
            st = _set_zero(st, zero_var)
            continue

        used: dict[Var, int] = {}
        for g in eqs + ineqs:
            for v in _coord_vars(g):
                used[v] = used.get(v, 0) + 1
        unused = {v for v in st.variables if v not in used}
        factor = st.factor
        isolated = set()
        kept_ineqs = []
        for g in ineqs:
            cv = _coord_vars(g)
            if g.is_monomial() and len(cv) == 1 and not _has_lambda(g):
                x = next(iter(cv))
                if used[x] == 1:
                    factor = factor * (L - 1)
                    isolated.add(x)
                    continue
            kept_ineqs.append(g)
        return replace(
            st,
            inequations=tuple(kept_ineqs),
            variables=st.variables - unused - isolated,
            free_vars=st.free_vars + len(unused),
            factor=factor,
        )


def torsor_class(k: int, weight: int, d: int | None) -> MotiveExpr:
    """Class of ``{x^k = r}`` (``r`` a nonzero constant) with ``mu_d`` acting by ``zeta^weight``.

    The ``k`` roots split into orbits of size ``e = d / gcd(weight, d)``, each
    a ``mu_e``-torsor.
    """
    if d is None:
        return MotiveExpr.const(k)
    if (weight * k) % d:
        raise WeightError(f"x^{k} with weight {weight} is not mu_{d}-invariant")
    e = d // gcd(weight % d, d)
    return (k // e) * mu(e)


class Stratifier:
    """Recursive elimination engine; keeps a step trace and oracle-relevant records."""

    def __init__(self, explain: bool = False, max_depth: int = 400):
        self.explain = explain
        self.max_depth = max_depth
        self.trace: list[str] = []
        # ("torsor", k, ratio) / ("hyperbolic", ratio): steps valid over C whose
        # F_q shadow needs roots of ``ratio``; ("unit", c): a coefficient that
        # was treated as nonzero
        self.records: list[tuple] = []
        self._units: set[Fraction] = set()
        self.max_seen_depth = 0

    # -- public API -----------------------------------------------------------

    def motive_of(self, f: CommPoly, lam=0, ambient=None, equivariant: int | None = None) -> MotiveExpr:
        if equivariant is not None:
            _check_weights(f, equivariant)
        return self.solve(Stratum.hypersurface(f, lam, ambient), equivariant)

    def delta(self, f: CommPoly, ambient=None, equivariant: int | None = None) -> MotiveExpr:
        if equivariant is not None:
            _check_weights(f, equivariant)
        return self.solve_delta(Stratum.hypersurface(f, None, ambient), equivariant)

    def solve(self, st: Stratum, d: int | None = None) -> MotiveExpr:
        if st.involves_lambda():
            raise ValueError("concrete solve needs lambda specialised")
        return self._solve(st, d, 0)

    def solve_delta(self, st: Stratum, d: int | None = None) -> MotiveExpr:
        return self._delta(st, d, 0)

    # -- recursion ------------------------------------------------------------

    def _log(self, kind: str, var, tag: str, depth: int, st: Stratum):
        if self.explain:
            line = f"{'  ' * min(depth, 20)}{kind} var={var or '-'} branch={tag} {st.summary()}"
            self.trace.append(line)
            log.debug(line)

    def _enter(self, st: Stratum, depth: int):
        self.max_seen_depth = max(self.max_seen_depth, depth)
        for g in st.equations + st.inequations:
            for c in g.terms.values():
                if abs(c) != 1 and c not in self._units:
                    self._units.add(c)
                    self.records.append(("unit", c))
        if depth > self.max_depth:
            raise StuckError(st, f"recursion depth {depth} exceeded")

    def _solve(self, st: Stratum, d: int | None, depth: int) -> MotiveExpr:
        self._enter(st, depth)
        st = normalize(st)
        if st is None:
            self._log("empty", None, "-", depth, Stratum())
            return ZERO
        if not st.equations and not st.inequations:
            self._log("done", None, "-", depth, st)
            return st.factor * L ** (st.free_vars + len(st.variables))
        step = self._choose(st, d, lam_symbolic=False) if st.equations else None
        if step is None and not st.equations:
            step = self._open_step(st, lam_symbolic=False)
        if step is None:
            self._log("stuck", None, "-", depth, st)
            raise StuckError(st)
        kind, var, branches = step
        total = ZERO
        for sign, tag, br in branches:
            self._log(kind, var, tag, depth, br)
            total = total + sign * self._solve(br, d, depth + 1)
        return total

    def _delta(self, st: Stratum, d: int | None, depth: int) -> MotiveExpr:
        self._enter(st, depth)
        st = normalize(st)
        if st is None:
            return ZERO
        if not st.involves_lambda():
            self._log("lambda-free", None, "0", depth, st)
            return ZERO
        needs_value = any(_has_lambda(g) and not _coord_vars(g) for g in st.equations + st.inequations)
        step = None
        if not needs_value:
            if st.equations:
                step = self._choose(st, d, lam_symbolic=True)
            else:
                step = self._open_step(st, lam_symbolic=True)
        if step is None:
            self._log("specialize", LAMBDA, "0|1", depth, st)
            return (self._solve(st.specialize_lambda(0), None, depth + 1)
                    - self._solve(st.specialize_lambda(1), d, depth + 1))
        kind, var, branches = step
        total = ZERO
        for sign, tag, br in branches:
            self._log(kind, var, tag, depth, br)
            total = total + sign * self._delta(br, d, depth + 1)
        return total

    # -- rule selection -------------------------------------------------------

    def _choose(self, st: Stratum, d: int | None, lam_symbolic: bool):
        constraints = st.equations + st.inequations

        # linear step: smallest total degree of the coefficient, then variable id
        best = None
        for i, g in enumerate(st.equations):
            for x in _coord_vars(g):
                sp = g.linear_split(x)
                if sp is None or _has_lambda(sp[0]):
                    continue
                key = (sp[0].total_degree(), x.id, i)
                if best is None or key < best[0]:
                    best = (key, g, x, sp)
        if best is not None:
            _, g, x, (a, b) = best
            if a.is_constant():
                return "solve", x, [(1, "unit", eliminate(st, x, a, b, g))]
            nonzero, zero = split(st, a)
            branch_a = eliminate(nonzero, x, a, b, g)
            eqs = list(zero.equations)
            eqs[eqs.index(g)] = b
            branch_b = replace(zero, equations=tuple(eqs))
            return "linear", x, [(1, "A", branch_a), (1, "B", branch_b)]

        if not lam_symbolic:
            for g in st.equations:
                cv = _coord_vars(g)
                if len(cv) != 1 or len(g.terms) != 2:
                    continue
                x = next(iter(cv))
                if any(x in h.variables() for h in constraints if h is not g):
                    continue
                coeffs = g.coefficients_in(x)
                k = max(coeffs)
                if set(coeffs) != {0, k} or not coeffs[0].is_constant():
                    continue
                c = coeffs[k].constant_term()
                ratio = -coeffs[0].constant_term() / c
                self.records.append(("torsor", k, ratio))
                new = replace(
                    st,
                    equations=tuple(h for h in st.equations if h is not g),
                    variables=st.variables - {x},
                    factor=st.factor * torsor_class(k, x.weight, d),
                )
                return "torsor", x, [(1, f"k={k}", new)]

        hyper = self._hyperbolic(st, d)
        if hyper is not None:
            return hyper

        for g in st.equations:
            content = [(v, e) for v, e in g.monomial_content() if v != LAMBDA]
            if not content:
                continue
            x, e = min(content)
            nonzero, _ = split(st, CommPoly.var(x))
            eqs = list(nonzero.equations)
            eqs[eqs.index(g)] = g.divide_monomial(((x, e),))
            return "monomial", x, [(1, "x=0", _set_zero(st, x)),
                                   (1, "x!=0", replace(nonzero, equations=tuple(eqs)))]
        return None

    def _hyperbolic(self, st: Stratum, d: int | None):
        """``c1*x^2 + c2*y^2`` with x, y isolated becomes ``c1*x*y`` (a linear change over C)."""
        for g in st.equations:
            squares = {}
            for x in sorted(_coord_vars(g)):
                if any(x in h.variables() for h in st.equations + st.inequations if h is not g):
                    continue
                coeffs = g.coefficients_in(x)
                if set(coeffs) != {0, 2} or not coeffs[2].is_constant():
                    continue
                squares[x] = coeffs[2].constant_term()
            xs = sorted(squares)
            for i, x in enumerate(xs):
                for y in xs[i + 1:]:
                    if d is not None and (x.weight - y.weight) % d:
                        continue
                    c1, c2 = squares[x], squares[y]
                    X, Y = CommPoly.var(x), CommPoly.var(y)
                    new_g = g - c1 * X * X - c2 * Y * Y + c1 * X * Y
                    self.records.append(("hyperbolic", -c2 / c1))
                    eqs = tuple(new_g if h is g else h for h in st.equations)
                    return "hyperbolic", f"{x},{y}", [(1, "uv", replace(st, equations=eqs))]
        return None

    def _open_step(self, st: Stratum, lam_symbolic: bool):
        """No equations left: ``[g != 0, rest] = [rest] - [g = 0, rest]``."""
        cands = [g for g in st.inequations if not (lam_symbolic and _has_lambda(g))]
        if not cands:
            return None
        g = min(cands, key=lambda h: (len(_coord_vars(h)), h.total_degree(), h.render()))
        rest = replace(st, inequations=tuple(h for h in st.inequations if h is not g))
        _, zero = split(rest, g)
        return "scissor", None, [(1, "drop", rest), (-1, "g=0", zero)]


def _check_weights(f: CommPoly, d: int):
    if d < 2:
        raise ValueError("d must be >= 2")
    if not f.is_weight_homogeneous(d, 0):
        raise WeightError(f"{f} is not of weight 0 mod {d}")


def motive_of(f: CommPoly, lam=0, ambient=None, equivariant: int | None = None) -> MotiveExpr:
    return Stratifier().motive_of(f, lam, ambient, equivariant)


def delta(f: CommPoly, ambient=None) -> MotiveExpr:
    return Stratifier().delta(f, ambient)


def delta_with_mu(f: CommPoly, d: int, ambient=None) -> MotiveExpr:
    return Stratifier().delta(f, ambient, equivariant=d)
