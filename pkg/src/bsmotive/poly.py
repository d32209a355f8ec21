"""Sparse multivariate polynomials with exact rational coefficients.

A monomial is a sorted tuple of ``(Var, exponent)`` pairs with positive
exponents; the empty tuple is the constant monomial.  Variables compare and
hash by integer id only, so the display name and the mu_d weight are
metadata that travel with the variable::

    x, y = Var(0, "x"), Var(1, "y")
    f = CommPoly.var(x) * CommPoly.var(y) - 1     # x*y - 1
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Mapping, Union

Number = Union[int, Fraction]


class UnassignedVariable(KeyError):
    """A variable appearing in the polynomial has no value."""


@dataclass(frozen=True, order=True)
class Var:
    id: int
    name: str = field(default="", compare=False)
    weight: int = field(default=1, compare=False)

    def __str__(self) -> str:
        return self.name or f"v{self.id}"


Monomial = tuple[tuple[Var, int], ...]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps: dict[Var, int] = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _grlex_key(m: Monomial):
    # descending total degree, then lexicographic on ids (lower id first wins)
    return (-_mono_degree(m), tuple((v.id, -e) for v, e in m))


class CommPoly:
    """Immutable sparse polynomial over Q."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None):
        out: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c == 0:
                continue
            mono = tuple(sorted((v, e) for v, e in mono if e))
            out[mono] = out.get(mono, Fraction(0)) + c
        self._terms = {m: c for m, c in out.items() if c != 0}
        self._hash = None

    @classmethod
    def const(cls, c: Number) -> CommPoly:
        return cls({(): c})

    @classmethod
    def var(cls, v: Var) -> CommPoly:
        return cls({((v, 1),): 1})

    @classmethod
    def coerce(cls, x) -> CommPoly:
        if isinstance(x, CommPoly):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        if isinstance(x, Var):
            return cls.var(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to CommPoly")

    # -- inspection -----------------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def variables(self) -> frozenset[Var]:
        return frozenset(v for m in self._terms for v, _ in m)

    def degree(self, v: Var | None = None) -> int:
        if not self._terms:
            return -1
        if v is None:
            return max(_mono_degree(m) for m in self._terms)
        return max(dict(m).get(v, 0) for m in self._terms)

    total_degree = degree

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda mc: _grlex_key(mc[0]))

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other) -> CommPoly:
        try:
            other = CommPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return CommPoly(out)

    __radd__ = __add__

    def __neg__(self) -> CommPoly:
        return CommPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> CommPoly:
        try:
            other = CommPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> CommPoly:
        return CommPoly.coerce(other) - self

    def __mul__(self, other) -> CommPoly:
        try:
            other = CommPoly.coerce(other)
        except TypeError:
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        out: dict[Monomial, Fraction] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = _mono_mul(ma, mb)
                out[m] = out.get(m, Fraction(0)) + ca * cb
        return CommPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> CommPoly:
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CommPoly.const(other)
        if not isinstance(other, CommPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def scale(self, c: Number) -> CommPoly:
        return CommPoly({m: c * v for m, v in self._terms.items()})

    # -- structure ------------------------------------------------------------

    def content(self) -> Fraction:
        """Positive rational c with ``self / c`` having coprime integer coefficients."""
        if not self._terms:
            return Fraction(0)
        nums = [c.numerator for c in self._terms.values()]
        dens = [c.denominator for c in self._terms.values()]
        g = reduce(gcd, nums)
        lcm = reduce(lambda a, b: a * b // gcd(a, b), dens)
        return Fraction(abs(g), lcm)

    def primitive(self) -> tuple[Fraction, CommPoly]:
        c = self.content()
        if c == 0:
            return c, ZERO
        return c, self.scale(1 / c)

    def monomial_content(self) -> Monomial:
        """Largest monomial dividing every term."""
        if not self._terms:
            return ()
        monos = list(self._terms)
        common = dict(monos[0])
        for m in monos[1:]:
            d = dict(m)
            common = {v: min(e, d[v]) for v, e in common.items() if v in d}
        return tuple(sorted(common.items()))

    def divide_monomial(self, mono: Monomial) -> CommPoly:
        div = dict(mono)
        out = {}
        for m, c in self._terms.items():
            d = dict(m)
            for v, e in div.items():
                if d.get(v, 0) < e:
                    raise ArithmeticError(f"monomial does not divide {self}")
                d[v] -= e
            out[tuple(sorted(d.items()))] = c
        return CommPoly(out)

    def coefficients_in(self, v: Var) -> dict[int, CommPoly]:
        """Coefficients of ``self`` as a polynomial in ``v``."""
        out: dict[int, dict[Monomial, Fraction]] = {}
        for m, c in self._terms.items():
            d = dict(m)
            e = d.pop(v, 0)
            out.setdefault(e, {})[tuple(sorted(d.items()))] = c
        return {e: CommPoly(t) for e, t in out.items()}

    def linear_split(self, v: Var) -> tuple[CommPoly, CommPoly] | None:
        """``(a, b)`` with ``self = a*v + b`` when ``deg_v = 1``; None otherwise."""
        if self.degree(v) != 1:
            return None
        coeffs = self.coefficients_in(v)
        return coeffs[1], coeffs.get(0, ZERO)

    def specialize(self, v: Var, value) -> CommPoly:
        """Substitute ``v := value`` (a number or a polynomial)."""
        value = CommPoly.coerce(value)
        out = ZERO
        powers: dict[int, CommPoly] = {}
        for e, coeff in self.coefficients_in(v).items():
            if e not in powers:
                powers[e] = value ** e
            out = out + coeff * powers[e]
        return out

    def substitute(self, values: Mapping[Var, Number]) -> CommPoly:
        f = self
        for v, x in values.items():
            f = f.specialize(v, x)
        return f

    def eval_mod_p(self, point: Mapping[Var, int], q: int) -> int:
        total = 0
        for m, c in self._terms.items():
            if c.denominator % q == 0:
                raise ZeroDivisionError(f"coefficient {c} undefined mod {q}")
            term = c.numerator * pow(c.denominator, -1, q)
            for v, e in m:
                if v not in point:
                    raise UnassignedVariable(v)
                term = term * pow(point[v], e, q)
            total = (total + term) % q
        return total

    # -- weights --------------------------------------------------------------

    def monomial_weights(self, d: int) -> set[int]:
        return {sum(v.weight * e for v, e in m) % d for m in self._terms}

    def is_weight_homogeneous(self, d: int, weight: int | None = None) -> bool:
        ws = self.monomial_weights(d)
        if weight is None:
            return len(ws) <= 1
        return ws <= {weight % d}

    # -- display --------------------------------------------------------------

    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            mono = "*".join(f"{v}" + (f"^{e}" if e > 1 else "") for v, e in m)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    __str__ = render

    def __repr__(self) -> str:
        return f"CommPoly({self.render()!r})"


ZERO = CommPoly()
ONE = CommPoly.const(1)


def variables(names: Iterable[str] | str, start: int = 0) -> list[Var]:
    """Convenience constructor: ``variables("x y z")`` gives ids 0, 1, 2."""
    if isinstance(names, str):
        names = names.split()
    return [Var(start + i, n) for i, n in enumerate(names)]


def polys(vs: Iterable[Var]) -> list[CommPoly]:
    return [CommPoly.var(v) for v in vs]


def arith(a: CommPoly, b: CommPoly, op: str) -> CommPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def linear_split(f: CommPoly, v: Var):
    return f.linear_split(v)


def specialize(f: CommPoly, v: Var, value) -> CommPoly:
    return f.specialize(v, value)


def eval_mod_p(f: CommPoly, point: Mapping[Var, int], q: int) -> int:
    return f.eval_mod_p(point, q)
