"""Exact arithmetic in the ring of (equivariant) naive motives.

Elements are Laurent polynomials in the half-Lefschetz class ``L^(1/2)`` whose
coefficients are integer polynomials in free commuting symbols ``[mu_d]``
(``d >= 2``).  A term is keyed by ``(lhalf, mu)`` where ``lhalf`` is the
exponent of ``L`` counted in halves and ``mu`` is a sorted tuple (a multiset)
of the orders ``d`` occurring in the monomial::

    L^2 - L^(3/2)      ->  {(4, ()): 1, (3, ()): -1}
    (1 - m3)^2         ->  {(0, ()): 1, (0, (3,)): -2, (0, (3, 3)): 1}

``[mu_2]`` is kept as a symbol until :func:`reduce_mu2` rewrites it to
``1 - L^(1/2)``; point-count evaluation needs the unreduced form.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from typing import Iterable, Mapping, Union

__all__ = [
    "MotiveExpr",
    "DivisionError",
    "HalfPowerError",
    "NegativePowerError",
    "L",
    "L_HALF",
    "ONE",
    "ZERO",
    "mu",
    "lefschetz",
    "add",
    "sub",
    "mul",
    "reduce_mu2",
    "evaluate_count",
    "gl_motive",
    "projective_motive",
    "grassmann_motive",
]

Key = tuple[int, tuple[int, ...]]
Coercible = Union["MotiveExpr", int]


class DivisionError(ArithmeticError):
    """An exact division left a nonzero remainder."""


class HalfPowerError(ValueError):
    """A half-integer power of L cannot be evaluated as a point count."""


class NegativePowerError(ValueError):
    """A negative power of L cannot be evaluated as a point count."""


class MotiveExpr:
    """Immutable element of the motive ring in canonical form."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Key, int] | None = None):
        clean: dict[Key, int] = {}
        for (lhalf, mus), coeff in (terms or {}).items():
            coeff = int(coeff)
            if coeff == 0:
                continue
            mus = tuple(sorted(mus))
            if any(d < 2 for d in mus):
                raise ValueError(f"mu index must be >= 2, got {mus}")
            key = (int(lhalf), mus)
            clean[key] = clean.get(key, 0) + coeff
        self._terms = {k: c for k, c in clean.items() if c != 0}
        self._hash = None

    # -- construction ---------------------------------------------------------

    @classmethod
    def const(cls, c: int) -> MotiveExpr:
        return cls({(0, ()): c})

    @classmethod
    def coerce(cls, x: Coercible) -> MotiveExpr:
        if isinstance(x, MotiveExpr):
            return x
        if isinstance(x, int):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to MotiveExpr")

    # -- inspection -----------------------------------------------------------

    @property
    def terms(self) -> dict[Key, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def mu_orders(self) -> set[int]:
        return {d for (_, mus) in self._terms for d in mus}

    def has_mu(self) -> bool:
        return any(mus for (_, mus) in self._terms)

    def lhalf_range(self) -> tuple[int, int]:
        if not self._terms:
            raise ValueError("zero has no degree")
        exps = [e for (e, _) in self._terms]
        return min(exps), max(exps)

    def sorted_terms(self) -> list[tuple[Key, int]]:
        return sorted(self._terms.items(), key=lambda kv: (-kv[0][0], kv[0][1]))

    # -- ring operations ------------------------------------------------------

    def __add__(self, other: Coercible) -> MotiveExpr:
        try:
            other = MotiveExpr.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return MotiveExpr(out)

    __radd__ = __add__

    def __neg__(self) -> MotiveExpr:
        return MotiveExpr({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: Coercible) -> MotiveExpr:
        try:
            other = MotiveExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Coercible) -> MotiveExpr:
        return MotiveExpr.coerce(other) - self

    def __mul__(self, other: Coercible) -> MotiveExpr:
        try:
            other = MotiveExpr.coerce(other)
        except TypeError:
            return NotImplemented
        out: dict[Key, int] = defaultdict(int)
        for (ea, ma), ca in self._terms.items():
            for (eb, mb), cb in other._terms.items():
                out[(ea + eb, tuple(sorted(ma + mb)))] += ca * cb
        return MotiveExpr(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> MotiveExpr:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if len(self._terms) == 1:
                ((e, mus), c), = self._terms.items()
                if not mus and c in (1, -1):
                    return MotiveExpr({(e * k, ()): c ** (-k)})
            raise ValueError("only monomials c*L^e with c = +-1 have inverses")
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = MotiveExpr.const(other)
        if not isinstance(other, MotiveExpr):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"MotiveExpr({self.render()!r})"

    def __str__(self) -> str:
        return self.render()

    # -- rewriting --------------------------------------------------------------

    def reduce_mu2(self) -> MotiveExpr:
        """Rewrite every ``[mu_2]`` as ``1 - L^(1/2)``."""
        one_minus_half = MotiveExpr({(0, ()): 1, (1, ()): -1})
        out = ZERO
        for (e, mus), c in self._terms.items():
            k = mus.count(2)
            rest = tuple(d for d in mus if d != 2)
            out = out + MotiveExpr({(e, rest): c}) * one_minus_half ** k
        return out

    def evaluate_count(self, q: int) -> int:
        """Substitute ``L -> q`` and ``[mu_d] -> d``."""
        if not _is_prime(q):
            raise ValueError(f"q must be prime, got {q}")
        total = 0
        for (e, mus), c in self._terms.items():
            if e % 2:
                raise HalfPowerError(f"half power L^({e}/2) has no point count")
            if e < 0:
                raise NegativePowerError(f"negative power L^{e // 2} has no point count")
            term = c * q ** (e // 2)
            for d in mus:
                term *= d
            total += term
        return total

    def shift(self, lhalf: int) -> MotiveExpr:
        """Multiply by ``L^(lhalf/2)``."""
        return MotiveExpr({(e + lhalf, m): c for (e, m), c in self._terms.items()})

    def divexact(self, divisor: Coercible) -> MotiveExpr:
        """Exact quotient by a mu-free divisor; raises DivisionError otherwise."""
        divisor = MotiveExpr.coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero motive")
        if divisor.has_mu():
            raise DivisionError("divisor must be free of mu classes")
        if self.is_zero():
            return ZERO
        dpoly = {e: c for (e, _), c in divisor._terms.items()}
        dmin = min(dpoly)
        d0 = {e - dmin: c for e, c in dpoly.items()}
        dtop = max(d0)
        lead = d0[dtop]

        groups: dict[tuple[int, ...], dict[int, int]] = defaultdict(dict)
        for (e, mus), c in self._terms.items():
            groups[mus][e] = c

        out: dict[Key, int] = {}
        for mus, poly in groups.items():
            pmin = min(poly)
            rem = {e - pmin: c for e, c in poly.items()}
            quot: dict[int, int] = {}
            while rem:
                top = max(rem)
                if top < dtop:
                    raise DivisionError(f"{self} is not divisible by {divisor}")
                c, r = divmod(rem[top], lead)
                if r:
                    raise DivisionError(f"{self} is not divisible by {divisor}")
                shift = top - dtop
                quot[shift] = c
                for e, dc in d0.items():
                    v = rem.get(e + shift, 0) - c * dc
                    if v:
                        rem[e + shift] = v
                    else:
                        rem.pop(e + shift, None)
            for e, c in quot.items():
                out[(e + pmin - dmin, mus)] = c
        return MotiveExpr(out)

    # -- rendering ------------------------------------------------------------

    def render(self) -> str:
        """Canonical text: descending L-exponent, then lexicographic mu-multiset."""
        if not self._terms:
            return "0"
        return _join_signed((c, _monomial_text(e, mus)) for (e, mus), c in self.sorted_terms())

    def to_latex(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (e, mus), c in self.sorted_terms():
            parts.append((c, _monomial_latex(e, mus)))
        return _join_signed(parts, sep_mul=" ")

    def to_json(self) -> list[dict]:
        return [
            {"lhalf": e, "mu": list(mus), "coeff": str(c)}
            for (e, mus), c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data: Iterable[Mapping]) -> MotiveExpr:
        return cls({(int(t["lhalf"]), tuple(int(d) for d in t["mu"])): int(t["coeff"]) for t in data})

    def factored(self) -> str:
        """Human-oriented rendering grouping L-powers by a common (1-m_d)^k factor.

        ``L^3 - L^2 + L - 2*L*m3 + L*m3^2`` renders as ``(L^3-L^2) + L*(1-m3)^2``.
        Purely cosmetic; :meth:`render` is the canonical form.
        """
        if not self._terms:
            return "0"
        by_power: dict[int, dict[tuple[int, ...], int]] = defaultdict(dict)
        for (e, mus), c in self._terms.items():
            by_power[e][mus] = c
        groups: dict[tuple, dict[int, int]] = defaultdict(dict)
        leftovers: list[tuple[int, dict]] = []
        for e, coeffs in by_power.items():
            fac = _factor_one_minus_mu(coeffs)
            if fac is None:
                leftovers.append((e, coeffs))
            else:
                scalar, powers = fac
                groups[powers][e] = scalar
        pieces = []
        for powers in sorted(groups, key=lambda p: (len(p), p)):
            lpoly = MotiveExpr({(e, ()): c for e, c in groups[powers].items()})
            mu_txt = "*".join(
                f"(1-m{d})" + (f"^{k}" if k > 1 else "") for d, k in powers
            )
            lterms = lpoly.sorted_terms()
            ltxt = lpoly.render().replace(" ", "")
            if not mu_txt:
                pieces.append(f"({ltxt})" if len(lterms) > 1 else ltxt)
            elif len(lterms) == 1 and lterms[0][1] in (1, -1):
                (e, _), c = lterms[0]
                mono = _monomial_text(e, ())
                sign = "-" if c < 0 else ""
                pieces.append(f"{sign}{mono}*{mu_txt}" if mono else f"{sign}{mu_txt}")
            else:
                pieces.append(f"({ltxt})*{mu_txt}")
        for e, coeffs in sorted(leftovers, key=lambda t: -t[0]):
            inner = MotiveExpr({(0, m): c for m, c in coeffs.items()}).render().replace(" ", "")
            mono = _monomial_text(e, ())
            pieces.append(f"{mono}*({inner})" if mono else f"({inner})")
        return " + ".join(pieces)


def _join_signed(parts: Iterable[tuple[int, str]], sep_mul: str = "*") -> str:
    out = []
    for i, (c, mono) in enumerate(parts):
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}{sep_mul}{mono}"
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


def _lpower_text(e: int) -> str:
    if e == 0:
        return ""
    if e == 2:
        return "L"
    if e % 2 == 0:
        return f"L^{e // 2}"
    return f"L^({e}/2)"


def _monomial_text(e: int, mus: tuple[int, ...]) -> str:
    factors = [_lpower_text(e)] if e else []
    for d, k in sorted(Counter(mus).items()):
        factors.append(f"m{d}" + (f"^{k}" if k > 1 else ""))
    return "*".join(factors)


def _monomial_latex(e: int, mus: tuple[int, ...]) -> str:
    factors = []
    if e == 2:
        factors.append(r"\mathbb{L}")
    elif e % 2 == 0 and e:
        factors.append(rf"\mathbb{{L}}^{{{e // 2}}}")
    elif e:
        sign = "-" if e < 0 else ""
        factors.append(rf"\mathbb{{L}}^{{{sign}\frac{{{abs(e)}}}{{2}}}}")
    for d, k in sorted(Counter(mus).items()):
        factors.append(rf"[\mu_{{{d}}}]" + (f"^{{{k}}}" if k > 1 else ""))
    return " ".join(factors)


def _factor_one_minus_mu(coeffs: dict[tuple[int, ...], int]):
    """Write a mu-polynomial as ``c * prod (1-m_d)^k_d`` if possible."""
    poly = MotiveExpr({(0, m): c for m, c in coeffs.items()})
    powers = []
    for d in sorted(poly.mu_orders()):
        k = 0
        while True:
            q = _div_mu_linear(poly, d)
            if q is None:
                break
            poly, k = q, k + 1
        if k:
            powers.append((d, k))
    if poly.has_mu() or len(poly._terms) != 1:
        return None
    ((_, _), scalar), = poly._terms.items()
    return scalar, tuple(powers)


def _div_mu_linear(poly: MotiveExpr, d: int) -> MotiveExpr | None:
    """Divide a constant-L mu-polynomial by ``(1 - m_d)``; None if inexact."""
    by_rest: dict[tuple[int, ...], dict[int, int]] = defaultdict(dict)
    for (_, mus), c in poly._terms.items():
        k = mus.count(d)
        rest = tuple(x for x in mus if x != d)
        by_rest[rest][k] = c
    out: dict[Key, int] = {}
    for rest, p in by_rest.items():
        # p(t) / (1 - t): q_j = sum_{i<=j} p_i, remainder sum p_i must vanish
        if sum(p.values()) != 0:
            return None
        acc = 0
        for j in range(max(p)):
            acc += p.get(j, 0)
            if acc:
                out[(0, tuple(sorted(rest + (d,) * j)))] = acc
    return MotiveExpr(out)


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


ZERO = MotiveExpr()
ONE = MotiveExpr.const(1)
L = MotiveExpr({(2, ()): 1})
L_HALF = MotiveExpr({(1, ()): 1})


def mu(d: int) -> MotiveExpr:
    """The class ``[mu_d]`` of d cyclically permuted points; ``[mu_1] = 1``."""
    if d == 1:
        return ONE
    return MotiveExpr({(0, (d,)): 1})


def lefschetz(lhalf: int) -> MotiveExpr:
    """``L^(lhalf/2)``."""
    return MotiveExpr({(lhalf, ()): 1})


def add(a: Coercible, b: Coercible) -> MotiveExpr:
    return MotiveExpr.coerce(a) + b


def sub(a: Coercible, b: Coercible) -> MotiveExpr:
    return MotiveExpr.coerce(a) - b


def mul(a: Coercible, b: Coercible) -> MotiveExpr:
    return MotiveExpr.coerce(a) * b


def reduce_mu2(a: Coercible) -> MotiveExpr:
    return MotiveExpr.coerce(a).reduce_mu2()


def evaluate_count(a: Coercible, q: int) -> int:
    return MotiveExpr.coerce(a).evaluate_count(q)


def gl_motive(n: int) -> MotiveExpr:
    """``[GL_n] = prod_{k<n} (L^n - L^k)``; ``[GL_0] = 1``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = ONE
    for k in range(n):
        out = out * (L ** n - L ** k)
    return out


def projective_motive(n: int) -> MotiveExpr:
    """``[P^n] = (L^(n+1) - 1) / (L - 1)``, by exact division."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return (L ** (n + 1) - 1).divexact(L - 1)


def grassmann_motive(k: int, n: int) -> MotiveExpr:
    """``[Gr(k,n)] = [GL_n] / ([GL_k][GL_{n-k}] L^{k(n-k)})``, by exact division."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    return gl_motive(n).divexact(gl_motive(k) * gl_motive(n - k) * L ** (k * (n - k)))
