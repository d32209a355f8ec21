"""Noncommutative polynomials, superpotentials and their cyclic derivatives.

Words are tuples of 1-based generator indices; ``()`` is the identity.
Generators print as ``X, Y, Z`` when ``m <= 3`` and as ``X1 .. Xm`` otherwise.

Grammar accepted by :func:`parse` (whitespace insignificant)::

    expr      := ['+'|'-'] term (('+'|'-') term)*
    term      := [rational] ('*'? factor)+  |  rational
    factor    := generator ('^' nat)?
    generator := 'X' | 'Y' | 'Z' | 'X' nat
    rational  := nat ('/' nat)?
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .poly import ZERO as POLY_ZERO, CommPoly

Word = tuple[int, ...]
Matrix = list[list[CommPoly]]

_LETTERS = {"X": 1, "Y": 2, "Z": 3}


class NCSyntaxError(SyntaxError):
    def __init__(self, msg: str, text: str, pos: int):
        super().__init__(f"{msg} at position {pos} in {text!r}")
        self.pos = pos


class UnknownGenerator(NCSyntaxError):
    pass


class DimensionMismatch(ValueError):
    pass


class NotHomogeneous(ValueError):
    pass


def generator_name(i: int, m: int) -> str:
    if m <= 3:
        return "XYZ"[i - 1]
    return f"X{i}"


def word_text(w: Word, m: int, sep: str = "") -> str:
    """``(1, 1, 2)`` -> ``X^2Y`` (or ``X^2*Y`` with ``sep='*'``); ``()`` -> ``1``."""
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        name = generator_name(w[i], m)
        parts.append(name + (f"^{j - i}" if j - i > 1 else ""))
        i = j
    if not sep and m > 3:
        sep = "*"
    return sep.join(parts)


@dataclass(frozen=True)
class NCPoly:
    m: int
    terms: Mapping[Word, Fraction]

    def __post_init__(self):
        clean = {}
        for w, c in self.terms.items():
            c = Fraction(c)
            w = tuple(w)
            if any(not 1 <= i <= self.m for i in w):
                raise ValueError(f"word {w} uses a generator outside 1..{self.m}")
            if c:
                clean[w] = clean.get(w, Fraction(0)) + c
        object.__setattr__(self, "terms", {w: c for w, c in clean.items() if c})

    def __eq__(self, other) -> bool:
        return isinstance(other, NCPoly) and self.m == other.m and dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash((self.m, frozenset(self.terms.items())))

    def __add__(self, other: NCPoly) -> NCPoly:
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return NCPoly(max(self.m, other.m), out)

    def scale(self, c) -> NCPoly:
        return NCPoly(self.m, {w: c * v for w, v in self.terms.items()})

    def degrees(self) -> set[int]:
        return {len(w) for w in self.terms}

    def generators(self) -> set[int]:
        return {i for w in self.terms for i in w}

    def sorted_words(self) -> list[Word]:
        return sorted(self.terms, key=lambda w: (-len(w), w))

    def render(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for i, w in enumerate(self.sorted_words()):
            c = self.terms[w]
            mag = abs(c)
            body = word_text(w, self.m, sep="*")
            if not w:
                body = str(mag)
            elif mag != 1:
                body = f"{mag}*{body}"
            if i == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    __str__ = render


class _Parser:
    def __init__(self, text: str, m: int):
        self.text = text
        self.m = m
        self.pos = 0

    def error(self, msg, cls=NCSyntaxError, pos=None):
        raise cls(msg, self.text, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def nat(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected a natural number")
        return int(self.text[start:self.pos])

    def parse(self) -> NCPoly:
        terms: dict[Word, Fraction] = {}
        sign = 1
        if self.peek() and self.peek() in "+-":
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        while True:
            c, w = self.term()
            terms[w] = terms.get(w, Fraction(0)) + sign * c
            ch = self.peek()
            if not ch:
                break
            if ch not in "+-":
                self.error(f"unexpected character {ch!r}")
            sign = -1 if ch == "-" else 1
            self.pos += 1
        return NCPoly(self.m, terms)

    def term(self) -> tuple[Fraction, Word]:
        coeff = Fraction(1)
        has_coeff = False
        ch = self.peek()
        if ch.isdigit():
            num = self.nat()
            den = 1
            if self.peek() == "/":
                self.pos += 1
                den = self.nat()
                if den == 0:
                    self.error("zero denominator")
            coeff = Fraction(num, den)
            has_coeff = True
        elif not ch:
            self.error("unexpected end of input")
        word: list[int] = []
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                if not self.peek().isalpha():
                    self.error("expected a generator after '*'")
            elif not ch.isalpha():
                break
            word.extend(self.factor())
        if not has_coeff and not word:
            self.error("empty term")
        return coeff, tuple(word)

    def factor(self) -> list[int]:
        self.skip()
        start = self.pos
        ch = self.text[self.pos]
        if ch not in _LETTERS:
            self.error(f"unknown symbol {ch!r} (scalars must be rational literals)")
        self.pos += 1
        if ch == "X" and self.pos < len(self.text) and self.text[self.pos].isdigit():
            idx = self.nat()
        else:
            idx = _LETTERS[ch]
        if not 1 <= idx <= self.m:
            self.error(f"generator {self.text[start:self.pos]} not among {self.m} generators",
                       UnknownGenerator, pos=start)
        power = 1
        if self.peek() == "^":
            self.pos += 1
            power = self.nat()
        return [idx] * power


def parse(text: str, m: int) -> NCPoly:
    if m < 1:
        raise ValueError("need at least one generator")
    return _Parser(text, m).parse()


@dataclass(frozen=True)
class Superpotential:
    poly: NCPoly

    def __post_init__(self):
        degs = self.poly.degrees()
        if not degs:
            raise NotHomogeneous("zero potential")
        if len(degs) > 1:
            raise NotHomogeneous(f"potential mixes degrees {sorted(degs)}")
        if min(degs) < 2:
            raise NotHomogeneous("superpotential must have degree >= 2")

    @classmethod
    def parse(cls, text: str, m: int) -> Superpotential:
        return cls(parse(text, m))

    @property
    def m(self) -> int:
        return self.poly.m

    @property
    def degree(self) -> int:
        return next(iter(self.poly.degrees()))

    def render(self) -> str:
        return self.poly.render()

    __str__ = render

    def components(self) -> list[tuple[tuple[int, ...], Superpotential]]:
        """Split into potentials in disjoint generator groups, each re-indexed from 1.

        Groups are the connected components of the relation "occur in a common
        word"; generators absent from every word are dropped.
        """
        parent = {i: i for i in self.poly.generators()}

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for w in self.poly.terms:
            for a in w[1:]:
                ra, rb = find(w[0]), find(a)
                if ra != rb:
                    parent[rb] = ra
        groups: dict[int, list[int]] = {}
        for i in sorted(parent):
            groups.setdefault(find(i), []).append(i)
        out = []
        for gens in sorted(groups.values()):
            index = {g: k + 1 for k, g in enumerate(gens)}
            terms = {tuple(index[i] for i in w): c for w, c in self.poly.terms.items() if w[0] in index}
            out.append((tuple(gens), Superpotential(NCPoly(len(gens), terms))))
        return out


def cyclic_derivative(W: Superpotential | NCPoly, i: int) -> NCPoly:
    """Rotate each occurrence of ``X_i`` to the front, delete it, and sum."""
    poly = W.poly if isinstance(W, Superpotential) else W
    if not 1 <= i <= poly.m:
        raise ValueError(f"generator index {i} outside 1..{poly.m}")
    out: dict[Word, Fraction] = {}
    for w, c in poly.terms.items():
        for j, letter in enumerate(w):
            if letter == i:
                rot = w[j + 1:] + w[:j]
                out[rot] = out.get(rot, Fraction(0)) + c
    return NCPoly(poly.m, out)


def jacobi_relations(W: Superpotential) -> list[NCPoly]:
    return [cyclic_derivative(W, i) for i in range(1, W.m + 1)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    n, k, p = len(A), len(B), len(B[0])
    out = []
    for r in range(n):
        row = []
        for c in range(p):
            acc = POLY_ZERO
            for j in range(k):
                a, b = A[r][j], B[j][c]
                if a and b:
                    acc = acc + a * b
            row.append(acc)
        out.append(row)
    return out


def trace_polynomial(W: Superpotential | NCPoly, assignment: Mapping[int, Matrix] | Sequence[Matrix]) -> CommPoly:
    """``sum_w c_w * Tr(A_w)`` for the assigned generator matrices."""
    poly = W.poly if isinstance(W, Superpotential) else W
    if not isinstance(assignment, Mapping):
        assignment = {i + 1: A for i, A in enumerate(assignment)}
    mats = {}
    size = None
    for i in poly.generators():
        if i not in assignment:
            raise DimensionMismatch(f"no matrix assigned to generator {i}")
        A = [[CommPoly.coerce(x) for x in row] for row in assignment[i]]
        if any(len(row) != len(A) for row in A):
            raise DimensionMismatch(f"matrix for generator {i} is not square")
        if size is not None and len(A) != size:
            raise DimensionMismatch("matrices have different sizes")
        size = len(A)
        mats[i] = A
    # share products of common word suffixes
    memo: dict[Word, Matrix] = {}

    def product(w: Word) -> Matrix:
        if len(w) == 1:
            return mats[w[0]]
        if w not in memo:
            memo[w] = matmul(mats[w[0]], product(w[1:]))
        return memo[w]

    total = POLY_ZERO
    for w, c in poly.terms.items():
        if not w:
            total = total + CommPoly.const(c * (size or 0))
            continue
        P = product(w)
        total = total + sum((P[k][k] for k in range(len(P))), POLY_ZERO).scale(c)
    return total
