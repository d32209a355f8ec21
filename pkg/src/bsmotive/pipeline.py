"""From per-cell deltas to virtual motives of representation schemes.

``delta_bs`` sums the stratifier's delta over all tree cells; ``delta_m``
solves the inductive identity

    (L^n - 1) dM_n = [GL_n] dBS_n
                     + sum_{k<n} L^{mk(n-k)} [Gr(k,n)] [GL_k] dBS_k dM_{n-k}

for ``dM_n`` by exact division, and the virtual motive is ``L^{-mn^2/2} dM_n``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .cache import ResultsCache
from .cells import TreeCell, enumerate_cells
from .motive import L, ONE, ZERO, MotiveExpr, gl_motive, grassmann_motive
from .ncpoly import Superpotential, trace_polynomial
from .poly import CommPoly
from .stratify import Stratifier, StuckError

log = logging.getLogger(__name__)

MODES = ("plain", "equivariant")


class NotSeparable(ValueError):
    pass


def _check_mode(mode: str):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def cell_trace(W: Superpotential, cell: TreeCell) -> CommPoly:
    return trace_polynomial(W, cell.poly_matrices(W.degree))


def cell_delta(W: Superpotential, cell: TreeCell, mode: str = "equivariant",
               stratifier: Stratifier | None = None) -> MotiveExpr:
    """``[V(f) in cell] - [V(f - 1) in cell]`` for ``f = Tr W`` on the cell."""
    _check_mode(mode)
    st = stratifier or Stratifier()
    d = W.degree
    f = cell_trace(W, cell)
    ambient = cell.variables(d).values()
    try:
        return st.delta(f, ambient, equivariant=d if mode == "equivariant" else None)
    except StuckError as exc:
        exc.cell = cell
        raise


def delta_bs(W: Superpotential, n: int, mode: str = "equivariant",
             stratifier: Stratifier | None = None) -> MotiveExpr:
    if n < 1:
        raise ValueError("n must be >= 1")
    total = ZERO
    for cell in enumerate_cells(W.m, n):
        total = total + cell_delta(W, cell, mode, stratifier)
    return total


@dataclass
class DeltaTable:
    """Memo of dBS_n, dM_n and virtual motives for one potential."""

    potential: Superpotential
    mode: str = "equivariant"
    delta_bs: dict[int, MotiveExpr] = field(default_factory=dict)
    delta_m: dict[int, MotiveExpr] = field(default_factory=dict)
    virtual_rep: dict[int, MotiveExpr] = field(default_factory=dict)
    cache: ResultsCache | None = None
    stratifier: Stratifier | None = None

    def __post_init__(self):
        _check_mode(self.mode)

    @property
    def m(self) -> int:
        return self.potential.m

    @property
    def d(self) -> int:
        return self.potential.degree

    def bs(self, n: int) -> MotiveExpr:
        if n not in self.delta_bs:
            key = ResultsCache.key(self.potential.render(), self.m, n, self.mode)
            value = self.cache.get(key) if self.cache is not None else None
            if value is None:
                value = delta_bs(self.potential, n, self.mode, self.stratifier)
                if self.cache is not None:
                    self.cache.put(key, value)
            self.delta_bs[n] = value
        return self.delta_bs[n]

    def compute(self, nmax: int) -> DeltaTable:
        for n in range(1, nmax + 1):
            virtual_rep(self, n)
        return self


def delta_m(table: DeltaTable, n: int) -> MotiveExpr:
    if n in table.delta_m:
        return table.delta_m[n]
    if n < 1:
        raise ValueError("n must be >= 1")
    m = table.m
    rhs = gl_motive(n) * table.bs(n)
    for k in range(1, n):
        rhs = rhs + (L ** (m * k * (n - k)) * grassmann_motive(k, n) * gl_motive(k)
                     * table.bs(k) * delta_m(table, n - k))
    value = rhs.divexact(L ** n - 1)
    table.delta_m[n] = value
    log.debug("dM_%d = %s", n, value)
    return value


def virtual_rep(table: DeltaTable, n: int) -> MotiveExpr:
    if n not in table.virtual_rep:
        table.virtual_rep[n] = delta_m(table, n).shift(-table.m * n * n)
    return table.virtual_rep[n]


# -- separation of variables ----------------------------------------------------


def separated_sum(dm: tuple[MotiveExpr, MotiveExpr], dn: tuple[MotiveExpr, MotiveExpr]):
    """Fibers ``([S(0)], [S(1)])`` of ``f + g`` from the fibers of ``f`` and ``g``."""
    m0, m1 = (MotiveExpr.coerce(x) for x in dm)
    n0, n1 = (MotiveExpr.coerce(x) for x in dn)
    s0 = m0 * n0 + (L - 1) * m1 * n1
    s1 = m0 * n1 + m1 * n0 + (L - 2) * m1 * n1
    return s0, s1


def separated_delta(dm: MotiveExpr, dn: MotiveExpr) -> MotiveExpr:
    return MotiveExpr.coerce(dm) * MotiveExpr.coerce(dn)


def separated_factors(W: Superpotential, n: int, mode: str = "equivariant",
                      cache: ResultsCache | None = None) -> list[tuple[MotiveExpr, int]]:
    """Per-group virtual motives with multiplicities, grouped by equal potentials."""
    comps = W.components()
    if len(comps) < 2:
        raise NotSeparable(f"{W} does not split into disjoint generator groups")
    groups: dict[str, list] = {}
    for _, V in comps:
        groups.setdefault(V.render() + f"|{V.m}", [V, 0])[1] += 1
    out = []
    for V, mult in groups.values():
        out.append((virtual_rep(DeltaTable(V, mode, cache=cache), n), mult))
    return out


def separated_virtual(W: Superpotential, n: int, mode: str = "equivariant",
                      cache: ResultsCache | None = None) -> MotiveExpr:
    total = ONE
    for value, mult in separated_factors(W, n, mode, cache):
        total = total * value ** mult
    return total


def render_factored(factors: list[tuple[MotiveExpr, int]]) -> str:
    parts = []
    for value, mult in factors:
        text = value.factored()
        if mult > 1:
            parts.append(f"({text})^{mult}")
        elif len(factors) > 1:
            parts.append(f"({text})")
        else:
            parts.append(text)
    return "*".join(parts)
