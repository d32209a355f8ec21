"""Cellular decomposition of the generic Brauer-Severi variety of a free algebra.

Cells are indexed by tree ideals: sets of ``n`` words containing the empty word
and closed under deleting the leftmost letter, so the children of a node ``w``
are the words ``X_u w``.  Words are compared along their root-to-node path,
i.e. by reading letters right to left, proper prefixes first.

For each generator ``u`` the cell matrix sends basis vector ``e_w`` to
``e_{X_u w}`` when ``X_u w`` is a node; when it is an extended leaf ``l`` the
column carries free coordinates in the rows of nodes smaller than ``l``.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from functools import cached_property
from typing import Union

from .ncpoly import Word, word_text
from .poly import CommPoly, Var


def word_key(w: Word) -> Word:
    return tuple(reversed(w))


def word_less(w1: Word, w2: Word) -> bool:
    return word_key(w1) < word_key(w2)


@dataclass(frozen=True)
class Coord:
    """Free coordinate of a cell: entry ``(row, col)`` of generator ``u``'s matrix."""

    id: int
    name: str
    u: int
    row: Word
    col: Word
    leaf: Word

    def weight(self, d: int) -> int:
        return (len(self.leaf) - len(self.row)) % d


Entry = Union[int, Coord]


@dataclass(frozen=True)
class TreeCell:
    m: int
    nodes: tuple[Word, ...]
    leaves: tuple[Word, ...]
    matrices: tuple[tuple[tuple[Entry, ...], ...], ...]

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def vector(self) -> tuple[int, ...]:
        return (1,) + (0,) * (self.n - 1)

    @cached_property
    def coords(self) -> tuple[Coord, ...]:
        out = [e for M in self.matrices for row in M for e in row if isinstance(e, Coord)]
        return tuple(sorted(out, key=lambda c: c.id))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def variables(self, d: int | None = None) -> dict[Coord, Var]:
        return {c: Var(c.id, c.name, c.weight(d) if d else 1) for c in self.coords}

    def poly_matrices(self, d: int | None = None) -> list[list[list[CommPoly]]]:
        """Cell matrices with coordinates as polynomial variables carrying mu_d weights."""
        vs = self.variables(d)
        out = []
        for M in self.matrices:
            out.append([
                [CommPoly.var(vs[e]) if isinstance(e, Coord) else CommPoly.const(e) for e in row]
                for row in M
            ])
        return out

    def weights(self, d: int) -> dict[Coord, int]:
        return cell_weights(self, d)

    def to_json(self) -> dict:
        def entry(e):
            return e.name if isinstance(e, Coord) else e

        return {
            "nodes": [word_text(w, self.m) for w in self.nodes],
            "leaves": [word_text(w, self.m) for w in self.leaves],
            "dim": self.dim,
            "matrices": [[[entry(e) for e in row] for row in M] for M in self.matrices],
        }


def _tree_ideals(m: int, n: int) -> list[frozenset[Word]]:
    level = {frozenset([()])}
    for _ in range(n - 1):
        nxt = set()
        for nodes in level:
            for w in nodes:
                for u in range(1, m + 1):
                    child = (u,) + w
                    if child not in nodes:
                        nxt.add(nodes | {child})
        level = nxt
    return list(level)


def _coord_name(m: int, n: int, u: int, r: int, c: int) -> str:
    if m == 1:
        return f"a{r + 1}"
    pos = (u - 1) * n * n + r * n + c
    if m * n * n <= 26:
        return string.ascii_lowercase[pos]
    return f"x{u}_{r + 1}_{c + 1}"


def make_cell(m: int, nodes) -> TreeCell:
    nodes = tuple(sorted(nodes, key=word_key))
    node_set = set(nodes)
    if () not in node_set:
        raise ValueError("a tree ideal contains the root")
    for w in nodes:
        if w and w[1:] not in node_set:
            raise ValueError(f"{w} has no parent in the node set")
    n = len(nodes)
    index = {w: i for i, w in enumerate(nodes)}
    leaves = []
    mats = []
    for u in range(1, m + 1):
        M: list[list[Entry]] = [[0] * n for _ in range(n)]
        for c, w in enumerate(nodes):
            child = (u,) + w
            if child in node_set:
                M[index[child]][c] = 1
                continue
            leaves.append(child)
            for r, w2 in enumerate(nodes):
                if word_less(w2, child):
                    pos = (u - 1) * n * n + r * n + c
                    M[r][c] = Coord(pos, _coord_name(m, n, u, r, c), u, w2, w, child)
        mats.append(tuple(tuple(row) for row in M))
    leaves.sort(key=word_key)
    if len(leaves) != n * (m - 1) + 1:
        raise AssertionError("extended leaf count must be n(m-1)+1")
    return TreeCell(m, nodes, tuple(leaves), tuple(mats))


def enumerate_cells(m: int, n: int) -> list[TreeCell]:
    if m < 1 or n < 1:
        raise ValueError("need m >= 1 and n >= 1")
    cells = [make_cell(m, ideal) for ideal in _tree_ideals(m, n)]
    cells.sort(key=lambda c: [word_key(w) for w in c.nodes])
    return cells


def cell_dimension(cell: TreeCell) -> int:
    """Sum over extended leaves of the number of nodes below each leaf."""
    return sum(sum(1 for w in cell.nodes if word_less(w, leaf)) for leaf in cell.leaves)


def cell_parametrization(cell: TreeCell):
    return cell.matrices, cell.vector


def cell_weights(cell: TreeCell, d: int) -> dict[Coord, int]:
    if d < 2:
        raise ValueError("d must be >= 2")
    return {c: c.weight(d) for c in cell.coords}


def cell_weights_json(cell: TreeCell, d: int) -> dict[str, int]:
    return {c.name: w for c, w in cell_weights(cell, d).items()}
