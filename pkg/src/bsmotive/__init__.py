"""Virtual motives of superpotential algebras from Brauer-Severi tree cells."""

from .motive import (L, L_HALF, ONE, ZERO, DivisionError, MotiveExpr, gl_motive, grassmann_motive,
                     lefschetz, mu, projective_motive, reduce_mu2)
from .ncpoly import NCPoly, Superpotential, cyclic_derivative, jacobi_relations, parse, trace_polynomial
from .poly import CommPoly, Var
from .cells import TreeCell, cell_dimension, enumerate_cells
from .stratify import Stratifier, StuckError, delta, delta_with_mu, motive_of
from .pipeline import DeltaTable, delta_bs, delta_m, separated_sum, separated_virtual, virtual_rep

__version__ = "0.1.0"

__all__ = [
    "L", "L_HALF", "ONE", "ZERO", "DivisionError", "MotiveExpr", "gl_motive", "grassmann_motive",
    "lefschetz", "mu", "projective_motive", "reduce_mu2",
    "NCPoly", "Superpotential", "cyclic_derivative", "jacobi_relations", "parse", "trace_polynomial",
    "CommPoly", "Var", "TreeCell", "cell_dimension", "enumerate_cells",
    "Stratifier", "StuckError", "delta", "delta_with_mu", "motive_of",
    "DeltaTable", "delta_bs", "delta_m", "separated_sum", "separated_virtual", "virtual_rep",
]
