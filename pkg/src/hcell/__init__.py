"""Exact computations with bimodules over finite-dimensional algebras carrying a group action.

Modules: ``field`` (F_p and Q linear algebra), ``algebra`` (bound quiver
algebras, groups, actions), ``bimodule`` (modules, tensor products, hom
spaces, decompositions), ``hopf`` (Hopf structures on covering quivers and the
functor Gamma), ``skewcat`` (the skew category and Theta), ``cells`` (symbolic
cell calculus), ``cohomology`` (subgroups, Smith normal form, Schur
multipliers), ``cli`` and ``specfile`` (JSON input and reports).
"""

from .algebra import Algebra, AlgebraAction, GroupData, build_algebra, cyclic_group, product_group, symmetric_group
from .field import Field
from .report import ValidationReport

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "AlgebraAction",
    "Field",
    "GroupData",
    "ValidationReport",
    "build_algebra",
    "cyclic_group",
    "product_group",
    "symmetric_group",
]
