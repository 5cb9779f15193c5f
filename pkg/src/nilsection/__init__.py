"""Exact computations with sections of prime-order cyclic covers of curves.

Modules, bottom-up: exactla (integer linear algebra), fpgroup (words and
Reidemeister-Schreier), nilq (class-2 quotients of surface groups), gcohom
(cohomology of Z/p), sections (extensions and their sections), orbifold
(branch data and the checks built on them), jaclattice (period lattices)
and cli.
"""

from .orbifold import BranchData, InvalidBranchData, OrbifoldCover, cover, validate_and_genus

__all__ = ["BranchData", "InvalidBranchData", "OrbifoldCover", "cover", "validate_and_genus"]
