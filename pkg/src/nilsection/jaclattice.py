"""The period lattice of a curve with its G-action, and the component group of A^G.

For A = V / Lambda with G acting through Lambda, the group of components of
the fixed locus is H^1(G, Lambda).  For the Jacobian of a cover this must
match the count of level-1 section classes of the curve, p^(n-2).
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactla import AbGroupStructure, IntMatrix
from .gcohom import GModule, h1
from .orbifold import BranchData, CheckReport, cover, section_class_count


@dataclass(frozen=True)
class GLattice:
    sigma: IntMatrix
    p: int

    def __post_init__(self):
        if self.sigma.rows != self.sigma.cols:
            raise ValueError("sigma must be square")
        if not (self.sigma ** self.p).is_identity():
            raise ValueError(f"sigma^{self.p} is not the identity")
        if abs(self.sigma.det()) != 1:
            raise ValueError("sigma is not invertible over Z")

    @property
    def rank(self) -> int:
        return self.sigma.rows

    def module(self) -> GModule:
        return GModule.lattice(self.sigma, self.p, "Lambda")

    @classmethod
    def of_curve(cls, b: BranchData) -> GLattice:
        C = cover(b)
        return cls(C.sigma, b.p)


def component_group(L: GLattice) -> AbGroupStructure:
    return h1(L.module()).structure


def crosscheck_with_curve(b: BranchData) -> CheckReport:
    """|pi_0(A^G)| = p^(n-2) = number of level-1 section classes of the curve."""
    C = cover(b)
    G = component_group(GLattice.of_curve(b))
    expected = b.p ** (b.n - 2) if b.n >= 2 else None
    classes = section_class_count(C)
    killed_by_p = all(d == b.p for d in G.torsion) and G.free_rank == 0
    passed = G.order == expected == classes and killed_by_p
    return CheckReport("jac_crosscheck", b, passed,
                       {"component_group": str(G), "order": G.order, "section_classes": classes})
