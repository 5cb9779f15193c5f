"""
Sections of a hyperelliptic involution
======================================

A genus-2 curve with its hyperelliptic involution: six fixed points, and
H^1(G, H_1(X)) of order 16.  Every fixed point gives a section, and these
six classes satisfy a single relation.
"""

from nilsection.orbifold import BranchData, FpDiv0, cover, verify_cor12

b = BranchData(2, 0, (1, 1, 1, 1, 1, 1))
C = cover(b)
print(b, "-> genus", C.genus)
print("trace of the involution on H_1:", C.lefschetz_trace, "(so", 2 - C.lefschetz_trace, "fixed points)")
print("H^1(G, H_1(X)) =", C.h1.structure)

# difference classes s_i = [y_i] - [y_1] in coordinates
for i, s in enumerate(C.s_classes, 1):
    print(f"  s_{i} = {s.coords}")

# distinct points give distinct classes
print("pairwise distinct:", verify_cor12(b).details["injective"])

# the divisor y_1 + ... + y_6 spans the kernel of s_ab
R = C.kernel_R.generator
print("kernel of s_ab:", R.coefficients, "->", C.s_ab(R).coords)
print("y_1 - y_2 ->", C.s_ab(FpDiv0.difference(2, 6, 1, 2)).coords)
