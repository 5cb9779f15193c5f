"""
A free action has no sections
=============================

When G acts without fixed points the extension of G by pi_1(X) does not
split even after abelianizing.  The obstruction is a nonzero class in
H^2(G, H_1(X)), and an exhaustive search in a finite model finds nothing.
"""

from nilsection.orbifold import BranchData, cover, verify_prop44
from nilsection.sections import NoSplitting, count_sections_brute_force, find_section

for p in (2, 3):
    b = BranchData(p, 2, (), (1, 0, 0, 0))
    C = cover(b)
    r = verify_prop44(b)
    print(b, "-> genus", C.genus, ", H^2 =", r.details["h2"], ", obstruction", r.details["obstruction"])
    try:
        find_section(C.level1)
    except NoSplitting as e:
        print("   ", e)
    print("    sections mod", p, ":", count_sections_brute_force(C.level1, p)[0])
