"""
Which sections survive to the class-2 quotient
==============================================

For the involution of a genus-2 curve we compute delta_2 on all 16 level-1
classes and compare it with an explicit search for level-2 sections in the
mod 8 model of the central layer.
"""

from itertools import combinations

from nilsection.gcohom import cup_v
from nilsection.orbifold import BranchData, classify_subsets, cover

b = BranchData(2, 0, (1,) * 6)
C = cover(b)
q = C.class2
print("class-2 quotient: H of rank", q.rank, "and layer of rank", q.layer_rank)

names = classify_subsets(C)
for c in C.h1.elements():
    d = C.delta2(c)
    found = C.witness_liftable(c)
    subset = "{" + ",".join(map(str, sorted(names[c.coords]))) + "}"
    print(f"{str(c.coords):14} s_I with I = {subset:14} delta2 = {str(d.coords):10} witness: {found}")

# the failure of additivity is the cup product
y, z = C.s_classes[1], C.s_classes[2]
print("s_2 v s_3 =", cup_v(y, z, q.bracket, C.level2.layer_h2).coords)
print("delta2(s_2 + s_3) =", C.delta2(y + z).coords)
