"""Cyclic prime-order branched covers X -> X/G given by branch data.

The orbifold group has generators a_1, b_1, ..., a_h, b_h, c_1, ..., c_n and
relators c_i^p and [a_1, b_1]...[a_h, b_h] c_1...c_n.  A branch datum is the
map psi onto Z/p; its kernel is pi_1(X).  Fixed points of G on X correspond
one-to-one to the conical generators c_i, and the fixed point y_i gives the
section 1 -> c_i^k with k * e_i = 1 mod p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
import random
from itertools import product
from typing import Sequence

from .exactla import IntMatrix, nullspace_mod_p, rank_mod_p
from .fpgroup import (Homomorphism2Cyclic, Presentation, SubgroupData, commutator, concat,
                      conjugation_action_on_abelianization, gen, inverse, power,
                      reidemeister_schreier, rewrite_kernel_word)
from .gcohom import (CohClass, CohomologyGroup, GModule, WedgeMap, cup_v, h1, h2,
                     induced_map_kernel_order)
from .nilq import Class2Quotient, build_class2
from .sections import (ExtensionRep, SectionRep, difference_class, enumerate_section_classes,
                       find_level2_witness, splitting_obstruction)
from .gcohom import delta2


class InvalidBranchData(ValueError):
    pass


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


@dataclass(frozen=True)
class BranchData:
    p: int
    h: int
    monodromies: tuple[int, ...] = ()
    handle_images: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "monodromies", tuple(self.monodromies))
        hi = tuple(self.handle_images) if self.handle_images else (0,) * (2 * self.h)
        object.__setattr__(self, "handle_images", hi)

    @property
    def n(self) -> int:
        return len(self.monodromies)

    def __str__(self):
        mon = ",".join(map(str, self.monodromies))
        out = f"p={self.p} h={self.h} monodromies=({mon})"
        if any(self.handle_images):
            out += " handles=(" + ",".join(map(str, self.handle_images)) + ")"
        return out


def genus_of(b: BranchData) -> int:
    """Riemann-Hurwitz: 2 - 2g = p(2 - 2h) - n(p - 1), solved for g."""
    twice = 2 - b.p * (2 - 2 * b.h) + b.n * (b.p - 1)
    return twice // 2


def validate_and_genus(b: BranchData) -> int:
    p = b.p
    if not is_prime(p):
        raise InvalidBranchData(f"p = {p} is not prime")
    if b.h < 0:
        raise InvalidBranchData("quotient genus must be >= 0")
    if len(b.handle_images) != 2 * b.h:
        raise InvalidBranchData(f"expected {2 * b.h} handle images, got {len(b.handle_images)}")
    if any(e % p == 0 for e in b.monodromies):
        raise InvalidBranchData("every monodromy e_i must be nonzero mod p")
    if sum(b.monodromies) % p:
        raise InvalidBranchData(f"sum of monodromies is {sum(b.monodromies) % p} mod {p}, must be 0")
    if not any(x % p for x in b.handle_images + b.monodromies):
        raise InvalidBranchData("psi is not surjective onto Z/p")
    g = genus_of(b)
    if g < 1:
        raise InvalidBranchData(f"cover has genus {g} < 1")
    return g


def orbifold_presentation(b: BranchData) -> tuple[Presentation, Homomorphism2Cyclic]:
    validate_and_genus(b)
    h, n, p = b.h, b.n, b.p
    labels = tuple(x for j in range(1, h + 1) for x in (f"a{j}", f"b{j}")) + \
        tuple(f"c{i}" for i in range(1, n + 1))
    rels = [power(gen(2 * h + i), p) for i in range(n)]
    surface = ()
    for j in range(h):
        surface = concat(surface, commutator(gen(2 * j), gen(2 * j + 1)))
    for i in range(n):
        surface = concat(surface, gen(2 * h + i))
    rels.append(surface)
    pres = Presentation(2 * h + n, tuple(rels), labels)
    return pres, Homomorphism2Cyclic(p, b.handle_images + b.monodromies)


@dataclass(frozen=True)
class FixedPointSet:
    points: tuple[str, ...]

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class FpDiv0:
    p: int
    coefficients: tuple[int, ...]

    def __post_init__(self):
        c = tuple(x % self.p for x in self.coefficients)
        object.__setattr__(self, "coefficients", c)
        if sum(c) % self.p:
            raise ValueError("degree of the divisor is not 0 mod p")

    @classmethod
    def difference(cls, p: int, n: int, i: int, j: int) -> FpDiv0:
        """y_i - y_j (1-based)."""
        c = [0] * n
        c[i - 1] += 1
        c[j - 1] -= 1
        return cls(p, tuple(c))

    def __add__(self, other: FpDiv0) -> FpDiv0:
        return FpDiv0(self.p, tuple(x + y for x, y in zip(self.coefficients, other.coefficients)))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, c in enumerate(self.coefficients) if c)


@dataclass(frozen=True)
class KernelR:
    generator: FpDiv0

    def __post_init__(self):
        if not any(self.generator.coefficients):
            raise ValueError("kernel generator is zero")
        if not all(self.generator.coefficients):
            raise ValueError("kernel generator does not have full support")


class OrbifoldCover:
    """Every object attached to one branch datum, built lazily."""

    def __init__(self, b: BranchData):
        self.datum = b
        self.genus = validate_and_genus(b)
        self.presentation, self.psi = orbifold_presentation(b)
        self.p = b.p
        self.n = b.n

    @cached_property
    def sub(self) -> SubgroupData:
        return reidemeister_schreier(self.presentation, self.psi)

    @property
    def t_word(self):
        return gen(self.sub.t_index)

    @cached_property
    def t_exponents(self) -> tuple[int, ...]:
        return tuple(self.sub.t_exponent(g) for g in range(self.p))

    @cached_property
    def sigma_t(self) -> IntMatrix:
        return conjugation_action_on_abelianization(self.sub, self.t_word)

    @cached_property
    def sigma(self) -> IntMatrix:
        """Action of the generator 1 of G (conjugation by T_1) on H = pi^ab."""
        return self.sigma_t ** self.t_exponents[1]

    @cached_property
    def H(self) -> GModule:
        return GModule.lattice(self.sigma, self.p, "H1(X)")

    @property
    def h1(self) -> CohomologyGroup:
        return self.level1.h1

    @property
    def h2(self) -> CohomologyGroup:
        return self.level1.h2

    @cached_property
    def lefschetz_trace(self) -> int:
        return self.sigma.trace()

    @cached_property
    def fixed_points(self) -> FixedPointSet:
        """One fixed point per conical generator; the count is checked against Lefschetz."""
        if 2 - self.lefschetz_trace != self.n:
            raise AssertionError(f"Lefschetz count {2 - self.lefschetz_trace} != {self.n} branch points")
        return FixedPointSet(tuple(f"y{i}" for i in range(1, self.n + 1)))

    # -- extensions ---------------------------------------------------------
    @cached_property
    def tau_word(self):
        return power(self.t_word, self.p)

    @cached_property
    def level1(self) -> ExtensionRep:
        ab = self.sub.abelianization
        tau = ab.of_word(rewrite_kernel_word(self.sub, self.tau_word))
        E = ExtensionRep.level1(self.p, self.t_exponents, self.sigma_t, tau, self.H)
        if self.n:
            E.base_generator = E.element(self._fixed_point_kernel(1, 1), 1)
        return E

    @cached_property
    def class2(self) -> Class2Quotient:
        return build_class2(self.sub, self.sigma, allow_trivial_layer=True)

    @cached_property
    def level2(self) -> ExtensionRep:
        q = self.class2
        alpha = q.conjugation(self.t_word)
        tau = q.of_kernel_word(self.tau_word)
        return ExtensionRep.level2(q, self.t_exponents, alpha, tau, self.level1)

    def extension(self, level: int) -> ExtensionRep:
        if level == 1:
            return self.level1
        if level == 2:
            return self.level2
        raise ValueError("only levels 1 and 2 are modelled")

    def fixed_point_word(self, i: int):
        """c_i^k with k e_i = 1 mod p: a torsion element over the generator 1 of G."""
        if not 1 <= i <= self.n:
            raise IndexError(f"fixed point index {i} outside 1..{self.n}")
        e = self.datum.monodromies[i - 1]
        k = pow(e, -1, self.p)
        return power(gen(2 * self.datum.h + i - 1), k)

    def _fixed_point_kernel(self, i: int, level: int):
        """Kernel part k of c_i^k = k T_1 at the given level."""
        w = self.fixed_point_word(i)
        T1 = self.sub.transversal[1]
        kernel_word = rewrite_kernel_word(self.sub, concat(w, inverse(T1)))
        if level == 1:
            return self.sub.abelianization.of_word(kernel_word)
        return self.class2.evaluate(kernel_word)

    def _fixed_point_generator(self, i: int, level: int):
        return self.extension(level).element(self._fixed_point_kernel(i, level), 1)

    def fixed_point_section(self, i: int, level: int = 1) -> SectionRep:
        E = self.extension(level)
        return E.section_from_generator(self._fixed_point_generator(i, level))

    @cached_property
    def base_section(self) -> SectionRep:
        return self.fixed_point_section(1, 1)

    def s_class(self, i: int) -> CohClass:
        """s_i = [s(y_i)] - [s(y_1)]."""
        return difference_class(self.fixed_point_section(i, 1), self.base_section)

    @cached_property
    def s_classes(self) -> tuple[CohClass, ...]:
        return tuple(self.s_class(i) for i in range(1, self.n + 1))

    def s_ab(self, D: FpDiv0) -> CohClass:
        if self.n < 2:
            raise ValueError("F_p Div^0 of fewer than two points is trivial")
        if len(D.coefficients) != self.n or D.p != self.p:
            raise ValueError("divisor does not match the fixed point set")
        # D = sum c_i y_i with sum c_i = 0, so D = sum c_i (y_i - y_1)
        out = self.h1.zero
        for c, s in zip(D.coefficients, self.s_classes):
            out = out + c * s
        return out

    @cached_property
    def s_ab_matrix(self) -> IntMatrix:
        """F_p matrix of s_ab in the basis y_i - y_1 (i = 2..n) of F_p Div^0."""
        cols = [s.coords for s in self.s_classes[1:]]
        return IntMatrix.from_columns(cols, self.h1.dimension)

    @cached_property
    def kernel_R(self) -> KernelR:
        if self.n < 2:
            raise ValueError("F_p Div^0 of fewer than two points is trivial")
        null = nullspace_mod_p(self.s_ab_matrix, self.p)
        if len(null) != 1:
            raise AssertionError(f"kernel of s_ab has dimension {len(null)}, expected 1")
        v = null[0]
        coeffs = [(-sum(v)) % self.p] + [x % self.p for x in v]
        # normalize so the first coefficient is 1
        inv = pow(coeffs[0], -1, self.p) if coeffs[0] else 1
        return KernelR(FpDiv0(self.p, tuple(c * inv for c in coeffs)))

    # -- level 2 -----------------------------------------------------------------
    def delta2(self, c: CohClass) -> CohClass:
        return delta2(c, self.level2)

    def witness_liftable(self, c: CohClass, modulus: int | None = None) -> bool:
        w, _ = find_level2_witness(self.level2, c, modulus)
        return w is not None and w.verify()


@lru_cache(maxsize=64)
def cover(b: BranchData) -> OrbifoldCover:
    return OrbifoldCover(b)


def fixed_point_section(b: BranchData, i: int, level: int = 1) -> SectionRep:
    return cover(b).fixed_point_section(i, level)


def s_ab(b: BranchData, D: FpDiv0) -> CohClass:
    return cover(b).s_ab(D)


def kernel_R(b: BranchData) -> KernelR:
    return cover(b).kernel_R


# -- checks -----------------------------------------------------------------------

@dataclass
class CheckReport:
    name: str
    datum: BranchData
    passed: bool
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"{self.name} [{self.datum}]: {'pass' if self.passed else 'FAIL'}"


def verify_thm47(b: BranchData) -> CheckReport:
    """s_ab is onto H^1(G, pi^ab) with one-dimensional full-support kernel."""
    C = cover(b)
    H1 = C.h1
    rank = rank_mod_p(C.s_ab_matrix, b.p) if b.n >= 2 else 0
    details = {"h1_dimension": H1.dimension, "rank": rank, "elementary": H1.is_elementary()}
    passed = H1.is_elementary() and rank == H1.dimension and H1.dimension == b.n - 2
    try:
        R = C.kernel_R
        details["kernel_R"] = R.generator.coefficients
    except (AssertionError, ValueError) as e:
        details["kernel_R_error"] = str(e)
        passed = False
    if passed:
        passed = C.s_ab(R.generator).is_zero
    return CheckReport("thm47", b, passed, details)


def verify_cor12(b: BranchData) -> CheckReport:
    """Fixed-point sections are pairwise non-conjugate iff n != 2."""
    C = cover(b)
    s = C.s_classes
    n = b.n
    table = {(i + 1, j + 1): s[i] != s[j] for i in range(n) for j in range(i + 1, n)}
    injective = all(table.values())
    return CheckReport("cor12", b, injective == (n != 2),
                       {"injective": injective, "distinct": table})


def image_of_s1(C: OrbifoldCover) -> set[tuple[int, ...]]:
    return {s.coords for s in C.s_classes}


def classify_subsets(C: OrbifoldCover) -> dict[tuple[int, ...], frozenset]:
    """For p = 2: each class written as s_I = sum_{i in I} s_i, with the smallest such I (ties
    broken lexicographically); every class arises since s_ab is onto."""
    from itertools import combinations
    out: dict[tuple[int, ...], frozenset] = {}
    n = C.n
    for size in range(n + 1):
        for I in combinations(range(1, n + 1), size):
            c = C.h1.zero
            for i in I:
                c = c + C.s_classes[i - 1]
            out.setdefault(c.coords, frozenset(I))
    return out


def expected_liftable(C: OrbifoldCover) -> set[tuple[int, ...]]:
    """Classes s_I with I empty, a singleton, or everything (as differences from y_1)."""
    n = C.n
    subsets = [()] + [(i,) for i in range(1, n + 1)] + [tuple(range(1, n + 1))]
    out = set()
    for I in subsets:
        c = C.h1.zero
        for i in I:
            c = c + C.s_classes[i - 1]
        out.add(c.coords)
    return out


def verify_thm13(b: BranchData, modulus: int | None = None) -> CheckReport:
    """For p = 2: the classes lifting to level 2 are exactly the image of the fixed points."""
    if b.p != 2:
        raise ValueError("the level-2 criterion is checked for p = 2")
    C = cover(b)
    classes = list(C.h1.elements())
    by_delta = {c.coords for c in classes if C.delta2(c).is_zero}
    by_witness = {c.coords for c in classes if C.witness_liftable(c, modulus)}
    image = image_of_s1(C)
    # the base class y_1 has s_1 = 0; the full sum is sum of all s_i relative to y_1
    expected = expected_liftable(C)
    details = {
        "classes": len(classes),
        "liftable_delta": sorted(by_delta),
        "liftable_witness": sorted(by_witness),
        "image": sorted(image),
    }
    passed = by_delta == by_witness == image == expected
    return CheckReport("thm13", b, passed, details)


def verify_prop44(b: BranchData) -> CheckReport:
    """A free action (n = 0) admits no level-1 section."""
    C = cover(b)
    obs = splitting_obstruction(C.level1)
    return CheckReport("prop44", b, (not obs.is_zero) == (b.n == 0),
                       {"obstruction": obs.coords, "h2": str(C.h2.structure)})


def section_class_count(C: OrbifoldCover) -> int:
    if C.n == 0:
        return 0
    return len(enumerate_section_classes(C.level1, C.base_section))


def omega_kernel_order(C: OrbifoldCover) -> int:
    """Order of ker(H^2(G, wedge^2 H) -> H^2(G, wedge^2 H / <omega>))."""
    q = C.class2
    wedge_module = GModule.lattice(q.sigma_wedge, C.p, "wedge^2 H")
    layer = GModule.lattice(q.sigma_layer, C.p, "layer")
    return induced_map_kernel_order(h2(wedge_module), h2(layer), q.projection_matrix)


def wedge_map_injective(C: OrbifoldCover) -> bool:
    return WedgeMap(C.H).is_injective()


def verify_quadraticity(b: BranchData, exhaustive_limit: int = 256, samples: int = 500,
                        seed: int = 0) -> CheckReport:
    """delta2(y + z) = delta2(y) + delta2(z) + y v z, over all pairs or a seeded sample.

    delta2 is cached per class.  The cup product is bilinear already on
    representatives, and class representatives are linear in coordinates, so
    y v z is assembled from its values on pairs of basis classes.
    """
    C = cover(b)
    H1 = C.h1
    target = C.level2.layer_h2
    bracket = C.class2.bracket
    basis = H1.basis
    mod_in, mod_out = H1.moduli, target.moduli
    table = [[cup_v(u, v, bracket, target).coords for v in basis] for u in basis]
    cache: dict[tuple[int, ...], tuple[int, ...]] = {}

    def d2(c):
        if c not in cache:
            cache[c] = C.delta2(H1.from_coords(c)).coords
        return cache[c]

    def cup(y, z):
        out = [0] * len(mod_out)
        for i, yi in enumerate(y):
            for j, zj in enumerate(z):
                if yi and zj:
                    for k, v in enumerate(table[i][j]):
                        out[k] += yi * zj * v
        return out

    elements = list(product(*(range(m) for m in mod_in)))
    if len(elements) <= exhaustive_limit:
        pairs = [(y, z) for y in elements for z in elements]
        mode = "exhaustive"
    else:
        rng = random.Random(seed)
        pairs = [(rng.choice(elements), rng.choice(elements)) for _ in range(samples)]
        mode = "sampled"
    failures = 0
    for y, z in pairs:
        s = tuple((a + c) % m for a, c, m in zip(y, z, mod_in))
        lhs = d2(s)
        rhs = [a + c + e for a, c, e in zip(d2(y), d2(z), cup(y, z))]
        if any((l - r) % m for l, r, m in zip(lhs, rhs, mod_out)):
            failures += 1
    return CheckReport("quadraticity", b, failures == 0,
                       {"pairs": len(pairs), "mode": mode, "failures": failures})
