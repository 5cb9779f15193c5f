"""Extensions 1 -> K -> E -> Z/p -> 1 with K abelian (level 1) or class 2 (level 2).

The carrier of E is pairs (k, g): k in the kernel and g in Z/p standing for
the coset rep T_g = t^j(g) of a fixed transversal.  With alpha = conjugation
by t and tau = t^p (a kernel element),

    (k, g)(k', h) = (k * alpha^j(g)(k') * tau^carry, g + h),

where carry = 1 when j(g) + j(h) >= p.  Sections are stored by their full
table of images, and conjugacy classes at level 1 are handled through the
difference class in H^1(G, K).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Any, Callable, Sequence

from .exactla import IntMatrix, solve_integer, solve_mod
from .gcohom import CohClass, CohomologyGroup, GModule, cocycle_table_to_periodic, delta2, h1, h2
from .nilq import Class2Automorphism, Class2Element, Class2Quotient

Vec = tuple[int, ...]


class NoSplitting(ValueError):
    def __init__(self, obstruction: CohClass):
        super().__init__(f"extension does not split; obstruction class {obstruction.coords}")
        self.obstruction = obstruction


class IncompatibleExtensions(ValueError):
    pass


@dataclass(frozen=True)
class ExtElement:
    k: Any
    g: int


class ExtensionRep:
    """Concrete extension carrier of one level.

    ``actions[j]`` is conjugation by t^j on the kernel, ``tau`` the kernel
    element t^p and ``t_exponents[g]`` the j with T_g = t^j.
    """

    def __init__(self, level: int, p: int, t_exponents: Sequence[int], actions: Sequence[Callable],
                 tau, mul: Callable, inv: Callable, identity, module: GModule):
        if sorted(t_exponents) != list(range(p)) or t_exponents[0] != 0:
            raise ValueError("t_exponents must be a bijection Z/p -> [0, p) with 0 -> 0")
        self.level = level
        self.p = p
        self.t_exponents = tuple(t_exponents)
        self.actions = tuple(actions)
        self.tau = tau
        self._mul, self._inv = mul, inv
        self.kernel_identity = identity
        # level 1: the kernel itself; level 2: the central layer
        self.module = module
        self.base_generator: ExtElement | None = None
        self.lower: ExtensionRep | None = None
        self.quotient: Class2Quotient | None = None

    @classmethod
    def level1(cls, p: int, t_exponents: Sequence[int], sigma_t: IntMatrix, tau: Sequence[int],
               module: GModule) -> ExtensionRep:
        r = sigma_t.rows
        mats = [IntMatrix.identity(r)]
        for _ in range(p - 1):
            mats.append(sigma_t @ mats[-1])
        actions = [m.apply for m in mats]
        return cls(1, p, t_exponents, actions, tuple(tau),
                   lambda x, y: tuple(a + b for a, b in zip(x, y)),
                   lambda x: tuple(-a for a in x), (0,) * r, module)

    @classmethod
    def level2(cls, quotient: Class2Quotient, t_exponents: Sequence[int], alpha_t: Class2Automorphism,
               tau: Class2Element, lower: ExtensionRep) -> ExtensionRep:
        p = lower.p
        autos = [None, alpha_t]
        for _ in range(p - 2):
            autos.append(autos[-1].then(alpha_t))
        actions = [lambda x: x] + [a.__call__ for a in autos[1:]]
        sigma_layer = alpha_t.sigma_layer ** t_exponents[1]
        layer = GModule(p, sigma_layer, None, "layer")
        ext = cls(2, p, t_exponents, actions, tau, quotient.multiply, quotient.inverse,
                  quotient.identity, layer)
        ext.lower = lower
        ext.quotient = quotient
        return ext

    # -- group law -------------------------------------------------------
    def element(self, k, g: int) -> ExtElement:
        return ExtElement(k, g % self.p)

    @property
    def identity(self) -> ExtElement:
        return ExtElement(self.kernel_identity, 0)

    def act(self, g: int, k):
        return self.actions[self.t_exponents[g % self.p]](k)

    def cocycle(self, g: int, h: int):
        j = self.t_exponents
        return self.tau if j[g % self.p] + j[h % self.p] >= self.p else self.kernel_identity

    def multiply(self, x: ExtElement, y: ExtElement) -> ExtElement:
        k = self._mul(self._mul(x.k, self.act(x.g, y.k)), self.cocycle(x.g, y.g))
        return ExtElement(k, (x.g + y.g) % self.p)

    def inverse(self, x: ExtElement) -> ExtElement:
        # (k, g)^-1 = (c^-1 * act(-g, k^-1), -g) with c = cocycle(-g, g)
        g = (-x.g) % self.p
        k = self._mul(self._inv(self.cocycle(g, x.g)), self.act(g, self._inv(x.k)))
        return ExtElement(k, g)

    def power(self, x: ExtElement, n: int) -> ExtElement:
        if n < 0:
            return self.power(self.inverse(x), -n)
        if n == 0:
            return self.identity
        out = x
        for _ in range(n - 1):
            out = self.multiply(out, x)
        return out

    def cocycle_table(self) -> dict[tuple[int, int], Any]:
        return {(g, h): self.cocycle(g, h) for g in range(self.p) for h in range(self.p)}

    # -- cohomology --------------------------------------------------------
    @cached_property
    def h1(self) -> CohomologyGroup:
        return h1(self.module)

    @cached_property
    def h2(self) -> CohomologyGroup:
        return h2(self.module)

    @property
    def layer_h2(self) -> CohomologyGroup:
        if self.level != 2:
            raise ValueError("layer cohomology only for level-2 extensions")
        return self.h2

    def section_from_generator(self, x: ExtElement) -> SectionRep:
        if x.g != 1:
            raise ValueError("a section is determined by its value on the generator 1")
        images = [self.identity]
        for _ in range(self.p - 1):
            images.append(self.multiply(images[-1], x))
        return SectionRep(self, tuple(images))

    def generator_power_kernel(self, x: ExtElement):
        """Kernel part of x^p for x over the generator 1."""
        y = self.power(x, self.p)
        assert y.g == 0
        return y.k

    # -- level-2 specifics ---------------------------------------------------
    def level1_generator(self, s_class: CohClass) -> Vec:
        """h-part a_0 + c of the level-1 section in class ``s_class`` (relative to the base)."""
        lower = self._lower_checked(s_class)
        a0 = lower.base_generator.k
        return tuple(x + y for x, y in zip(a0, s_class.representative))

    def _lower_checked(self, s_class: CohClass) -> ExtensionRep:
        if self.level != 2 or self.lower is None:
            raise IncompatibleExtensions("needs a level-2 extension over a level-1 one")
        lower = self.lower
        if lower.base_generator is None:
            raise IncompatibleExtensions("level-1 extension has no base section")
        if s_class.module is not lower.module or s_class.degree != 1:
            raise IncompatibleExtensions("class does not live in H^1 of the level-1 kernel")
        return lower

    def pullback_cocycle(self, s_class: CohClass, second: int | None = None) -> dict[tuple[int, int], Vec]:
        """Layer-valued 2-cocycle F(g, h) = s(g) s(h) s(g + h)^-1 of the naive lift s(g) = z^g.

        With ``second`` given only the entries F(g, second) are tabulated.
        """
        q = self.quotient
        z = ExtElement(q.element(self.level1_generator(s_class)), 1)
        s = self.section_from_generator(z).images
        table = {}
        for g in range(self.p):
            for h in (range(self.p) if second is None else (second,)):
                v = self.multiply(self.multiply(s[g], s[h]), self.inverse(s[(g + h) % self.p]))
                if v.g or any(v.k.h):
                    raise AssertionError("pulled-back cocycle is not central")
                table[g, h] = v.k.l
        return table


@dataclass(frozen=True, eq=False)
class SectionRep:
    extension: ExtensionRep = field(repr=False)
    images: tuple[ExtElement, ...]

    @property
    def level(self) -> int:
        return self.extension.level

    def __call__(self, g: int) -> ExtElement:
        return self.images[g % self.extension.p]

    def is_multiplicative(self, modulus: int | None = None) -> bool:
        E = self.extension
        for g in range(E.p):
            if self.images[g].g != g:
                return False
            for h in range(E.p):
                lhs = E.multiply(self.images[g], self.images[h])
                if not _kernel_equal(lhs.k, self.images[(g + h) % E.p].k, modulus) or \
                        lhs.g != (g + h) % E.p:
                    return False
        return True

    def conjugate(self, k) -> SectionRep:
        E = self.extension
        n = E.element(k, 0)
        ni = E.inverse(n)
        return SectionRep(E, tuple(E.multiply(E.multiply(n, x), ni) for x in self.images))


def _kernel_equal(a, b, modulus):
    if isinstance(a, Class2Element):
        if a.h != b.h:
            return False
        a, b = a.l, b.l
    if modulus:
        return all((x - y) % modulus == 0 for x, y in zip(a, b))
    return tuple(a) == tuple(b)


# -- level 1 -----------------------------------------------------------------

def splitting_obstruction(E: ExtensionRep) -> CohClass:
    """Class in H^2(G, K) of the extension; zero iff a section exists."""
    if E.level != 1:
        raise ValueError("splitting obstruction computed at level 1")
    c0 = E.generator_power_kernel(E.element(E.kernel_identity, 1))
    return E.h2.cls(c0)


def difference_class(r: SectionRep, s: SectionRep) -> CohClass:
    """[r] - [s] in H^1(G, K): the 1-cocycle g -> r(g) s(g)^-1, recorded by its value at 1."""
    if r.extension is not s.extension:
        raise ValueError("sections of different extensions")
    if r.level != 1:
        raise ValueError("difference classes are taken at level 1")
    E = r.extension
    v = E.multiply(r(1), E.inverse(s(1)))
    return E.h1.cls(v.k)


def find_section(E: ExtensionRep) -> SectionRep:
    if E.level != 1:
        raise ValueError("level-1 only")
    c0 = E.generator_power_kernel(E.element(E.kernel_identity, 1))
    a = solve_integer(E.module.norm, tuple(-x for x in c0))
    if a is None:
        raise NoSplitting(E.h2.cls(c0))
    return E.section_from_generator(E.element(a, 1))


def section_in_class(E: ExtensionRep, c: CohClass, base: SectionRep) -> SectionRep:
    """The section r with r(1) = (c + a_0, 1), so that [r] - [base] = c."""
    a0 = base(1).k
    return E.section_from_generator(E.element(tuple(x + y for x, y in zip(a0, c.representative)), 1))


def enumerate_section_classes(E: ExtensionRep, base: SectionRep | None = None) -> list[tuple[CohClass, SectionRep]]:
    """All conjugacy classes of sections, each as (difference class to base, representative)."""
    if base is None:
        base = find_section(E)
    return [(c, section_in_class(E, c, base)) for c in E.h1.elements()]


def count_sections_brute_force(E: ExtensionRep, modulus: int) -> tuple[int, int]:
    """(number of sections, number of conjugacy classes) of E with kernel reduced mod ``modulus``.

    Enumerates every candidate s(1) = (a, 1) with a in (Z/modulus)^r.
    """
    if E.level != 1:
        raise ValueError("level-1 only")
    r = E.module.rank
    one = E.element(E.kernel_identity, 1)
    c0 = E.generator_power_kernel(one)
    N = E.module.norm
    count = 0
    for a in product(range(modulus), repeat=r):
        v = N.apply(a)
        if all((x + y) % modulus == 0 for x, y in zip(v, c0)):
            count += 1
    # conjugation moves a by (1 - sigma) m
    D = E.module.sigma - IntMatrix.identity(r)
    orbit = {tuple(x % modulus for x in D.apply(m)) for m in product(range(modulus), repeat=r)}
    if count % len(orbit):
        raise AssertionError("conjugation orbits do not have equal size")
    return count, count // len(orbit)


# -- level 2 -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Level2Witness:
    section: SectionRep
    modulus: int

    def verify(self) -> bool:
        return self.section.is_multiplicative(self.modulus)


@dataclass(frozen=True, eq=False)
class LiftResult:
    liftable: bool
    witness: Level2Witness | None
    obstruction: CohClass | None
    method: str


def _layer_defect(E2: ExtensionRep, a: Vec, l: Sequence[int]) -> Vec:
    q = E2.quotient
    x = E2.element(q.element(a, l), 1)
    y = E2.power(x, E2.p)
    if y.g or any(y.k.h):
        raise AssertionError("level-1 part of the candidate is not a section")
    return y.k.l


def find_level2_witness(E2: ExtensionRep, s_class: CohClass, modulus: int | None = None,
                        exhaustive_limit: int = 1 << 15) -> tuple[Level2Witness | None, str]:
    """Search for l with ((a, l), 1)^p = 1 in the layer reduced mod ``modulus`` (default p^3).

    Exhaustive when there are at most ``exhaustive_limit`` candidates.  Otherwise the map
    l -> defect(l) is probed on unit vectors, checked to be affine on extra points, and
    the resulting linear congruence is solved; any solution is verified directly.
    """
    p = E2.p
    m = modulus or p ** 3
    a = E2.level1_generator(s_class)
    D = E2.quotient.layer_rank

    def witness(l):
        x = E2.element(E2.quotient.element(a, l), 1)
        return Level2Witness(E2.section_from_generator(x), m)

    if m ** D <= exhaustive_limit:
        for l in product(range(m), repeat=D):
            if all(v % m == 0 for v in _layer_defect(E2, a, l)):
                return witness(l), "exhaustive"
        return None, "exhaustive"

    base = _layer_defect(E2, a, (0,) * D)
    cols = []
    for i in range(D):
        e = tuple(int(i == j) for j in range(D))
        cols.append(tuple(x - y for x, y in zip(_layer_defect(E2, a, e), base)))
    A = IntMatrix.from_columns(cols, D)
    for probe in (tuple(range(1, D + 1)), tuple((-1) ** i * (i + 2) for i in range(D))):
        got = _layer_defect(E2, a, probe)
        want = tuple(x + y for x, y in zip(base, A.apply(probe)))
        if got != want:
            raise AssertionError("layer defect is not affine in the layer coordinate")
    l = solve_mod(A, tuple(-x for x in base), m)
    if l is None:
        return None, "affine"
    w = witness(l)
    if not all(v % m == 0 for v in _layer_defect(E2, a, l)):
        raise AssertionError("affine solution failed direct verification")
    return w, "affine"


def lifts_to_level2(s_class: CohClass, E2: ExtensionRep, modulus: int | None = None) -> LiftResult:
    """Whether the level-1 class lifts to a level-2 section, by explicit witness search."""
    w, method = find_level2_witness(E2, s_class, modulus)
    if w is not None:
        return LiftResult(True, w, None, method)
    obs = delta2(s_class, E2)
    return LiftResult(False, None, obs, method)


__all__ = [
    "ExtElement", "ExtensionRep", "SectionRep", "NoSplitting", "IncompatibleExtensions",
    "splitting_obstruction", "difference_class", "find_section", "section_in_class",
    "enumerate_section_classes", "count_sections_brute_force", "Level2Witness", "LiftResult",
    "find_level2_witness", "lifts_to_level2", "delta2", "cocycle_table_to_periodic",
]
