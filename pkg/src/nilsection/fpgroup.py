"""Words, finitely presented groups and the index-p kernel of a map onto Z/p.

A word is a tuple of nonzero integers: ``k > 0`` is generator ``k - 1`` and
``-k`` its inverse.  The kernel of a surjection ``theta: F -> Z/p`` is
presented by Reidemeister-Schreier with the transversal made of powers of a
single designated generator ``t`` (the first one with nonzero image).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .exactla import IntMatrix, smith_normal_form

Word = tuple[int, ...]


def letter(i: int, sign: int = 1) -> int:
    return (i + 1) * sign


def gen(i: int) -> Word:
    return (i + 1,)


def free_reduce(w: Sequence[int]) -> Word:
    out: list[int] = []
    for x in w:
        if x == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def concat(*ws: Sequence[int]) -> Word:
    return free_reduce([x for w in ws for x in w])


def power(w: Sequence[int], k: int) -> Word:
    if k < 0:
        return power(inverse(w), -k)
    return free_reduce(tuple(w) * k)


def commutator(u: Sequence[int], v: Sequence[int]) -> Word:
    """[u, v] = u v u^-1 v^-1."""
    return concat(u, v, inverse(u), inverse(v))


def abelianize(w: Sequence[int], n: int) -> tuple[int, ...]:
    v = [0] * n
    for x in w:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(v)


@dataclass(frozen=True)
class Presentation:
    generator_count: int
    relators: tuple[Word, ...]
    generator_labels: tuple[str, ...] = ()

    def __post_init__(self):
        for r in self.relators:
            if any(abs(x) > self.generator_count or x == 0 for x in r):
                raise ValueError(f"relator {r} uses letters outside {self.generator_count} generators")
        if self.generator_labels and len(self.generator_labels) != self.generator_count:
            raise ValueError("one label per generator")

    def label(self, i: int) -> str:
        return self.generator_labels[i] if self.generator_labels else f"g{i}"

    def format(self, w: Sequence[int]) -> str:
        if not w:
            return "1"
        return " ".join(self.label(abs(x) - 1) + ("" if x > 0 else "^-1") for x in w)


@dataclass(frozen=True)
class Homomorphism2Cyclic:
    target_order: int
    images: tuple[int, ...]

    def __post_init__(self):
        p = self.target_order
        object.__setattr__(self, "images", tuple(x % p for x in self.images))
        # p is prime, so any nonzero image generates
        if not any(self.images):
            raise ValueError("homomorphism to Z/p is not surjective")

    def __call__(self, w: Sequence[int]) -> int:
        s = 0
        for x in w:
            s += self.images[x - 1] if x > 0 else -self.images[-x - 1]
        return s % self.target_order


@dataclass(frozen=True)
class SubgroupData:
    parent: Presentation
    theta: Homomorphism2Cyclic
    t_index: int
    transversal: tuple[Word, ...]
    schreier_generators: tuple[Word, ...]
    subgroup_relators: tuple[Word, ...]
    # (coset, parent generator) -> Schreier letter index, or None if freely trivial
    rewrite_table: dict = field(compare=False, repr=False)

    @property
    def p(self) -> int:
        return self.theta.target_order

    @property
    def rank(self) -> int:
        return len(self.schreier_generators)

    def t_exponent(self, g: int) -> int:
        """The j in [0, p) with theta(t^j) = g."""
        p = self.p
        return (g * pow(self.theta.images[self.t_index], -1, p)) % p

    def expand(self, w: Sequence[int]) -> Word:
        """Schreier-letter word back to parent letters."""
        return concat(*(self.schreier_generators[x - 1] if x > 0
                        else inverse(self.schreier_generators[-x - 1]) for x in w))

    @cached_property
    def abelianization(self) -> Abelianization:
        return Abelianization.of(self)


def reidemeister_schreier(pres: Presentation, theta: Homomorphism2Cyclic) -> SubgroupData:
    if len(theta.images) != pres.generator_count:
        raise ValueError("theta needs one image per generator")
    p = theta.target_order
    t = next(i for i, x in enumerate(theta.images) if x)
    u_inv = pow(theta.images[t], -1, p)
    transversal = tuple(power(gen(t), (g * u_inv) % p) for g in range(p))

    table: dict[tuple[int, int], int | None] = {}
    gens: list[Word] = []
    for g in range(p):
        for i in range(pres.generator_count):
            target = (g + theta.images[i]) % p
            w = concat(transversal[g], gen(i), inverse(transversal[target]))
            if not w:
                table[g, i] = None
            else:
                table[g, i] = len(gens)
                gens.append(w)

    sub = SubgroupData(pres, theta, t, transversal, tuple(gens), (), table)
    rels = tuple(_rewrite_from(sub, r, g) for r in pres.relators for g in range(p))
    return SubgroupData(pres, theta, t, transversal, tuple(gens), rels, table)


def _rewrite_from(sub: SubgroupData, w: Sequence[int], coset: int) -> Word:
    p = sub.p
    images = sub.theta.images
    table = sub.rewrite_table
    out = []
    g = coset
    for x in w:
        if x > 0:
            i = x - 1
            k = table[g, i]
            if k is not None:
                out.append(k + 1)
            g = (g + images[i]) % p
        else:
            i = -x - 1
            g = (g - images[i]) % p
            k = table[g, i]
            if k is not None:
                out.append(-(k + 1))
    if g != coset:
        raise ValueError("word is not in the kernel")
    return free_reduce(out)


def rewrite_kernel_word(sub: SubgroupData, w: Sequence[int]) -> Word:
    if sub.theta(w) != 0:
        raise ValueError(f"word {w} is not in the kernel (theta = {sub.theta(w)})")
    return _rewrite_from(sub, w, 0)


@dataclass(frozen=True)
class Abelianization:
    """H = Z^m / span(abelianized relators), with basis read off the Smith form.

    ``project`` sends an abelianized Schreier word to coordinates in H and
    ``lifts`` holds, for each basis vector of H, an integer combination of
    Schreier generators mapping to it.
    """
    m: int
    rank: int
    U: IntMatrix
    relation_rank: int
    relations: IntMatrix
    lifts: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, sub: SubgroupData) -> Abelianization:
        m = sub.rank
        A = IntMatrix.from_columns([_abel_schreier(r, m) for r in sub.subgroup_relators], m)
        snf = smith_normal_form(A)
        k = snf.rank
        torsion = [d for d in snf.diagonal if d > 1]
        if torsion:
            raise ValueError(f"kernel abelianization has torsion {torsion}; not a surface group")
        lifts = tuple(snf.U_inv.col(k + b) for b in range(m - k))
        return cls(m, m - k, snf.U, k, A, lifts)

    def project(self, v: Sequence[int]) -> tuple[int, ...]:
        return self.U.apply(v)[self.relation_rank:]

    def of_word(self, w: Sequence[int]) -> tuple[int, ...]:
        return self.project(_abel_schreier(w, self.m))


def _abel_schreier(w: Sequence[int], m: int) -> tuple[int, ...]:
    return abelianize(w, m)


def conjugation_action_on_abelianization(sub: SubgroupData, lift: Sequence[int]) -> IntMatrix:
    """Matrix of h -> lift h lift^-1 on the abelianization of the kernel."""
    if sub.theta(lift) == 0:
        raise ValueError("lift lies in the kernel")
    ab = sub.abelianization
    lift = tuple(lift)
    lift_inv = inverse(lift)
    images = [ab.of_word(rewrite_kernel_word(sub, concat(lift, s, lift_inv)))
              for s in sub.schreier_generators]
    cols = []
    for v in ab.lifts:
        acc = [0] * ab.rank
        for coeff, img in zip(v, images):
            if coeff:
                for b in range(ab.rank):
                    acc[b] += coeff * img[b]
        cols.append(tuple(acc))
    return IntMatrix.from_columns(cols, ab.rank)
