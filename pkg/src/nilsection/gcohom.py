"""Cohomology of G = Z/p with coefficients in finitely generated G-modules.

Modules are Z^r / R with R a G-stable relation lattice (empty for lattices)
and ``sigma`` the action of the generator 1 of G.  The periodic resolution
gives

    H^1 = ker(N) / im(sigma - 1),    H^2 = ker(sigma - 1) / im(N),

with N = 1 + sigma + ... + sigma^(p-1).  The inhomogeneous bar complex is
kept alongside as a slow, independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Callable, Iterator, Mapping, Sequence

from .exactla import (AbGroupStructure, IntMatrix, Subquotient, cokernel, homology,
                      rank_mod_p, solve_integer)
from .nilq import wedge, wedge_pairs, wedge_square_matrix

Vec = tuple[int, ...]
Pairing = Callable[[Sequence[int], Sequence[int]], Vec]


class OracleTooLarge(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class GModule:
    p: int
    sigma: IntMatrix
    relations: IntMatrix | None = None
    name: str = ""

    def __post_init__(self):
        r = self.sigma.rows
        if self.sigma.cols != r:
            raise ValueError("sigma must be square")
        rel = self.relations if self.relations is not None else IntMatrix.zeros(r, 0)
        object.__setattr__(self, "relations", rel)
        if rel.rows != r:
            raise ValueError("relations live in the wrong ambient rank")
        if not self._in_relations(self.sigma ** self.p - IntMatrix.identity(r)):
            raise ValueError(f"sigma^{self.p} is not the identity on the module")
        if not self._in_relations(self.sigma @ rel):
            raise ValueError("relation lattice is not G-stable")

    def _in_relations(self, M: IntMatrix) -> bool:
        rel = self.relations
        for col in M.columns():
            if not any(col):
                continue
            if rel.cols == 0 or solve_integer(rel, col) is None:
                return False
        return True

    @classmethod
    def lattice(cls, sigma: IntMatrix, p: int, name: str = "") -> GModule:
        return cls(p, sigma, None, name)

    @classmethod
    def trivial(cls, p: int, rank: int = 1, modulus: int = 0) -> GModule:
        rel = IntMatrix.identity(rank).scale(modulus) if modulus else None
        return cls(p, IntMatrix.identity(rank), rel, f"trivial Z/{modulus}" if modulus else "trivial Z")

    @classmethod
    def regular(cls, p: int) -> GModule:
        perm = IntMatrix.from_rows([[int(i == (j + 1) % p) for j in range(p)] for i in range(p)])
        return cls(p, perm, None, "Z[G]")

    @property
    def rank(self) -> int:
        return self.sigma.rows

    @property
    def is_lattice(self) -> bool:
        return self.relations.cols == 0

    @cached_property
    def structure(self) -> AbGroupStructure:
        return cokernel(self.relations)

    @cached_property
    def norm(self) -> IntMatrix:
        r = self.rank
        out, s = IntMatrix.zeros(r, r), IntMatrix.identity(r)
        for _ in range(self.p):
            out = out + s
            s = self.sigma @ s
        return out

    @cached_property
    def _powers(self) -> tuple[IntMatrix, ...]:
        out = [IntMatrix.identity(self.rank)]
        for _ in range(self.p - 1):
            out.append(self.sigma @ out[-1])
        return tuple(out)

    def act(self, g: int, v: Sequence[int]) -> Vec:
        return self._powers[g % self.p].apply(v)

    def reduce(self, m: int) -> GModule:
        """M / mM."""
        rel = IntMatrix.hstack(self.relations, IntMatrix.identity(self.rank).scale(m))
        return GModule(self.p, self.sigma, rel, f"{self.name}/{m}")

    def exterior_square(self) -> GModule:
        if not self.is_lattice:
            raise ValueError("exterior square only for lattices")
        return GModule(self.p, wedge_square_matrix(self.sigma), None, f"wedge^2 {self.name}")

    def equal(self, u: Sequence[int], v: Sequence[int]) -> bool:
        d = tuple(x - y for x, y in zip(u, v))
        return not any(d) or (self.relations.cols > 0 and solve_integer(self.relations, d) is not None)


@dataclass(frozen=True, eq=False)
class CohClass:
    group: CohomologyGroup = field(repr=False)
    representative: Vec

    @property
    def degree(self) -> int:
        return self.group.degree

    @property
    def module(self) -> GModule:
        return self.group.module

    @cached_property
    def coords(self) -> Vec:
        return self.group.coords(self.representative)

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def __eq__(self, other):
        return (isinstance(other, CohClass) and other.group is self.group
                and other.coords == self.coords)

    def __hash__(self):
        return hash((self.degree, self.coords))

    def __add__(self, other: CohClass) -> CohClass:
        if other.group is not self.group:
            raise ValueError("classes live in different cohomology groups")
        return CohClass(self.group, tuple(x + y for x, y in zip(self.representative, other.representative)))

    def __neg__(self) -> CohClass:
        return CohClass(self.group, tuple(-x for x in self.representative))

    def __sub__(self, other: CohClass) -> CohClass:
        return self + (-other)

    def __rmul__(self, k: int) -> CohClass:
        return CohClass(self.group, tuple(k * x for x in self.representative))


class CohomologyGroup:
    """H^degree(G, module) with explicit representatives."""

    def __init__(self, module: GModule, degree: int, sq: Subquotient, resolution: str = "periodic"):
        self.module = module
        self.degree = degree
        self.resolution = resolution
        self._sq = sq

    @property
    def structure(self) -> AbGroupStructure:
        return self._sq.structure

    @property
    def order(self) -> int | None:
        return self.structure.order

    @property
    def moduli(self) -> Vec:
        return self._sq.moduli

    @property
    def dimension(self) -> int:
        """F_p-dimension; only meaningful for elementary abelian p-groups."""
        return len(self.moduli)

    def is_elementary(self) -> bool:
        return all(d == self.module.p for d in self.moduli)

    def coords(self, rep: Sequence[int]) -> Vec:
        return self._sq.coords(rep)

    def contains(self, rep: Sequence[int]) -> bool:
        return self._sq.contains(rep)

    def cls(self, rep: Sequence[int]) -> CohClass:
        rep = tuple(rep)
        if not self._sq.contains(rep):
            raise ValueError(f"{rep} is not a degree-{self.degree} cocycle")
        return CohClass(self, rep)

    def from_coords(self, coords: Sequence[int]) -> CohClass:
        return CohClass(self, self._sq.lift(coords))

    @cached_property
    def zero(self) -> CohClass:
        return CohClass(self, (0,) * self._sq.ambient)

    @property
    def basis(self) -> list[CohClass]:
        n = self._sq.dimension
        return [self.from_coords(tuple(int(i == j) for j in range(n))) for i in range(n)]

    def elements(self) -> Iterator[CohClass]:
        for c in self._sq.elements():
            yield self.from_coords(c)

    def __repr__(self):
        return f"H^{self.degree}(Z/{self.module.p}, {self.module.name or 'M'}) = {self.structure}"


def _minus_one(M: GModule) -> IntMatrix:
    return M.sigma - IntMatrix.identity(M.rank)


def h0(M: GModule) -> CohomologyGroup:
    sq = homology(IntMatrix.zeros(M.rank, 0), _minus_one(M), M.relations, M.relations)
    return CohomologyGroup(M, 0, sq)


def h1(M: GModule) -> CohomologyGroup:
    sq = homology(_minus_one(M), M.norm, M.relations, M.relations)
    return CohomologyGroup(M, 1, sq)


def h2(M: GModule) -> CohomologyGroup:
    sq = homology(M.norm, _minus_one(M), M.relations, M.relations)
    return CohomologyGroup(M, 2, sq)


# -- bar resolution oracle ---------------------------------------------------

def _bar_index(p: int, k: int) -> list[tuple[int, ...]]:
    return list(product(range(1, p), repeat=k))


def _bar_differential(M: GModule, k: int) -> IntMatrix:
    """d: C^k -> C^(k+1) on normalized inhomogeneous cochains."""
    p, r = M.p, M.rank
    src = {g: i for i, g in enumerate(_bar_index(p, k))}
    dst = _bar_index(p, k + 1)
    rows = [[0] * (len(src) * r) for _ in range(len(dst) * r)]

    def add_block(out_idx, in_tuple, mat_rows, sign):
        if in_tuple is None or 0 in in_tuple:
            return
        j = src[in_tuple]
        for a in range(r):
            row = rows[out_idx * r + a]
            for b in range(r):
                row[j * r + b] += sign * mat_rows[a][b]

    ident = IntMatrix.identity(r).tolist()
    for o, g in enumerate(dst):
        add_block(o, g[1:], M._powers[g[0]].tolist(), 1)
        for i in range(1, k + 1):
            merged = g[:i - 1] + ((g[i - 1] + g[i]) % p,) + g[i + 1:]
            add_block(o, merged, ident, (-1) ** i)
        add_block(o, g[:k], ident, (-1) ** (k + 1))
    return IntMatrix.from_rows(rows, len(src) * r)


def _bar_relations(M: GModule, k: int) -> IntMatrix:
    n = (M.p - 1) ** k
    rel = M.relations
    r, q = rel.rows, rel.cols
    cols = []
    for blk in range(n):
        for c in range(q):
            v = [0] * (n * r)
            v[blk * r:(blk + 1) * r] = rel.col(c)
            cols.append(tuple(v))
    return IntMatrix.from_columns(cols, n * r)


def _bar_guard(M: GModule, top: int, limit: int):
    size = ((M.p - 1) ** top * M.rank) * ((M.p - 1) ** (top - 1) * M.rank)
    if size > limit:
        raise OracleTooLarge(f"bar complex needs {size} table entries (limit {limit})")


def bar_cohomology(M: GModule, degree: int, modulus: int | None = None,
                   limit: int = 1 << 20) -> CohomologyGroup:
    """H^degree via the normalized bar complex; optionally on M / modulus M."""
    if modulus:
        M = M.reduce(modulus)
    _bar_guard(M, degree + 1, limit)
    d_in = _bar_differential(M, degree - 1) if degree > 0 else IntMatrix.zeros(M.rank, 0)
    d_out = _bar_differential(M, degree)
    sq = homology(d_in, d_out, _bar_relations(M, degree), _bar_relations(M, degree + 1))
    return CohomologyGroup(M, degree, sq, resolution="bar")


def bar_h1(M: GModule, modulus: int | None = None, limit: int = 1 << 20) -> CohomologyGroup:
    return bar_cohomology(M, 1, modulus, limit)


def bar_h2(M: GModule, modulus: int | None = None, limit: int = 1 << 20) -> CohomologyGroup:
    return bar_cohomology(M, 2, modulus, limit)


def periodic_to_bar_1(M: GModule, a: Sequence[int]) -> Vec:
    """The 1-cocycle f with f(1) = a:  f(g) = (1 + sigma + ... + sigma^(g-1)) a."""
    out, acc = [], (0,) * M.rank
    for g in range(1, M.p):
        acc = tuple(x + y for x, y in zip(acc, M.act(g - 1, a)))
        out.extend(acc)
    return tuple(out)


def periodic_to_bar_2(M: GModule, b: Sequence[int]) -> Vec:
    """The carry cocycle F(g, h) = b when g + h >= p."""
    out = []
    for g, h in _bar_index(M.p, 2):
        out.extend(b if g + h >= M.p else (0,) * M.rank)
    return tuple(out)


def bar_to_periodic_2(M: GModule, F: Sequence[int]) -> Vec:
    """sum_j F(j, 1), which sends normalized 2-cocycles to M^G and coboundaries into N(M)."""
    r = M.rank
    idx = {g: i for i, g in enumerate(_bar_index(M.p, 2))}
    out = [0] * r
    for j in range(1, M.p):
        i = idx[(j, 1)]
        for a in range(r):
            out[a] += F[i * r + a]
    return tuple(out)


def cocycle_table_to_periodic(table: Mapping[tuple[int, int], Sequence[int]], p: int) -> Vec:
    """Same map on a normalized 2-cocycle given as a table over G x G."""
    vals = [table[j, 1] for j in range(p)]
    return tuple(sum(col) for col in zip(*vals))


# -- products --------------------------------------------------------------

def cup_representative(a: Sequence[int], b: Sequence[int], A: GModule, B: GModule,
                       pairing: Pairing) -> Vec:
    """sum over 0 <= i < j <= p-1 of pairing(sigma^i a, sigma^j b)."""
    p = A.p
    out = None
    for i in range(p):
        ai = A.act(i, a)
        for j in range(i + 1, p):
            v = pairing(ai, B.act(j, b))
            out = v if out is None else tuple(x + y for x, y in zip(out, v))
    return out


def bar_cup(f: Sequence[int], f2: Sequence[int], A: GModule, B: GModule, pairing: Pairing) -> Vec:
    """(f u f')(g, h) = pairing(f(g), g f'(h)) on normalized cochains."""
    ra, rb = A.rank, B.rank
    out = []
    for g, h in _bar_index(A.p, 2):
        fg = f[(g - 1) * ra:g * ra]
        fh = f2[(h - 1) * rb:h * rb]
        out.extend(pairing(fg, B.act(g, fh)))
    return tuple(out)


def cup_v(y: CohClass, z: CohClass, bracket: Pairing, target: CohomologyGroup) -> CohClass:
    """y v z: the cup product of degree-1 classes paired by the bracket into the layer."""
    if y.group is not z.group or y.degree != 1:
        raise ValueError("cup_v needs two degree-1 classes over the same module")
    rep = cup_representative(y.representative, z.representative, y.module, z.module, bracket)
    return target.cls(rep)


def wedge_pairing(u: Sequence[int], v: Sequence[int]) -> Vec:
    return wedge(u, v)


class WedgeMap:
    """The map H^1(G,L) ^ H^1(G,L) -> H^2(G, L ^ L) induced by the cup product."""

    def __init__(self, L: GModule):
        self.L = L
        self.source = h1(L)
        self.target_module = L.exterior_square()
        self.target = h2(self.target_module)
        self.pairs = wedge_pairs(self.source.dimension)

    def __call__(self, element: Mapping[tuple[int, int], int]) -> CohClass:
        basis = self.source.basis
        out = self.target.zero
        for (i, j), c in element.items():
            if i == j:
                continue  # a ^ a = 0
            if not c:
                continue
            rep = cup_representative(basis[i].representative, basis[j].representative,
                                     self.L, self.L, wedge_pairing)
            out = out + c * self.target.cls(rep)
        return out

    def matrix_mod_p(self) -> IntMatrix:
        cols = [self({ij: 1}).coords for ij in self.pairs]
        return IntMatrix.from_columns(cols, self.target.dimension)

    def is_injective(self) -> bool:
        if not self.target.is_elementary() or not self.source.is_elementary():
            raise ValueError("injectivity test assumes elementary abelian p-groups")
        return rank_mod_p(self.matrix_mod_p(), self.L.p) == len(self.pairs)


def wedge_map(L: GModule, element: Mapping[tuple[int, int], int]) -> CohClass:
    return WedgeMap(L)(element)


def induced_map_kernel_order(source: CohomologyGroup, target: CohomologyGroup,
                             linear: IntMatrix) -> int:
    """Order of the kernel of H(linear): source -> target, for elementary abelian p-groups."""
    p = source.module.p
    if not (source.is_elementary() and target.is_elementary()):
        raise ValueError("kernel order computed only for elementary abelian p-groups")
    cols = [target.coords(linear.apply(b.representative)) for b in source.basis]
    rank = rank_mod_p(IntMatrix.from_columns(cols, target.dimension), p) if cols else 0
    return p ** (source.dimension - rank)


def delta2(s_class: CohClass, ext) -> CohClass:
    """Obstruction to lifting a level-1 section class to level 2.

    ``ext`` is the level-2 extension; it tabulates the pulled-back 2-cocycle
    and knows the layer's H^2.
    """
    table = ext.pullback_cocycle(s_class, second=1)
    group = ext.layer_h2
    return group.cls(cocycle_table_to_periodic(table, ext.p))
