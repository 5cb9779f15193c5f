"""Class-2 nilpotent quotient K/[K,[K,K]] of the surface kernel K.

Elements are pairs (h, l): h in the abelianization H (free of rank 2g) and
l in the central layer L = wedge^2(H) / <omega>.  Multiplication uses the
collection cocycle

    (h, l) (h', l') = (h + h', l + l' + beta(h, h')),
    beta(e_i, e_j) = e_i ^ e_j  if i > j, else 0,

so the commutator of lifts of y and z is (0, y ^ z).

The quotient is computed from the Reidemeister-Schreier presentation of K.
After the unimodular change of basis that splits the relator span off the
free group's abelianization, each generator whose image lies in the relator
span can be traded for a central element of the free class-2 group on H.
What is left is the free class-2 group on H modulo central relators, whose
span must be a single primitive vector omega (the surface relation).
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .exactla import AbGroupStructure, IntMatrix, cokernel, lattice_basis, smith_normal_form
from .fpgroup import SubgroupData, concat, inverse, rewrite_kernel_word

Vec = tuple[int, ...]


class LayerShapeError(ValueError):
    """The central layer does not have the expected one-relator shape."""


def wedge_pairs(r: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(r) for b in range(a + 1, r)]


def wedge(u: Sequence[int], v: Sequence[int]) -> Vec:
    r = len(u)
    return tuple(u[a] * v[b] - u[b] * v[a] for a in range(r) for b in range(a + 1, r))


def collection_cocycle(u: Sequence[int], v: Sequence[int]) -> Vec:
    # sum over i > j of u_i v_j e_i ^ e_j, written in the a < b basis
    r = len(u)
    return tuple(-u[b] * v[a] for a in range(r) for b in range(a + 1, r))


def wedge_square_matrix(sigma: IntMatrix) -> IntMatrix:
    r = sigma.rows
    cols = [sigma.col(j) for j in range(r)]
    return IntMatrix.from_columns([wedge(cols[a], cols[b]) for a, b in wedge_pairs(r)],
                                  r * (r - 1) // 2)


def _add(u: Sequence[int], v: Sequence[int]) -> Vec:
    return tuple(map(operator.add, u, v))


def _sub(u: Sequence[int], v: Sequence[int]) -> Vec:
    return tuple(map(operator.sub, u, v))


def _scale(k: int, u: Sequence[int]) -> Vec:
    return tuple(k * x for x in u)


@dataclass(frozen=True)
class Layer2:
    ambient_rank: int
    relation_vector: Vec
    sigma_wedge: IntMatrix
    quotient_structure: AbGroupStructure


@dataclass(frozen=True, eq=False)
class Class2Element:
    quotient: Class2Quotient = field(repr=False)
    h: Vec
    l: Vec

    def __eq__(self, other):
        return (isinstance(other, Class2Element) and self.quotient is other.quotient
                and self.h == other.h and self.l == other.l)

    def __hash__(self):
        return hash((self.h, self.l))

    def __mul__(self, other: Class2Element) -> Class2Element:
        return self.quotient.multiply(self, other)

    def __invert__(self) -> Class2Element:
        return self.quotient.inverse(self)

    def __pow__(self, k: int) -> Class2Element:
        return self.quotient.power(self, k)

    @property
    def is_central(self) -> bool:
        return not any(self.h)


class Class2Quotient:
    """Arithmetic in K/[K]_2 together with the map from Schreier words."""

    def __init__(self, rank: int, omega: Vec, sigma: IntMatrix, generator_images: Sequence[tuple[Vec, Vec]],
                 sub: SubgroupData | None = None):
        self.rank = rank
        self.sub = sub
        D = rank * (rank - 1) // 2
        self.wedge_rank = D
        self.layer_rank = D - 1
        snf = smith_normal_form(IntMatrix.from_columns([omega], D))
        if snf.diagonal != (1,):
            raise LayerShapeError(f"relation vector {omega} is not primitive")
        self.omega = tuple(omega)
        self._P = snf.U.submatrix(range(1, D), range(D))          # wedge^2 H -> L
        self._lift = snf.U_inv.submatrix(range(D), range(1, D))   # L -> wedge^2 H
        self.sigma = sigma
        self.sigma_wedge = wedge_square_matrix(sigma)
        self.sigma_layer = self._P @ self.sigma_wedge @ self._lift
        # layer image of each basis wedge e_a ^ e_b, for the cocycle
        self._pair_cols = {ab: self._P.col(k) for k, ab in enumerate(wedge_pairs(rank))}
        self.generator_images = tuple(
            Class2Element(self, tuple(h), self.project_wedge(w)) for h, w in generator_images)

    @cached_property
    def layer(self) -> Layer2:
        return Layer2(self.wedge_rank, self.omega, self.sigma_wedge,
                      cokernel(IntMatrix.from_columns([self.omega], self.wedge_rank)))

    # -- layer plumbing -------------------------------------------------
    def project_wedge(self, w: Sequence[int]) -> Vec:
        return self._P.apply(w)

    def lift_layer(self, l: Sequence[int]) -> Vec:
        return self._lift.apply(l)

    @property
    def projection_matrix(self) -> IntMatrix:
        return self._P

    def beta(self, h: Sequence[int], k: Sequence[int]) -> Vec:
        out = [0] * self.layer_rank
        r = self.rank
        for a in range(r):
            ka = k[a]
            if not ka:
                continue
            for b in range(a + 1, r):
                c = h[b] * ka
                if c:
                    col = self._pair_cols[a, b]
                    for i in range(self.layer_rank):
                        out[i] -= c * col[i]
        return tuple(out)

    def bracket(self, y: Sequence[int], z: Sequence[int]) -> Vec:
        """Image of y ^ z in the layer: the commutator of any lifts of y and z."""
        return self.project_wedge(wedge(y, z))

    # -- group law --------------------------------------------------------
    def element(self, h: Sequence[int], l: Sequence[int] | None = None) -> Class2Element:
        if len(h) != self.rank:
            raise ValueError("h-part has the wrong length")
        l = (0,) * self.layer_rank if l is None else tuple(l)
        if len(l) != self.layer_rank:
            raise ValueError("layer part has the wrong length")
        return Class2Element(self, tuple(h), l)

    def central(self, l: Sequence[int]) -> Class2Element:
        return Class2Element(self, (0,) * self.rank, tuple(l))

    @cached_property
    def identity(self) -> Class2Element:
        return Class2Element(self, (0,) * self.rank, (0,) * self.layer_rank)

    def _check(self, x: Class2Element):
        if x.quotient is not self:
            raise ValueError("element belongs to a different class-2 quotient")

    def multiply(self, x: Class2Element, y: Class2Element) -> Class2Element:
        self._check(x)
        self._check(y)
        l = _add(_add(x.l, y.l), self.beta(x.h, y.h))
        return Class2Element(self, _add(x.h, y.h), l)

    def inverse(self, x: Class2Element) -> Class2Element:
        self._check(x)
        return Class2Element(self, _scale(-1, x.h), _add(_scale(-1, x.l), self.beta(x.h, x.h)))

    def power(self, x: Class2Element, k: int) -> Class2Element:
        self._check(x)
        if k < 0:
            return self.power(self.inverse(x), -k)
        l = _add(_scale(k, x.l), _scale(k * (k - 1) // 2, self.beta(x.h, x.h)))
        return Class2Element(self, _scale(k, x.h), l)

    def commutator(self, x: Class2Element, y: Class2Element) -> Class2Element:
        return x * y * ~x * ~y

    def product(self, xs) -> Class2Element:
        out = self.identity
        for x in xs:
            out = out * x
        return out

    def evaluate(self, w: Sequence[int], images: Sequence[Class2Element] | None = None) -> Class2Element:
        """Image of a Schreier-letter word under generator images (default: the quotient map)."""
        images = self.generator_images if images is None else images
        inv = {}
        out = self.identity
        for x in w:
            if x > 0:
                out = out * images[x - 1]
            else:
                if x not in inv:
                    inv[x] = ~images[-x - 1]
                out = out * inv[x]
        return out

    def of_kernel_word(self, w: Sequence[int]) -> Class2Element:
        """Image of a parent word lying in the kernel."""
        return self.evaluate(rewrite_kernel_word(self.sub, w))

    def reduce_layer(self, l: Sequence[int], m: int) -> Vec:
        return tuple(x % m for x in l)

    # -- conjugation -------------------------------------------------------
    def conjugation(self, lift: Sequence[int]) -> Class2Automorphism:
        """The automorphism x -> lift x lift^-1 for a parent word ``lift``."""
        sub = self.sub
        lift = tuple(lift)
        li = inverse(lift)
        images = [self.of_kernel_word(concat(lift, s, li)) for s in sub.schreier_generators]
        return self.automorphism_from_images(images)

    def automorphism_from_images(self, images: Sequence[Class2Element]) -> Class2Automorphism:
        ab = self.sub.abelianization
        basis_images = []
        sigma_cols = []
        for v in ab.lifts:
            word_image = self.product(images[i] ** c for i, c in enumerate(v) if c)
            sigma_cols.append(word_image.h)
            basis_images.append(word_image)
        sigma = IntMatrix.from_columns(sigma_cols, self.rank)
        sigma_layer = self._P @ wedge_square_matrix(sigma) @ self._lift
        # the word for e_b also carries central junk c_b; strip alpha(c_b)
        fixed = []
        for v, img in zip(ab.lifts, basis_images):
            own = self.product(self.generator_images[i] ** c for i, c in enumerate(v) if c)
            fixed.append(img * self.central(_scale(-1, sigma_layer.apply(own.l))))
        return Class2Automorphism(self, tuple(fixed), sigma, sigma_layer)


@dataclass(frozen=True, eq=False)
class Class2Automorphism:
    quotient: Class2Quotient
    basis_images: tuple[Class2Element, ...]
    sigma: IntMatrix
    sigma_layer: IntMatrix

    def __call__(self, x: Class2Element) -> Class2Element:
        q = self.quotient
        return q.central(self.sigma_layer.apply(x.l)) * self._on_linear_part(x.h)

    def _on_linear_part(self, h: Vec) -> Class2Element:
        # image of the element (h, 0); cached since searches revisit the same h
        cache = self.__dict__.setdefault("_cache", {})
        out = cache.get(h)
        if out is None:
            out = self.quotient.identity
            for b, hb in enumerate(h):
                if hb:
                    out = out * self.basis_images[b] ** hb
            if len(cache) < 4096:
                cache[h] = out
        return out

    def then(self, other: Class2Automorphism) -> Class2Automorphism:
        """other after self."""
        q = self.quotient
        basis = tuple(other(img) for img in self.basis_images)
        return Class2Automorphism(q, basis, other.sigma @ self.sigma, other.sigma_layer @ self.sigma_layer)


def _free_class2_eval(w, images, split):
    """Evaluate a word in the free class-2 group whose cocycle only sees coordinates >= split.

    Images are pairs (v, w) with v in Z^m and w in wedge^2 of the last m - split coordinates.
    """
    v_out, w_out = None, None
    for x in w:
        v, c = images[abs(x) - 1]
        if x < 0:
            c = _add(_scale(-1, c), collection_cocycle(v[split:], v[split:]))
            v = _scale(-1, v)
        if v_out is None:
            v_out, w_out = v, c
        else:
            w_out = _add(_add(w_out, c), collection_cocycle(v_out[split:], v[split:]))
            v_out = _add(v_out, v)
    return v_out, w_out


def build_class2(sub: SubgroupData, sigma: IntMatrix, allow_trivial_layer: bool = False) -> Class2Quotient:
    ab = sub.abelianization
    m, k, r = ab.m, ab.relation_rank, ab.rank
    if r < 2 or r % 2:
        raise LayerShapeError(f"abelianization rank {r} is not 2g with g >= 1")
    if r == 2 and not allow_trivial_layer:
        raise LayerShapeError("genus-1 kernel: wedge^2 H is spanned by the surface relation")
    D = r * (r - 1) // 2
    zero_w = (0,) * D

    # free class-2 group on the new basis f_a = U^-1 e_a, modulo Lambda ^ Z^m
    gen_new = [(ab.U.col(i), zero_w) for i in range(m)]
    rho = [_free_class2_eval(rel, gen_new, k) for rel in sub.subgroup_relators]
    snf = smith_normal_form(ab.relations)
    w_basis = []
    for a in range(k):
        coeffs = snf.V.col(a)
        acc = zero_w
        for c, (v, w) in zip(coeffs, rho):
            if c:
                acc = _add(acc, _scale(c, w))
        w_basis.append(acc)

    # the surface generators: linear part in H, central part from the split-off coordinates
    images = []
    for i in range(m):
        u = ab.U.col(i)
        c = zero_w
        for a in range(k):
            if u[a]:
                c = _sub(c, _scale(u[a], w_basis[a]))
        images.append((u[k:], c))

    zs = []
    for rel in sub.subgroup_relators:
        h, z = _free_class2_eval(rel, images, 0)
        if any(h):
            raise LayerShapeError("relator has nonzero abelian image after reduction")
        zs.append(z)
    Z = IntMatrix.from_columns(zs, D)
    diag = smith_normal_form(Z).diagonal
    if [d for d in diag if d] != [1]:
        raise LayerShapeError(f"central relators span a lattice with invariants {diag}, not <omega>")
    omega = lattice_basis(Z).col(0)
    first = next(x for x in omega if x)
    if first < 0:
        omega = _scale(-1, omega)
    return Class2Quotient(r, omega, sigma, images, sub)
