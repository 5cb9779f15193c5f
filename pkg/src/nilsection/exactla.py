"""Exact integer linear algebra: Smith normal form, kernels, cokernels, congruences.

Everything here works with Python integers, so intermediate growth in the
unimodular transforms never overflows.  Matrices are small (at most a few
hundred rows), and the classical pivoting algorithm is fast enough.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        columns = [tuple(c) for c in columns]
        return cls.from_rows([[c[i] for c in columns] for i in range(rows)], len(columns))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: int | None = None,
                 cols: int | None = None) -> IntMatrix:
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(diag):
            out[i][i] = d
        return cls.from_rows(out, cols)

    @classmethod
    def hstack(cls, *mats: IntMatrix) -> IntMatrix:
        rows = mats[0].rows
        if any(m.rows != rows for m in mats):
            raise ValueError("hstack needs equal row counts")
        lists = [m.tolist() for m in mats]
        return cls.from_rows([sum((l[i] for l in lists), []) for i in range(rows)],
                             sum(m.cols for m in mats))

    @classmethod
    def vstack(cls, *mats: IntMatrix) -> IntMatrix:
        cols = mats[0].cols
        if any(m.cols != cols for m in mats):
            raise ValueError("vstack needs equal column counts")
        return cls.from_rows([r for m in mats for r in m.tolist()], cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def tolist(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> Vector:
        return self.entries[j::self.cols] if self.cols else ()

    def columns(self) -> list[Vector]:
        return [self.col(j) for j in range(self.cols)]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix.from_rows([self.col(j) for j in range(self.cols)], self.rows)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> IntMatrix:
        rows, cols = list(rows), list(cols)
        return IntMatrix.from_rows([[self[i, j] for j in cols] for i in rows], len(cols))

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for {self.rows}x{self.cols} matrix")
        c = self.cols
        e = self.entries
        return tuple(sum(e[i * c + j] * v[j] for j in range(c) if v[j]) for i in range(self.rows))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        a = self.tolist()
        bt = [other.col(j) for j in range(other.cols)]
        return IntMatrix.from_rows(
            [[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a], other.cols)

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, tuple(x + y for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, tuple(x - y for x, y in zip(self.entries, other.entries)))

    def __neg__(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(-x for x in self.entries))

    def scale(self, k: int) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(k * x for x in self.entries))

    def __pow__(self, k: int) -> IntMatrix:
        if self.rows != self.cols or k < 0:
            raise ValueError("only nonnegative powers of square matrices")
        result, base = IntMatrix.identity(self.rows), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def mod(self, m: int) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(x % m for x in self.entries))

    def trace(self) -> int:
        return sum(self[i, i] for i in range(min(self.rows, self.cols)))

    def is_identity(self) -> bool:
        return self == IntMatrix.identity(self.rows) and self.rows == self.cols

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def __repr__(self):
        return f"IntMatrix({self.tolist()})"


@dataclass(frozen=True)
class SmithForm:
    """U @ A @ V == S with U, V unimodular and S diagonal in divisibility order."""
    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.rows, self.S.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


@dataclass(frozen=True)
class AbGroupStructure:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        t = self.torsion
        if any(d <= 1 for d in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"torsion {t} is not a divisibility chain of factors > 1")

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def exponent(self) -> int | None:
        if self.free_rank:
            return None
        return self.torsion[-1] if self.torsion else 1

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        for d in self.torsion:
            parts.append(f"Z/{d}")
        return " x ".join(parts) if parts else "0"


def _identity_rows(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A: IntMatrix) -> SmithForm:
    m, n = A.shape
    S = A.tolist()
    U, Ui = _identity_rows(m), _identity_rows(m)
    V, Vi = _identity_rows(n), _identity_rows(n)

    # row op  r_i += q r_k  on S and U; the inverse op on Ui is a column op
    def add_row(i, k, q):
        if not q:
            return
        Si, Sk = S[i], S[k]
        for j in range(n):
            if Sk[j]:
                Si[j] += q * Sk[j]
        Uii, Uk = U[i], U[k]
        for j in range(m):
            if Uk[j]:
                Uii[j] += q * Uk[j]
        for r in Ui:
            if r[i]:
                r[k] -= q * r[i]

    def add_col(j, k, q):
        if not q:
            return
        for r in S:
            if r[k]:
                r[j] += q * r[k]
        for r in V:
            if r[k]:
                r[j] += q * r[k]
        Vk, Vj = Vi[k], Vi[j]
        for c in range(n):
            if Vj[c]:
                Vk[c] -= q * Vj[c]

    def swap_rows(i, k):
        if i != k:
            S[i], S[k] = S[k], S[i]
            U[i], U[k] = U[k], U[i]
            for r in Ui:
                r[i], r[k] = r[k], r[i]

    def swap_cols(j, k):
        if j != k:
            for r in S:
                r[j], r[k] = r[k], r[j]
            for r in V:
                r[j], r[k] = r[k], r[j]
            Vi[j], Vi[k] = Vi[k], Vi[j]

    def negate_row(i):
        S[i] = [-x for x in S[i]]
        U[i] = [-x for x in U[i]]
        for r in Ui:
            r[i] = -r[i]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = S[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            piv = S[t][t]
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // piv))
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // piv))
            # remainders left behind: move the smallest to the pivot and repeat
            cand = [(abs(S[i][t]), i, t) for i in range(t + 1, m) if S[i][t]]
            cand += [(abs(S[t][j]), t, j) for j in range(t + 1, n) if S[t][j]]
            if cand:
                _, i, j = min(cand)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if S[i][j] % piv), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if S[t][t] < 0:
            negate_row(t)

    return SmithForm(
        U=IntMatrix.from_rows(U, m), S=IntMatrix.from_rows(S, n), V=IntMatrix.from_rows(V, n),
        U_inv=IntMatrix.from_rows(Ui, m), V_inv=IntMatrix.from_rows(Vi, n))


def invariant_factors(A: IntMatrix) -> tuple[int, ...]:
    return smith_normal_form(A).diagonal


def cokernel(A: IntMatrix) -> AbGroupStructure:
    """Structure of Z^rows / column-span(A)."""
    diag = smith_normal_form(A).diagonal
    rank = sum(1 for d in diag if d)
    return AbGroupStructure(free_rank=A.rows - rank, torsion=tuple(d for d in diag if d > 1))


def solve_integer(A: IntMatrix, b: Sequence[int]) -> Vector | None:
    """Some x with A x = b over Z, or None."""
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {A.rows} rows")
    snf = smith_normal_form(A)
    c = snf.U.apply(b)
    y = [0] * A.cols
    for i, ci in enumerate(c):
        d = snf.S[i, i] if i < min(A.rows, A.cols) else 0
        if d == 0:
            if ci:
                return None
        elif ci % d:
            return None
        else:
            y[i] = ci // d
    return snf.V.apply(y)


def solve_mod(A: IntMatrix, b: Sequence[int], m: int) -> Vector | None:
    """Solve A x = b modulo m (over Z when m == 0); None when there is no solution."""
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {A.rows} rows")
    if m < 0:
        raise ValueError("modulus must be nonnegative")
    if m == 0:
        return solve_integer(A, b)
    big = IntMatrix.hstack(A, IntMatrix.identity(A.rows).scale(m))
    x = solve_integer(big, b)
    if x is None:
        return None
    return tuple(v % m for v in x[:A.cols])


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of {x : A x = 0}."""
    snf = smith_normal_form(A)
    r = snf.rank
    return snf.V.submatrix(range(A.cols), range(r, A.cols))


def lattice_basis(gens: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of the column span of ``gens``."""
    snf = smith_normal_form(gens)
    diag = snf.diagonal
    r = snf.rank
    cols = [tuple(snf.U_inv[i, k] * diag[k] for i in range(gens.rows)) for k in range(r)]
    return IntMatrix.from_columns(cols, gens.rows)


def kernel_mod_relations(A: IntMatrix, relations: IntMatrix | None) -> IntMatrix:
    """Basis of {x : A x lies in column-span(relations)}."""
    if relations is None or relations.cols == 0:
        return kernel_basis(A)
    big = IntMatrix.hstack(A, relations)
    k = kernel_basis(big)
    top = k.submatrix(range(A.cols), range(k.cols))
    return lattice_basis(top)


class Subquotient:
    """The finitely generated abelian group  span(numerator) / span(denominator).

    ``numerator`` must have linearly independent columns and contain the
    column span of ``denominator``.  Elements are given by representative
    vectors in the ambient Z^d; ``coords`` maps them to canonical coordinates
    (free coordinates unreduced, torsion coordinates reduced mod their
    invariant factor) and ``lift`` goes back.
    """

    def __init__(self, numerator: IntMatrix, denominator: IntMatrix):
        self.ambient = numerator.rows
        self.numerator = numerator
        self._num_snf = smith_normal_form(numerator)
        k = numerator.cols
        if self._num_snf.rank != k:
            raise ValueError("numerator columns are not independent")
        rel_cols = []
        for col in denominator.columns():
            c = self._in_numerator(col)
            if c is None:
                raise ValueError("denominator is not contained in numerator")
            rel_cols.append(c)
        rel = IntMatrix.from_columns(rel_cols, k)
        snf = smith_normal_form(rel)
        diag = list(snf.diagonal) + [0] * (k - min(rel.rows, rel.cols))
        self._U, self._U_inv = snf.U, snf.U_inv
        self._factors = diag
        self._keep = [i for i, d in enumerate(diag) if d != 1]
        torsion = tuple(d for d in diag if d > 1)
        self.structure = AbGroupStructure(sum(1 for d in diag if d == 0), torsion)
        # coordinate order: torsion factors first (as listed), then free ones
        self._order = [i for i in self._keep if diag[i] > 1] + [i for i in self._keep if diag[i] == 0]
        self.moduli = tuple(diag[i] for i in self._order)

    def _in_numerator(self, x: Sequence[int]) -> Vector | None:
        snf = self._num_snf
        c = snf.U.apply(x)
        k = self.numerator.cols
        y = []
        for i, ci in enumerate(c):
            if i < k:
                d = snf.S[i, i]
                if ci % d:
                    return None
                y.append(ci // d)
            elif ci:
                return None
        return snf.V.apply(y)

    def contains(self, x: Sequence[int]) -> bool:
        return self._in_numerator(x) is not None

    def coords(self, x: Sequence[int]) -> Vector:
        c = self._in_numerator(x)
        if c is None:
            raise ValueError("vector does not lie in the numerator lattice")
        y = self._U.apply(c)
        return tuple(y[i] % self._factors[i] if self._factors[i] else y[i] for i in self._order)

    def lift(self, coords: Sequence[int]) -> Vector:
        if len(coords) != len(self._order):
            raise ValueError("wrong number of coordinates")
        y = [0] * self.numerator.cols
        for i, v in zip(self._order, coords):
            y[i] = v
        return self.numerator.apply(self._U_inv.apply(y))

    def is_zero(self, x: Sequence[int]) -> bool:
        return not any(self.coords(x))

    @property
    def dimension(self) -> int:
        return len(self._order)

    def elements(self) -> Iterator[Vector]:
        """All coordinate tuples of a finite subquotient, in lexicographic order."""
        if self.structure.free_rank:
            raise ValueError("cannot enumerate an infinite group")
        yield from _product_ranges(self.moduli)


def _product_ranges(moduli: Sequence[int]) -> Iterator[Vector]:
    if not moduli:
        yield ()
        return
    for head in range(moduli[0]):
        for tail in _product_ranges(moduli[1:]):
            yield (head,) + tail


def homology(d_in: IntMatrix, d_out: IntMatrix, relations_here: IntMatrix | None = None,
             relations_out: IntMatrix | None = None) -> Subquotient:
    """ker(d_out mod relations_out) / (im d_in + relations_here) on Z^d."""
    num = kernel_mod_relations(d_out, relations_out)
    den = d_in if relations_here is None or relations_here.cols == 0 else \
        IntMatrix.hstack(d_in, relations_here)
    return Subquotient(num, den)


def rank_mod_p(A: IntMatrix, p: int) -> int:
    return len(_row_echelon_mod_p(A.tolist(), A.cols, p)[1])


def nullspace_mod_p(A: IntMatrix, p: int) -> list[Vector]:
    """Basis (reduced, pivot-free coordinates set to unit vectors) of {x : A x = 0 mod p}."""
    rows, pivots = _row_echelon_mod_p(A.tolist(), A.cols, p)
    free = [j for j in range(A.cols) if j not in pivots]
    basis = []
    for f in free:
        x = [0] * A.cols
        x[f] = 1
        for r, pc in zip(rows, pivots):
            x[pc] = (-r[f]) % p
        basis.append(tuple(x))
    return basis


def _row_echelon_mod_p(rows: list[list[int]], ncols: int, p: int):
    rows = [[x % p for x in r] for r in rows]
    pivots = []
    out = []
    for j in range(ncols):
        piv = next((r for r in rows if r[j]), None)
        if piv is None:
            continue
        rows.remove(piv)
        inv = pow(piv[j], -1, p)
        piv = [(x * inv) % p for x in piv]
        for r in rows + out:
            if r[j]:
                f = r[j]
                for c in range(ncols):
                    r[c] = (r[c] - f * piv[c]) % p
        out.append(piv)
        pivots.append(j)
    return out, pivots
