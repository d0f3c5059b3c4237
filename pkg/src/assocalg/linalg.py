"""Exact linear algebra over any field whose elements support + - * / and ``== 0``.

Used with :class:`fractions.Fraction`, :class:`~assocalg.scalars.RationalFunction`
and :class:`~assocalg.scalars.FpScalar`.  Pivoting is deterministic: the first
column with a nonzero entry, the first such row, pivot scaled to 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .errors import DimensionMismatchError
from .scalars import RationalFunction, simplify

Vector = Tuple[object, ...]


def rref(rows: Sequence[Sequence], ncols: int | None = None, pivot_log=None):
    """Reduced row echelon form.  Returns (nonzero rows, pivot columns).

    If ``pivot_log`` is a list, every pivot value divided out is appended to it
    (callers over Q(alpha) use this to track degenerate specialisations).
    """
    m = [[Fraction(x) if isinstance(x, int) else x for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        sel = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        piv = m[r][c]
        if pivot_log is not None:
            pivot_log.append(piv)
        if piv != 1:
            m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return [tuple(row) for row in m[:r]], pivots


def canon(x):
    """Constant rational functions collapse to Fraction so equal vectors compare equal."""
    if isinstance(x, RationalFunction):
        return simplify(x) if x.is_constant() else x
    return x


def _zero_like(x):
    return x - x


def nullspace_vectors(rows: Sequence[Sequence], ncols: int, zero=Fraction(0), one=Fraction(1),
                      pivot_log=None) -> List[Vector]:
    """Basis of {v : M v = 0}, one vector per free column (unreduced)."""
    red, pivots = rref(rows, ncols, pivot_log)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


@dataclass(frozen=True)
class Subspace:
    """Subspace of K^ambient stored as its reduced echelon basis.

    Two subspaces are equal iff their representations are identical.
    """

    ambient: int
    basis: Tuple[Vector, ...]

    @classmethod
    def span(cls, vectors, ambient: int) -> "Subspace":
        vecs = [tuple(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient:
                raise DimensionMismatchError(f"vector of length {len(v)} in K^{ambient}")
        red, _ = rref(vecs, ambient) if vecs else ([], [])
        return cls(ambient, tuple(tuple(canon(x) for x in row) for row in red))

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient, ())

    @classmethod
    def whole(cls, ambient: int, zero=Fraction(0), one=Fraction(1)) -> "Subspace":
        return cls(ambient, tuple(
            tuple(one if i == j else zero for j in range(ambient)) for i in range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v) -> bool:
        return Subspace.span(list(self.basis) + [tuple(v)], self.ambient).dim == self.dim

    def issubspace(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(list(self.basis) + list(other.basis), self.ambient)

    def annihilator(self) -> "Subspace":
        """Vectors w with w . v = 0 for every v in the subspace."""
        zero, one = _field_units(self)
        if not self.basis:
            return Subspace.whole(self.ambient, zero, one)
        return Subspace.span(nullspace_vectors(self.basis, self.ambient, zero, one), self.ambient)

    def intersect(self, other: "Subspace") -> "Subspace":
        if other.ambient != self.ambient:
            raise DimensionMismatchError("subspaces live in different spaces")
        zero, one = _field_units(self, other)
        eqs = list(self.annihilator().basis) + list(other.annihilator().basis)
        if not eqs:
            return Subspace.whole(self.ambient, zero, one)
        return Subspace.span(nullspace_vectors(eqs, self.ambient, zero, one), self.ambient)


def _field_units(*spaces):
    for s in spaces:
        for v in s.basis:
            for x in v:
                if x != 0:
                    z = _zero_like(x)
                    return z, z + 1
    return Fraction(0), Fraction(1)


def exact_nullspace(rows: Sequence[Sequence], ncols: int, zero=Fraction(0), one=Fraction(1),
                    pivot_log=None) -> Subspace:
    return Subspace.span(nullspace_vectors(rows, ncols, zero, one, pivot_log), ncols)


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    return len(rref(rows, ncols)[0])


# -- square matrices ------------------------------------------------------------------

def identity(n: int, zero=Fraction(0), one=Fraction(1)):
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def matmul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    if len(a[0]) != k:
        raise DimensionMismatchError("inner dimensions differ")
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = a[i][0] * b[0][j]
            for t in range(1, k):
                s = s + a[i][t] * b[t][j]
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def matsub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def det(a):
    """Determinant by elimination; works over any field."""
    m = [list(r) for r in a]
    n = len(m)
    if n == 0:
        return Fraction(1)
    result = m[0][0] - m[0][0] + 1
    for c in range(n):
        sel = next((i for i in range(c, n) if m[i][c] != 0), None)
        if sel is None:
            return result - result
        if sel != c:
            m[c], m[sel] = m[sel], m[c]
            result = -result
        piv = m[c][c]
        result = result * piv
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / piv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def inverse(a):
    n = len(a)
    zero = a[0][0] - a[0][0]
    one = zero + 1
    aug = [list(a[i]) + [one if i == j else zero for j in range(n)] for i in range(n)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(row[n:]) for row in red)


def mat_to_vec(mat) -> Vector:
    """Column-major flattening: entry (i, j) goes to index i + n*j."""
    n = len(mat)
    return tuple(mat[i][j] for j in range(n) for i in range(n))


def vec_to_mat(vec, n: int):
    return tuple(tuple(vec[i + n * j] for j in range(n)) for i in range(n))
