"""Algebras given by structure constants, and the basic subspaces attached to them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, NamedTuple, Sequence, Tuple

from .errors import DimensionMismatchError
from .linalg import Subspace, canon, exact_nullspace, inverse, matmul
from .scalars import MultiPoly, RationalFunction, Ring

MAX_DIM = 16

Element = Tuple[object, ...]


def _canon_scalar(x):
    if isinstance(x, MultiPoly):
        x = RationalFunction(x)
    if isinstance(x, int):
        return Fraction(x)
    return canon(x)


@dataclass(frozen=True)
class AlgebraTable:
    """Structure constants: ``gamma[i][j][k]`` is the e_k coefficient of e_i*e_j (0-based)."""

    dim: int
    gamma: Tuple[Tuple[Tuple[object, ...], ...], ...]
    name: str = ""
    _nonzero: Tuple[Tuple[int, int, int, object], ...] = field(
        default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.dim
        if not 1 <= n <= MAX_DIM:
            raise ValueError(f"dimension must be between 1 and {MAX_DIM}, got {n}")
        if len(self.gamma) != n or any(len(r) != n or any(len(c) != n for c in r)
                                       for r in self.gamma):
            raise DimensionMismatchError(f"structure constants must be {n}x{n}x{n}")
        gamma = tuple(tuple(tuple(_canon_scalar(x) for x in c) for c in r) for r in self.gamma)
        object.__setattr__(self, "gamma", gamma)
        nz = tuple((i, j, k, gamma[i][j][k]) for i in range(n) for j in range(n)
                   for k in range(n) if gamma[i][j][k] != 0)
        object.__setattr__(self, "_nonzero", nz)

    @classmethod
    def from_products(cls, dim: int, products: Mapping[Tuple[int, int], Mapping[int, object]],
                      name: str = "") -> "AlgebraTable":
        """Build from 1-based products ``{(i, j): {k: coeff}}``; unlisted products are zero."""
        g = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), combo in products.items():
            for k, c in combo.items():
                for idx in (i, j, k):
                    if not 1 <= idx <= dim:
                        raise DimensionMismatchError(f"index {idx} outside 1..{dim}")
                g[i - 1][j - 1][k - 1] = c
        return cls(dim, tuple(tuple(tuple(c) for c in r) for r in g), name)

    @classmethod
    def zero(cls, dim: int, name: str = "") -> "AlgebraTable":
        return cls.from_products(dim, {}, name)

    @property
    def nonzero(self):
        """(i, j, k, gamma) for every nonzero structure constant, 0-based."""
        return self._nonzero

    def products(self) -> Dict[Tuple[int, int], Dict[int, object]]:
        out: Dict[Tuple[int, int], Dict[int, object]] = {}
        for i, j, k, c in self._nonzero:
            out.setdefault((i + 1, j + 1), {})[k + 1] = c
        return out

    @property
    def ring(self) -> Ring | None:
        """Parameter ring of the constants, or None when every constant is rational."""
        for *_, c in self._nonzero:
            if isinstance(c, RationalFunction):
                return c.ring
        return None

    @property
    def is_parametric(self) -> bool:
        return self.ring is not None

    def zero_scalar(self):
        ring = self.ring
        return RationalFunction(ring.zero()) if ring else Fraction(0)

    def basis_vector(self, i: int) -> Element:
        """e_i, 1-based."""
        return tuple(Fraction(1) if k == i - 1 else Fraction(0) for k in range(self.dim))

    def renamed(self, name: str) -> "AlgebraTable":
        return AlgebraTable(self.dim, self.gamma, name)

    def change_basis(self, p) -> "AlgebraTable":
        """Structure constants in the basis e'_i = sum_k p[k][i] e_k."""
        n = self.dim
        pinv = inverse(p)
        cols = [tuple(p[k][i] for k in range(n)) for i in range(n)]
        g = []
        for i in range(n):
            row = []
            for j in range(n):
                prod = multiply(self, cols[i], cols[j])
                row.append(tuple(matmul(pinv, tuple((x,) for x in prod))[k][0] for k in range(n)))
            g.append(tuple(row))
        return AlgebraTable(n, tuple(g), self.name)


def _check_dim(a: AlgebraTable, *vectors):
    for v in vectors:
        if len(v) != a.dim:
            raise DimensionMismatchError(f"element of length {len(v)} in a {a.dim}-dim algebra")


def multiply(a: AlgebraTable, x: Sequence, y: Sequence) -> Element:
    """(x*y)_k = sum_ij x_i y_j gamma^k_ij."""
    _check_dim(a, x, y)
    out = [Fraction(0)] * a.dim
    for i, j, k, c in a.nonzero:
        if x[i] != 0 and y[j] != 0:
            out[k] = out[k] + x[i] * y[j] * c
    return tuple(out)


def is_zero_vector(v) -> bool:
    return all(x == 0 for x in v)


class Violation(NamedTuple):
    i: int
    j: int
    k: int
    residual: Element


def check_associativity(a: AlgebraTable) -> List[Violation]:
    """Triples (1-based) where (e_i e_j) e_k != e_i (e_j e_k), with the difference."""
    n = a.dim
    basis = [a.basis_vector(i) for i in range(1, n + 1)]
    prods = [[multiply(a, basis[i], basis[j]) for j in range(n)] for i in range(n)]
    out = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                left = multiply(a, prods[i][j], basis[k])
                right = multiply(a, basis[i], prods[j][k])
                res = tuple(l - r for l, r in zip(left, right))
                if not is_zero_vector(res):
                    out.append(Violation(i + 1, j + 1, k + 1, res))
    return out


def _annihilator_rows(a: AlgebraTable, hs: Sequence[Sequence]):
    """Linear equations in x expressing x*h = 0 and h*x = 0 for every h."""
    n = a.dim
    rows = []
    for h in hs:
        left = [[Fraction(0)] * n for _ in range(n)]   # (x*h)_k coefficient of x_i
        right = [[Fraction(0)] * n for _ in range(n)]  # (h*x)_k coefficient of x_i
        for i, j, k, c in a.nonzero:
            if h[j] != 0:
                left[k][i] = left[k][i] + h[j] * c
            if h[i] != 0:
                right[k][j] = right[k][j] + h[i] * c
        rows.extend(left)
        rows.extend(right)
    return rows


def centralizer(a: AlgebraTable, hs: Sequence[Sequence]) -> Subspace:
    """{x : x*h = h*x = 0 for all h in hs}."""
    _check_dim(a, *hs)
    rows = _annihilator_rows(a, hs)
    if not rows:
        return Subspace.whole(a.dim)
    return exact_nullspace(rows, a.dim)


def center(a: AlgebraTable) -> Subspace:
    """Two-sided annihilator of the algebra: {x : x*e_j = e_j*x = 0 for all j}."""
    return centralizer(a, [a.basis_vector(j) for j in range(1, a.dim + 1)])


def square(a: AlgebraTable) -> Subspace:
    """A^2, the span of all products e_i*e_j."""
    n = a.dim
    vecs = [tuple(a.gamma[i][j]) for i in range(n) for j in range(n)]
    return Subspace.span(vecs, n)
