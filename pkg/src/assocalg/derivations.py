"""Derivation algebras via the Leibniz linear system.

Unknowns are the entries d_ab of D (D(e_b) = sum_a d_ab e_a), ordered
column-major: d_11, d_21, ..., d_n1, d_12, ...  so vector index a + n*b.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Tuple

from .algebra import AlgebraTable, center, check_associativity, is_zero_vector, multiply, square
from .errors import DegenerateParameterError, DimensionMismatchError
from .linalg import Subspace, exact_nullspace, mat_to_vec, matmul, matsub, vec_to_mat
from .scalars import ALPHA, MultiPoly, RationalFunction


@dataclass(frozen=True)
class LeibnizSystem:
    """n^3 x n^2 coefficient matrix; row (i, j, t) sits at index (i*n + j)*n + t."""

    n: int
    rows: Tuple[Tuple[object, ...], ...]

    def row(self, i: int, j: int, t: int):
        """Row for the e_t component of the rule on (e_i, e_j); 1-based."""
        n = self.n
        return self.rows[((i - 1) * n + (j - 1)) * n + (t - 1)]


def unknown_index(a: int, b: int, n: int) -> int:
    """Column of d_ab (1-based indices)."""
    return (a - 1) + n * (b - 1)


def build_leibniz_system(a: AlgebraTable) -> LeibnizSystem:
    """Rows encode sum_k g^k_ij d_tk - sum_k (d_ki g^t_kj + d_kj g^t_ik) = 0."""
    if check_associativity(a):
        warnings.warn(f"algebra {a.name or '<unnamed>'} is not associative", stacklevel=2)
    n = a.dim
    g = a.gamma
    rows = []
    for i in range(n):
        for j in range(n):
            for t in range(n):
                row = [Fraction(0)] * (n * n)
                for k in range(n):
                    if g[i][j][k] != 0:
                        row[t + n * k] = row[t + n * k] + g[i][j][k]
                    if g[k][j][t] != 0:
                        row[k + n * i] = row[k + n * i] - g[k][j][t]
                    if g[i][k][t] != 0:
                        row[k + n * j] = row[k + n * j] - g[i][k][t]
                rows.append(tuple(row))
    return LeibnizSystem(n, tuple(rows))


@dataclass(frozen=True)
class DerivationBasis:
    n: int
    space: Subspace
    # pivots met while solving over Q(alpha); specialising alpha at one of
    # their zeros or poles leaves the generic branch
    generic_conditions: Tuple[object, ...] = ()

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def mats(self):
        return [vec_to_mat(v, self.n) for v in self.space.basis]

    def specialize(self, alpha_value) -> List[tuple]:
        """Basis matrices at alpha = ``alpha_value``; degenerate values are rejected."""
        value = Fraction(alpha_value)
        for cond in self.generic_conditions:
            if not isinstance(cond, RationalFunction):
                continue
            for poly in (cond.num, cond.den):
                if ALPHA in poly.ring.names and not poly.is_constant():
                    if poly.evaluate({ALPHA: value}) == 0:
                        raise DegenerateParameterError(
                            f"alpha = {value} is a root of {poly}; generic solution does not apply")
        out = []
        for m in self.mats:
            out.append(tuple(tuple(_eval_alpha(x, value) for x in row) for row in m))
        return out


def _eval_alpha(x, value):
    if isinstance(x, (RationalFunction, MultiPoly)):
        try:
            return Fraction(x.evaluate({ALPHA: value}))
        except ZeroDivisionError:
            raise DegenerateParameterError(f"alpha = {value} is a pole of {x}") from None
    return x


def exact_nullspace_of(system: LeibnizSystem, pivot_log=None) -> Subspace:
    return exact_nullspace(system.rows, system.n ** 2, pivot_log=pivot_log)


def derivation_basis(a: AlgebraTable) -> DerivationBasis:
    system = build_leibniz_system(a)
    log: list = []
    space = exact_nullspace_of(system, log)
    conditions = tuple(p for p in log if isinstance(p, RationalFunction) and not p.is_constant())
    return DerivationBasis(a.dim, space, conditions)


class DerivationCheck(NamedTuple):
    ok: bool
    # residual[i][j] = D(e_i e_j) - D(e_i) e_j - e_i D(e_j), 0-based
    residual: Tuple[Tuple[tuple, ...], ...]


def apply(mat, v):
    n = len(mat)
    return tuple(sum((mat[r][c] * v[c] for c in range(n) if v[c] != 0), Fraction(0))
                 for r in range(n))


def is_derivation(a: AlgebraTable, d) -> DerivationCheck:
    n = a.dim
    if len(d) != n or any(len(r) != n for r in d):
        raise DimensionMismatchError(f"expected a {n}x{n} matrix")
    basis = [a.basis_vector(i) for i in range(1, n + 1)]
    images = [apply(d, e) for e in basis]
    residual = []
    ok = True
    for i in range(n):
        row = []
        for j in range(n):
            lhs = apply(d, multiply(a, basis[i], basis[j]))
            r1 = multiply(a, images[i], basis[j])
            r2 = multiply(a, basis[i], images[j])
            res = tuple(x - y - z for x, y, z in zip(lhs, r1, r2))
            ok = ok and is_zero_vector(res)
            row.append(res)
        residual.append(tuple(row))
    return DerivationCheck(ok, tuple(residual))


def commutator(d1, d2):
    return matsub(matmul(d1, d2), matmul(d2, d1))


def central_derivations(a: AlgebraTable, within_derivations: bool = False) -> Subspace:
    """{phi in End(A) : phi(A) in Z(A), phi(A^2) = 0}; optionally intersected with Der(A)."""
    n = a.dim
    z_perp = center(a).annihilator()
    rows = []
    # w . phi(e_j) = 0 for every w in Z^perp
    for w in z_perp.basis:
        for j in range(n):
            row = [Fraction(0)] * (n * n)
            for r in range(n):
                row[r + n * j] = w[r]
            rows.append(tuple(row))
    # phi(s) = 0 for s spanning A^2
    for s in square(a).basis:
        for r in range(n):
            row = [Fraction(0)] * (n * n)
            for k in range(n):
                row[r + n * k] = s[k]
            rows.append(tuple(row))
    space = exact_nullspace(rows, n * n) if rows else Subspace.whole(n * n)
    if within_derivations:
        space = space.intersect(derivation_basis(a).space)
    return space


def as_subspace(mats, n: int) -> Subspace:
    return Subspace.span([mat_to_vec(m) for m in mats], n * n)
