from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from assocalg.linalg import (Subspace, det, exact_nullspace, identity, inverse, mat_to_vec,
                             matmul, rank, rref, vec_to_mat)

entries = st.integers(-3, 3).map(Fraction)


def matrices(rows, cols):
    return st.lists(st.lists(entries, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def test_nullspace_identity_and_zero():
    eye = identity(4)
    assert exact_nullspace(eye, 4).dim == 0
    zero = [[Fraction(0)] * 4 for _ in range(4)]
    assert exact_nullspace(zero, 4) == Subspace.whole(4)


def test_rref_pivot_rule():
    rows, piv = rref([[0, 2, 4], [1, 1, 1], [1, 3, 5]], 3)
    assert piv == [0, 1]
    assert rows == [(1, 0, -1), (0, 1, 2)]
    assert all(isinstance(x, Fraction) for r in rows for x in r)


@settings(max_examples=100, deadline=None)
@given(matrices(4, 5))
def test_rank_and_nullity_match_sympy(m):
    assert rank(m, 5) == sympy.Matrix(m).rank()
    ns = exact_nullspace(m, 5)
    assert ns.dim == 5 - sympy.Matrix(m).rank()
    for v in ns.basis:
        assert all(sum(r[i] * v[i] for i in range(5)) == 0 for r in m)


@settings(max_examples=100, deadline=None)
@given(matrices(3, 4), matrices(3, 4))
def test_subspace_equality_is_structural(m1, m2):
    s = Subspace.span(m1, 4)
    # same span, different generators
    mixed = [[a + b for a, b in zip(m1[0], m1[1])]] + m1
    assert Subspace.span(mixed, 4) == s
    both = s + Subspace.span(m2, 4)
    assert s.issubspace(both)
    inter = s.intersect(Subspace.span(m2, 4))
    assert inter.issubspace(s)
    assert inter.dim + both.dim == s.dim + Subspace.span(m2, 4).dim


@settings(max_examples=60, deadline=None)
@given(matrices(3, 3))
def test_det_and_inverse(m):
    d = det(m)
    assert d == Fraction(int(sympy.Matrix(m).det()))
    if d != 0:
        assert matmul(m, inverse(m)) == identity(3)


def test_vec_roundtrip_column_major():
    m = ((1, 2), (3, 4))
    assert mat_to_vec(m) == (1, 3, 2, 4)
    assert vec_to_mat(mat_to_vec(m), 2) == m
