from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from assocalg.algebra import (AlgebraTable, center, centralizer, check_associativity, multiply,
                              square)
from assocalg.errors import DimensionMismatchError
from assocalg.linalg import Subspace
from conftest import PROOF_TABLES, random_associative_table, table

scalars = st.fractions(min_value=-5, max_value=5, max_denominator=5)


def test_multiply_examples(as21, as38):
    e1, e2 = as21.basis_vector(1), as21.basis_vector(2)
    assert multiply(as21, e1, e1) == e2
    e3 = as38.basis_vector(3)
    assert multiply(as38, e3, e3) == e3
    assert multiply(as21, (0, 0), e2) == (0, 0)


def test_multiply_dimension_mismatch(as21):
    with pytest.raises(DimensionMismatchError):
        multiply(as21, (1, 0, 0), (1, 0))


def test_dim_bound():
    with pytest.raises(ValueError):
        AlgebraTable.zero(17)


def test_fixtures_are_associative(fixture_table):
    assert check_associativity(fixture_table) == []


def test_zero_algebra_associative():
    assert check_associativity(AlgebraTable.zero(3)) == []


def test_broken_table_violation():
    broken = AlgebraTable.from_products(2, {(1, 1): {2: 1}, (2, 1): {1: 1}})
    violations = check_associativity(broken)
    first = violations[0]
    assert (first.i, first.j, first.k) == (1, 1, 1)
    # (e1 e1) e1 = e2 e1 = e1 while e1 (e1 e1) = e1 e2 = 0
    assert first.residual == (1, 0)


def test_center_examples(as21, as38):
    assert center(AlgebraTable.zero(2)).dim == 2
    assert center(as38).dim == 0
    assert center(as21) == Subspace.span([(0, 1)], 2)


def test_centralizer_examples(as21):
    assert centralizer(as21, []) == Subspace.whole(2)
    assert centralizer(as21, [as21.basis_vector(2)]) == Subspace.whole(2)


def test_centralizer_of_basis_is_center(fixture_table):
    a = fixture_table
    basis = [a.basis_vector(i) for i in range(1, a.dim + 1)]
    assert centralizer(a, basis) == center(a)


def test_square(as21):
    assert square(as21) == Subspace.span([(0, 1)], 2)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(PROOF_TABLES)), st.data())
def test_bilinearity(name, data):
    a = table(name)
    n = a.dim
    vec = st.lists(scalars, min_size=n, max_size=n)
    x, y, z = data.draw(vec), data.draw(vec), data.draw(vec)
    s, t = data.draw(scalars), data.draw(scalars)
    comb = [s * xi + t * yi for xi, yi in zip(x, y)]
    left = multiply(a, comb, z)
    expect = [s * u + t * v for u, v in zip(multiply(a, x, z), multiply(a, y, z))]
    assert list(left) == expect
    right = multiply(a, z, comb)
    expect = [s * u + t * v for u, v in zip(multiply(a, z, x), multiply(a, z, y))]
    assert list(right) == expect


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(PROOF_TABLES)), st.data())
def test_centralizer_union_is_intersection(name, data):
    a = table(name)
    n = a.dim
    vec = st.lists(scalars, min_size=n, max_size=n)
    h1 = data.draw(st.lists(vec, min_size=1, max_size=2))
    h2 = data.draw(st.lists(vec, min_size=1, max_size=2))
    both = centralizer(a, h1 + h2)
    assert both == centralizer(a, h1).intersect(centralizer(a, h2))
    assert center(a).issubspace(both)


@pytest.mark.parametrize("seed", range(20))
def test_random_tables_associative(seed):
    assert check_associativity(random_associative_table(seed)) == []


def test_change_basis_roundtrip(as38):
    p = ((Fraction(1), Fraction(1), Fraction(0)),
         (Fraction(0), Fraction(2), Fraction(0)),
         (Fraction(1), Fraction(0), Fraction(1)))
    b = as38.change_basis(p)
    assert check_associativity(b) == []
    assert center(b).dim == center(as38).dim
