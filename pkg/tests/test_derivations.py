from fractions import Fraction

import pytest

from assocalg.algebra import AlgebraTable
from assocalg.census import nullity_mod_p
from assocalg.derivations import (build_leibniz_system, central_derivations, commutator,
                                  derivation_basis, is_derivation, unknown_index)
from assocalg.errors import DegenerateParameterError
from assocalg.linalg import Subspace, mat_to_vec
from assocalg.scalars import RationalFunction, Ring
from conftest import random_associative_table

F = Fraction


def brute_derivation_dim(a: AlgebraTable) -> int:
    """Oracle: build the linear map D -> Leibniz residual column by column and take sympy's rank."""
    import sympy
    n = a.dim
    cols = []
    for idx in range(n * n):
        d = [[F(0)] * n for _ in range(n)]
        d[idx % n][idx // n] = F(1)
        res = is_derivation(a, d).residual
        cols.append([x for row in res for v in row for x in v])
    return n * n - sympy.Matrix(cols).T.rank()


def test_leibniz_shape_and_as21(as21):
    sys = build_leibniz_system(as21)
    assert len(sys.rows) == 8 and all(len(r) == 4 for r in sys.rows)
    basis = derivation_basis(as21)
    assert basis.dim == 2
    # d12 = 0 and d22 = 2 d11 on every solution
    for m in basis.mats:
        assert m[0][1] == 0
        assert m[1][1] == 2 * m[0][0]
    assert basis.space == Subspace.span([mat_to_vec(((1, 0), (0, 2))),
                                         mat_to_vec(((0, 0), (1, 0)))], 4)


def test_unknown_ordering():
    assert unknown_index(1, 1, 3) == 0
    assert unknown_index(2, 1, 3) == 1
    assert unknown_index(1, 2, 3) == 3


def test_zero_algebra_has_no_constraints():
    sys = build_leibniz_system(AlgebraTable.zero(2))
    assert all(x == 0 for r in sys.rows for x in r)
    assert derivation_basis(AlgebraTable.zero(3)).dim == 9


def test_as31_constraints(as31):
    basis = derivation_basis(as31)
    assert basis.dim == 4
    for m in basis.mats:
        assert m[0][1] == m[0][2] == m[2][0] == m[2][1] == 0
        assert m[2][2] == m[1][1] - m[0][0]


def test_as38(as38):
    basis = derivation_basis(as38)
    assert basis.dim == 3
    for m in basis.mats:
        assert all(x == 0 for x in m[2])
        assert m[0][1] == m[0][2] == m[1][0] == 0


def test_is_derivation_examples(as21):
    assert is_derivation(as21, ((1, 0), (0, 2))).ok
    assert is_derivation(as21, ((0, 0), (0, 0))).ok
    check = is_derivation(as21, ((1, 0), (0, 1)))
    assert not check.ok
    assert check.residual[0][0] == (0, -1)


def test_central_derivation_examples(as21, as38):
    assert central_derivations(AlgebraTable.zero(2)).dim == 4
    c = central_derivations(as21)
    assert c == Subspace.span([mat_to_vec(((0, 0), (1, 0)))], 4)
    assert central_derivations(as38).dim == 0


def test_central_within_derivations(fixture_table):
    inside = central_derivations(fixture_table, within_derivations=True)
    assert inside.issubspace(derivation_basis(fixture_table).space)
    assert inside.issubspace(central_derivations(fixture_table))


def test_basis_satisfies_leibniz(fixture_table):
    for m in derivation_basis(fixture_table).mats:
        assert is_derivation(fixture_table, m).ok


def test_lie_closure(fixture_table):
    mats = derivation_basis(fixture_table).mats
    for d1 in mats:
        for d2 in mats:
            assert is_derivation(fixture_table, commutator(d1, d2)).ok


@pytest.mark.parametrize("seed", range(0, 100, 7))
def test_dimension_matches_oracle(seed):
    a = random_associative_table(seed)
    assert derivation_basis(a).dim == brute_derivation_dim(a)


@pytest.mark.parametrize("seed", range(10))
def test_basis_change_invariance(seed):
    a = random_associative_table(seed, max_dim=3, conjugate=False)
    p = [[F(0)] * a.dim for _ in range(a.dim)]
    for i in range(a.dim):
        p[i][i] = F(seed % 3 + 1)
        if i + 1 < a.dim:
            p[i][i + 1] = F(1, 2)
    b = a.change_basis(tuple(tuple(r) for r in p))
    assert derivation_basis(a).dim == derivation_basis(b).dim


@pytest.mark.parametrize("p", [5, 7, 11])
def test_nullity_mod_p_matches_rational(fixture_table, p):
    sys = build_leibniz_system(fixture_table)
    n = fixture_table.dim
    assert nullity_mod_p(sys.rows, n * n, p) == derivation_basis(fixture_table).dim


def test_non_associative_warns():
    broken = AlgebraTable.from_products(2, {(1, 1): {2: 1}, (2, 1): {1: 1}})
    with pytest.warns(UserWarning):
        build_leibniz_system(broken)


def _alpha_table():
    ring = Ring.of(["alpha"])
    alpha = ring.gen("alpha")
    # one nilpotent product whose coefficient vanishes at alpha = 1
    return AlgebraTable.from_products(2, {(1, 1): {2: RationalFunction(alpha - 1)}}, "alpha-table")


def test_parametric_table_generic_and_degenerate():
    a = _alpha_table()
    basis = derivation_basis(a)
    assert basis.dim == 2
    for m in basis.mats:
        assert is_derivation(a, m).ok
    mats = basis.specialize(3)
    assert len(mats) == 2
    with pytest.raises(DegenerateParameterError):
        basis.specialize(1)
