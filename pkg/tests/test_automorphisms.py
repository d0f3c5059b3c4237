from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from assocalg.algebra import AlgebraTable
from assocalg.automorphisms import (Status, closure_spot_check, hom_residual, is_automorphism,
                                    jacobian_at_identity, systems_equivalent, tangent_dim,
                                    verify_family)
from assocalg.catalog import load_catalog
from assocalg.catalog.formats import parse_family
from assocalg.derivations import build_leibniz_system, derivation_basis
from assocalg.errors import MalformedFamilyError
from assocalg.linalg import det, matmul
from conftest import PROOF_TABLES, random_associative_table, table

AS21_FAMILY = """family As_2^1 dim 2
row: a11, 0
row: a21, a11^2
nonzero: a11
"""


def test_residual_examples(as21):
    res = hom_residual(as21, ((1, 0), (0, 2)))
    # f(e1)^2 = e2 while f(e1 e1) = f(e2) = 2 e2
    assert res[0][0] == (0, -1)
    assert is_automorphism(as21, ((3, 0), (5, 9)))
    assert not is_automorphism(as21, ((0, 0), (0, 0)))
    assert not is_automorphism(as21, ((1, 0), (0, 2)))


def test_symbolic_residual(as21):
    fam = parse_family("family X dim 2\nrow: a11, 0\nrow: a21, a22\nnonzero: a11\nnonzero: a22\n")
    res = hom_residual(as21, fam.entries)
    a11, a22 = fam.ring.gen("a11"), fam.ring.gen("a22")
    assert res[0][0][1] == a11 ** 2 - a22
    assert res[0][0][0] == 0
    assert res[1][1] == (0, 0)


def test_identity_is_automorphism(fixture_table):
    n = fixture_table.dim
    eye = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    assert is_automorphism(fixture_table, eye)


def test_verify_printed_families():
    cat = {e.name: e for e in load_catalog()}
    for name in PROOF_TABLES:
        for fam in cat[name].expected_aut:
            assert verify_family(table(name), fam).status is Status.VERIFIED, name


def test_corrupted_family_fails(as21):
    bad = parse_family(AS21_FAMILY.replace("a11^2", "a11^3"))
    verdict = verify_family(as21, bad)
    assert verdict.status is Status.FAILED
    assert verdict.entry == (1, 1, 2)
    assert verdict.witness == {"a11": Fraction(2), "a21": Fraction(2)}
    assert "FAILED" in verdict.describe()


def test_singular_family_fails(as21):
    fam = parse_family("family Z dim 2\nrow: 0, 0\nrow: 0, 0\n")
    assert verify_family(as21, fam).status is Status.FAILED


def test_uncovered_denominator_is_malformed(as21):
    fam = parse_family("family Z dim 2\nrow: 1/a11, 0\nrow: 0, 1\n")
    with pytest.raises(MalformedFamilyError):
        verify_family(as21, fam)


def test_unverifiable_family():
    cat = {e.name: e for e in load_catalog()}
    fam = cat["As_4^16"].expected_aut[0]
    assert verify_family(table("As_4^4"), fam).status is Status.UNVERIFIABLE


def test_constrained_family(as21):
    # a22 is tied to a11 by an equation instead of being substituted in the rows
    text = ("family C dim 2\nrow: a11, 0\nrow: a21, a22\nnonzero: a11\n"
            "require: a22 - a11^2 = 0\n")
    assert verify_family(as21, parse_family(text)).status is Status.VERIFIED
    loose = parse_family(text.replace("require: a22 - a11^2 = 0\n", "nonzero: a22\n"))
    assert verify_family(as21, loose).status is Status.FAILED


def test_renaming_invariance(as21):
    fam = parse_family(AS21_FAMILY)
    renamed = fam.renamed_params({"a11": "x", "a21": "y"})
    assert verify_family(as21, renamed).status is Status.VERIFIED
    broken = parse_family(AS21_FAMILY.replace("a11^2", "a11"))
    assert (verify_family(as21, broken).status
            == verify_family(as21, broken.renamed_params({"a11": "x"})).status)


def test_closure(as21, as38):
    assert closure_spot_check(as21, parse_family(AS21_FAMILY))
    eye = parse_family("family I dim 3\nrow: 1, 0, 0\nrow: 0, 1, 0\nrow: 0, 0, 1\n")
    assert closure_spot_check(as38, eye)


def test_tangent_matches_derivations(fixture_table):
    assert tangent_dim(fixture_table) == derivation_basis(fixture_table).dim
    jac = jacobian_at_identity(fixture_table)
    assert systems_equivalent(jac, build_leibniz_system(fixture_table).rows)


@pytest.mark.parametrize("seed", range(0, 100, 5))
def test_tangent_random(seed):
    a = random_associative_table(seed)
    assert tangent_dim(a) == derivation_basis(a).dim


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4),
       st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_product_of_automorphisms(x, y):
    a = table("As_2^1")
    f = ((x[0] or 1, 0), (x[1], (x[0] or 1) ** 2))
    g = ((y[0] or 1, 0), (y[1], (y[0] or 1) ** 2))
    assert is_automorphism(a, f) and is_automorphism(a, g)
    assert is_automorphism(a, matmul(f, g))
    assert det(matmul(f, g)) != 0


def test_zero_algebra_every_invertible_matrix():
    z = AlgebraTable.zero(2)
    assert is_automorphism(z, ((1, 2), (3, 4)))
    assert not is_automorphism(z, ((1, 2), (2, 4)))
