import pytest

from cfk11 import (FamilySpec, LaurentPolynomial, UnknownName, build_test_knot, oracle_alexander,
                   oracle_determinant, oracle_hfk)
from cfk11.families import family_labels, staircase_steps
from cached import family_complex
from reference_tables import general_3k1, general_3k2, general_3k2_as_printed, general_alexander

SMALL = [(v, k, n) for v in ("3k+1", "3k+2") for k in (1, 2, 3) for n in (1, 2)]


def test_spec_validation():
    with pytest.raises(ValueError):
        FamilySpec("3k", 1, 1)
    with pytest.raises(ValueError):
        FamilySpec("3k+1", 0, 1)
    assert FamilySpec("3k+1", 2, 0).q == 7 and FamilySpec("3k+2", 2, 0).q == 8


def test_unknown_test_knot():
    with pytest.raises(UnknownName):
        build_test_knot("cinquefoil")


def test_oracle_examples():
    assert oracle_determinant(FamilySpec("3k+1", 1, 1)) == 7
    assert oracle_determinant(FamilySpec("3k+2", 1, 1)) == 5
    assert oracle_hfk(FamilySpec("3k+2", 1, 1))[(0, 4)] == 2
    assert oracle_alexander(FamilySpec("3k+1", 1, 1)) == LaurentPolynomial.from_list(
        -4, [-1, 3, -2, -1, 3, -1, -2, 3, -1])


@pytest.mark.parametrize("variant", ["3k+1", "3k+2"])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_oracles_agree_with_each_other(variant, k, n):
    spec = FamilySpec(variant, k, n)
    poly = oracle_alexander(spec)
    assert abs(poly(-1)) == oracle_determinant(spec)
    assert poly(1) == 1 and poly.is_symmetric()
    ranks = oracle_hfk(spec)
    assert sum(ranks.values()) == spec.generator_count
    euler = {}
    for (d, i), r in ranks.items():
        euler[i] = euler.get(i, 0) + (-1) ** (d % 2) * r
    assert LaurentPolynomial(euler) == poly


def test_torus_knot_staircase_steps():
    assert staircase_steps(2, 3) == [1, 1]
    assert staircase_steps(3, 4) == [1, 2, 2, 1]
    assert staircase_steps(3, 5) == [1, 2, 1, 1, 2, 1]


@pytest.mark.parametrize("variant,k,n", SMALL)
def test_general_disk_lists(variant, k, n):
    c = family_complex(variant, k, n)
    ref = general_3k1(k, n) if variant == "3k+1" else general_3k2(k, n)
    assert c.arrow_set() == {(f, t, *m) for f, t, m in ref}


def test_printed_3k2_list_differs_only_by_the_known_misprints():
    c = family_complex("3k+2", 2, 1)
    printed = {(f, t, *m) for f, t, m in general_3k2_as_printed(2, 1)}
    assert c.arrow_set() != printed
    assert c.arrow_set() == {(f, t, *m) for f, t, m in general_3k2(2, 1)}


@pytest.mark.parametrize("variant,k,n", SMALL)
def test_general_alexander_tables(variant, k, n):
    c = family_complex(variant, k, n)
    for l, a in zip(c.labels, c.A):
        assert a == general_alexander(variant, l), l


def test_labels_are_distinct():
    for v in ("3k+1", "3k+2"):
        for k in (1, 2, 3):
            for n in range(4):
                spec = FamilySpec(v, k, n)
                labels = family_labels(spec)
                assert len(set(labels)) == len(labels) == spec.generator_count
