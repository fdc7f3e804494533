import pytest

from conftest import ALL_FAMILIES, FINITE_FAMILIES
from csft.csg import Family, compose, reflection
from csft.oracle import (
    SemiconstantMock, broken_compose, enumerate_hom, expected_hom_count, reject_non_admissible,
    verify_balanced, verify_balanced_mock, verify_duality, verify_enumeration,
    verify_factorization_unique, verify_pullback_universal,
)


@pytest.mark.parametrize("fam,n,m,count", [
    ("Cyclic", 0, 0, 1),
    ("Cyclic", 1, 1, 6),
    ("Dihedral", 0, 1, 4),
    ("NCyclic:2", 0, 0, 2),
])
def test_hom_counts(fam, n, m, count):
    f = Family.parse(fam)
    homs = enumerate_hom(f, n, m)
    assert len(homs) == len(set(homs)) == count == expected_hom_count(f, n, m)


def test_dihedral_point_maps():
    # two points of [1], each either way round
    xi = Family.parse("Dihedral")
    homs = enumerate_hom(xi, 0, 1)
    assert sorted((h.sign, h.set_map()[0]) for h in homs) == [(-1, 0), (-1, 1), (1, 0), (1, 1)]


@pytest.mark.parametrize("name", ALL_FAMILIES)
def test_enumeration_and_factorization(name):
    fam = Family.parse(name)
    assert verify_enumeration(fam, 2, 2).passed
    assert verify_factorization_unique(fam, 2, winding=2).passed


def test_corrupted_composition_is_caught():
    for name in ("Cyclic", "NDihedral:2"):
        rep = verify_factorization_unique(Family.parse(name), 2, compose_fn=broken_compose)
        assert not rep.passed


def test_corrupted_factorization_is_caught():
    fam = Family.parse("Dihedral")

    def lazy(f):
        # pretend the group part is a fixed reflection
        r = reflection(fam, f.source)
        return compose(r, f), r

    assert not verify_factorization_unique(fam, 2, factorize_fn=lazy).passed


@pytest.mark.parametrize("name", ["Cyclic", "Dihedral", "NCyclic:2", "Paracyclic"])
def test_pullback_universality(name):
    fam = Family.parse(name)
    for n in range(3):
        for m in range(3):
            assert verify_pullback_universal(fam, n, m, apex=1).passed


@pytest.mark.parametrize("name", ALL_FAMILIES)
def test_non_admissible_cospan_rejected(name):
    fam = Family.parse(name)
    for n in range(3):
        for m in range(3):
            assert reject_non_admissible(fam, n, m)


@pytest.mark.parametrize("name", ALL_FAMILIES)
def test_duality(name):
    fam = Family.parse(name)
    assert verify_duality(fam, 3 if fam.finite else 2).passed


@pytest.mark.parametrize("name", ["Cyclic", "Dihedral", "NCyclic:2", "NCyclic:3", "Paracyclic"])
def test_balanced_families(name):
    assert verify_balanced(Family.parse(name), 3).passed


@pytest.mark.parametrize("name", ["NDihedral:2", "NDihedral:3", "Paradihedral"])
def test_reflected_families_pull_back_the_ends_differently(name):
    # the stabilizer pullback is bijective, but a reflection fixing both
    # ends of [1] pulls back to f at one end and to a rotated f at the other
    rep = verify_balanced(Family.parse(name), 3)
    assert rep.get("stabilizer pullback is bijective").passed
    ends = rep.get("both ends of [1] pull back alike")
    assert not ends.passed
    assert all(v["element"].startswith("(-1,") for v in ends.violations)


def test_semiconstant_mock_fails_only_the_duality_clause():
    rep = verify_balanced_mock(SemiconstantMock(2), 4)
    assert rep.get("stabilizer pullback is bijective").passed
    assert not rep.get("dual of an edge singles out one element").passed


@pytest.mark.parametrize("name", FINITE_FAMILIES)
def test_group_counts_match_the_scan(name):
    fam = Family.parse(name)
    for n in range(3):
        autos = [f for f in enumerate_hom(fam, n, n) if f.is_automorphism()]
        assert len(autos) == fam.group_order(n)
