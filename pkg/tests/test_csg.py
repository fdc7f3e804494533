import pytest
from hypothesis import given, strategies as st

from conftest import ALL_FAMILIES, FINITE_FAMILIES
from csft.csg import (
    CsgMorphism, Family, FiniteGroup, compose, dualize, enumerate_group, factorize, g0_word,
    group_generators, identity, inverse, lambda_map, morphism, omega, omega_pullback, parity,
    point, point_pullback, pullback_along, read_augmentation, augmentation, reflection, rotation,
)
from csft.errors import CompositionError, DomainError, EnumerationError, ValidationError
from csft.oracle import enumerate_hom

LAM = Family.parse("Cyclic")
XI = Family.parse("Dihedral")
LAM2 = Family.parse("NCyclic:2")


# -- examples ------------------------------------------------------------------

def test_identity_is_neutral_on_hom_1_2():
    for f in enumerate_hom(LAM, 1, 2):
        assert compose(f, identity(LAM, 2)) == f
        assert compose(identity(LAM, 1), f) == f


def test_compose_edge_then_rotation():
    f = morphism(LAM, 1, 2, 1, [0, 2])
    t = morphism(LAM, 2, 2, 1, [1, 2, 3])
    assert compose(f, t) == morphism(LAM, 1, 2, 1, [1, 3])


def test_reflection_squares_to_identity():
    r = morphism(XI, 1, 1, -1, [1, 0])
    assert compose(r, r) == identity(XI, 1)


def test_factorize_delta_map_is_trivial():
    phi = morphism(LAM, 2, 3, 1, [0, 2, 2])
    assert factorize(phi) == (phi, identity(LAM, 2))


def test_factorize_rotated_edge():
    f = morphism(LAM, 1, 2, 1, [2, 4])
    assert factorize(f) == (morphism(LAM, 1, 2, 1, [1, 2]), morphism(LAM, 1, 1, 1, [1, 2]))


def test_factorize_reflection():
    f = morphism(XI, 1, 1, -1, [1, 0])
    assert factorize(f) == (identity(XI, 1), morphism(XI, 1, 1, -1, [1, 0]))


def test_pullback_along_reflection():
    phi = morphism(XI, 1, 2, 1, [0, 1])
    g = morphism(XI, 2, 2, -1, [2, 1, 0])
    gphi, phig = pullback_along(phi, g)
    assert gphi == morphism(XI, 1, 2, 1, [1, 2])
    assert phig == morphism(XI, 1, 1, -1, [1, 0])


def test_pullback_rejects_non_delta():
    with pytest.raises(DomainError):
        pullback_along(rotation(LAM, 1, 1), identity(LAM, 1))


def test_omega_pullback_examples():
    assert omega_pullback(identity(LAM, 0), 3) == identity(LAM, 3)
    t = morphism(LAM2, 0, 0, 1, [1])
    assert omega_pullback(t, 1) == morphism(LAM2, 1, 1, 1, [2, 3])
    assert omega_pullback(t, 2) == morphism(LAM2, 2, 2, 1, [3, 4, 5])
    r = morphism(XI, 0, 0, -1, [0])
    assert omega_pullback(r, 1) == morphism(XI, 1, 1, -1, [1, 0])
    assert omega_pullback(r, 2) == morphism(XI, 2, 2, -1, [2, 1, 0])


def test_lambda_examples():
    assert lambda_map(morphism(LAM, 1, 3, 1, [1, 3])).values == (1, 3)
    assert lambda_map(rotation(LAM, 3, 1)).values == (1, 2, 3, 0)
    assert lambda_map(morphism(XI, 3, 3, -1, [3, 2, 1, 0])).values == (3, 2, 1, 0)


def test_dualize_examples():
    assert dualize(identity(LAM, 3)) == identity(LAM, 3)
    # the adjoint formula fixes rotations
    for r in range(3):
        assert dualize(rotation(LAM, 2, r)) == rotation(LAM, 2, r)
    for n in range(1, 5):
        for i in range(1, n + 1):
            d = dualize(morphism(LAM, 1, n, 1, (i - 1, i)))
            values = d.set_map()
            alone = n + 1 - i
            assert [k for k, v in enumerate(values) if v == values[alone]] == [alone]


def test_parity():
    assert parity(identity(XI, 0)) == "even"
    assert parity(reflection(XI, 0)) == "odd"
    assert all(parity(t) == "even" for t in enumerate_group(Family.parse("NCyclic:3"), 0))


@pytest.mark.parametrize("fam,n,size", [("Cyclic", 2, 3), ("NDihedral:3", 1, 12)])
def test_group_order_examples(fam, n, size):
    assert len(enumerate_group(Family.parse(fam), n)) == size


def test_companion_group_order():
    fam = Family.parse("Cyclic", FiniteGroup.cyclic(2))
    assert len(enumerate_group(fam, 0)) == 2


def test_para_enumeration_needs_bound():
    with pytest.raises(EnumerationError):
        enumerate_group(Family.parse("Paracyclic"), 1)


def test_validation_errors():
    with pytest.raises(ValidationError):
        morphism(LAM, 1, 2, 1, [2, 0])
    with pytest.raises(ValidationError):
        morphism(LAM, 1, 2, -1, [2, 0])
    with pytest.raises(ValidationError):
        morphism(LAM, 1, 1, 1, [0, 3])
    with pytest.raises(CompositionError):
        compose(identity(LAM, 1), identity(LAM, 2))
    with pytest.raises(CompositionError):
        compose(identity(LAM, 1), identity(XI, 1))


def test_json_round_trip():
    fam = Family.parse("NCyclic:3")
    f = morphism(fam, 1, 2, 1, [0, 2])
    obj = f.to_json()
    assert obj["family"] == {"kind": "NCyclic", "N": 3, "H": None}
    assert CsgMorphism.from_json(obj) == f


def test_augmentation_round_trip():
    for fam in (XI, LAM2):
        for t in enumerate_group(fam, 0):
            for n in range(3):
                for slot in range(n + 1):
                    for side in (0, 1):
                        assert read_augmentation(augmentation(fam, n, slot, side, t), slot) == (side, t)


def test_g0_word():
    fam = Family.parse("NDihedral:3")
    t = morphism(fam, 0, 0, -1, [2])
    assert g0_word(t) == (2, 1, 0)
    assert compose(reflection(fam, 0), rotation(fam, 0, 2)) == t


# -- properties ----------------------------------------------------------------

@st.composite
def hom_element(draw, fam, n, m):
    homs = enumerate_hom(fam, n, m, 1)
    return draw(st.sampled_from(homs))


@st.composite
def composable_triple(draw):
    fam = Family.parse(draw(st.sampled_from(ALL_FAMILIES)))
    a, b, c, d = (draw(st.integers(0, 3)) for _ in range(4))
    return (draw(hom_element(fam, a, b)), draw(hom_element(fam, b, c)),
            draw(hom_element(fam, c, d)))


@given(composable_triple())
def test_composition_is_associative(fgh):
    f, g, h = fgh
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


@given(composable_triple())
def test_factorization_recomposes(fgh):
    f = fgh[0]
    phi, g = factorize(f)
    assert phi.in_delta() and g.is_automorphism()
    assert compose(g, phi) == f


@given(composable_triple())
def test_lambda_is_a_functor(fgh):
    f, g, _ = fgh
    assert lambda_map(compose(f, g)) == lambda_map(f).then(lambda_map(g))


@given(composable_triple())
def test_duality_is_contravariant_involution(fgh):
    f, g, _ = fgh
    assert dualize(dualize(f)) == f
    assert dualize(compose(f, g)) == compose(dualize(g), dualize(f))


@st.composite
def group_pair(draw):
    fam = Family.parse(draw(st.sampled_from(ALL_FAMILIES)))
    pool = enumerate_group(fam, 0, None if fam.finite else 2)
    return draw(st.sampled_from(pool)), draw(st.sampled_from(pool)), draw(st.integers(0, 4))


@given(group_pair())
def test_omega_pullback_is_injective_homomorphism(data):
    s, t, n = data
    assert omega_pullback(compose(s, t), n) == compose(omega_pullback(s, n), omega_pullback(t, n))
    if s != t:
        assert omega_pullback(s, n) != omega_pullback(t, n)


@given(group_pair())
def test_inverse(data):
    s, _, _ = data
    assert compose(s, inverse(s)) == identity(s.family, 0)


@pytest.mark.parametrize("name", FINITE_FAMILIES)
def test_generators_generate(name):
    fam = Family.parse(name)
    for n in range(4):
        group = set(enumerate_group(fam, n))
        seen = {identity(fam, n)}
        frontier = list(seen)
        gens = group_generators(fam, n)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        assert seen == group


@pytest.mark.parametrize("name", FINITE_FAMILIES)
def test_point_pullback_on_stabilizers_is_bijective(name):
    fam = Family.parse(name)
    g0 = set(enumerate_group(fam, 0))
    for n in range(4):
        for i in range(n + 1):
            stab = [g for g in enumerate_group(fam, n) if lambda_map(g)(i) == i]
            assert {point_pullback(g, i) for g in stab} == g0
            assert len(stab) == len(g0)


def test_point_and_omega_shapes():
    assert point(LAM, 3, 2).lift == (2,)
    assert omega(LAM, 3).lift == (0, 0, 0, 0)
