import random

import pytest
from hypothesis import given, strategies as st

from conftest import ALL_FAMILIES, FINITE_FAMILIES
from csft.csg import Family, compose, enumerate_group, identity, reflection, rotation
from csft.errors import DomainError
from csft.operad import (
    OperadElement, WreathElement, act_sigma, compute_chi2, compute_eta, enumerate_p1,
    eta_by_action, operad_compose, p1_iso, p1_iso_inverse, reidentify_twist,
    standard_multiplication, unary,
)


def _fam(name):
    return Family.parse(name)


def _group(fam, n):
    return enumerate_group(fam, n, None if fam.finite else 1)


def random_element(fam, rng, n):
    slots = list(range(1, n + 1))
    rng.shuffle(slots)
    pool = _group(fam, 0)
    return OperadElement(fam, tuple(slots), tuple(rng.choice(pool) for _ in range(n)))


@pytest.mark.parametrize("name", ALL_FAMILIES)
def test_standard_multiplications_compose(name):
    fam = _fam(name)
    for a in range(1, 4):
        for b in range(1, 4):
            for i in range(1, a + 1):
                got = operad_compose(standard_multiplication(fam, a), i, standard_multiplication(fam, b))
                assert got == standard_multiplication(fam, a + b - 1)


@pytest.mark.parametrize("name", ALL_FAMILIES)
def test_m1_is_the_unit(name):
    fam = _fam(name)
    one = standard_multiplication(fam, 1)
    assert one == unary(identity(fam, 0))
    rng = random.Random(7)
    for _ in range(20):
        x = random_element(fam, rng, rng.randint(1, 3))
        assert operad_compose(one, 1, x) == x
        for i in range(1, x.arity + 1):
            assert operad_compose(x, i, one) == x


def test_standard_multiplication_rejects_arity_zero():
    with pytest.raises(DomainError):
        standard_multiplication(_fam("Cyclic"), 0)


@pytest.mark.parametrize("name", ALL_FAMILIES)
def test_unary_part_matches_g0(name):
    fam = _fam(name)
    p1 = enumerate_p1(fam, None if fam.finite else 1)
    g0 = _group(fam, 0)
    assert len(set(p1)) == len(p1) == len(g0)
    assert {p1_iso(x) for x in p1} == set(g0)
    for x in p1:
        assert p1_iso_inverse(p1_iso(x)) == x
    for a in g0:
        for b in g0:
            # feeding b into a composes the twists b-side first
            assert p1_iso(operad_compose(unary(a), 1, unary(b))) == compose(b, a)


def test_unary_part_of_ncyclic_3_has_three_elements():
    assert len(enumerate_p1(_fam("NCyclic:3"))) == 3


def test_chi2_examples():
    xi = _fam("Dihedral")
    f = reflection(xi, 0)
    assert compute_chi2(f) == WreathElement((f, f), (1, 0))
    assert compute_chi2(identity(xi, 0)) == WreathElement.identity(xi, 2)
    for n in (2, 3):
        lam = _fam(f"NCyclic:{n}")
        r = rotation(lam, 0, 1)
        assert compute_chi2(r) == WreathElement((r, r), (0, 1))


@pytest.mark.parametrize("name", ALL_FAMILIES)
def test_chi2_is_a_homomorphism(name):
    fam = _fam(name)
    g0 = _group(fam, 0)
    for a in g0:
        for b in g0:
            assert compute_chi2(compose(a, b)) == compute_chi2(b) * compute_chi2(a)


@pytest.mark.parametrize("name", ALL_FAMILIES)
def test_eta_routes_agree(name):
    fam = _fam(name)
    for n in range(4):
        for g in _group(fam, n):
            assert compute_eta(n, g) == eta_by_action(n, g).map_twists(reidentify_twist)


@pytest.mark.parametrize("name", FINITE_FAMILIES)
def test_eta_is_a_homomorphism(name):
    fam = _fam(name)
    for n in range(3):
        group = _group(fam, n)
        for a in group:
            for b in group:
                assert eta_by_action(n, compose(a, b)) == eta_by_action(n, b) * eta_by_action(n, a)


def test_eta_of_rotation_is_a_cycle():
    for name, wrap in (("Cyclic", 0), ("NCyclic:2", 1), ("NCyclic:3", 1), ("NDihedral:2", 1)):
        fam = _fam(name)
        for n in range(1, 4):
            w = compute_eta(n, rotation(fam, n, 1))
            assert w.perm == tuple(list(range(1, n + 1)) + [0])
            assert w.twists[0] == rotation(fam, 0, wrap)
            assert all(t == identity(fam, 0) for t in w.twists[1:])


def test_eta_of_reflection():
    xi = _fam("Dihedral")
    f = reflection(xi, 0)
    assert compute_eta(2, reflection(xi, 2, 0)) == WreathElement((f, f, f), (0, 2, 1))
    nd = _fam("NDihedral:2")
    f = reflection(nd, 0)
    rf = compose(f, rotation(nd, 0, 1))
    g = reflection(nd, 2, 0)
    # the two routes differ by the re-identification of G_0 at the vertex
    assert compute_eta(2, g) == WreathElement((f, rf, rf), (0, 2, 1))
    assert eta_by_action(2, g) == WreathElement((rf, f, f), (0, 2, 1))


# -- properties ------------------------------------------------------------------

@st.composite
def triple(draw):
    fam = _fam(draw(st.sampled_from(ALL_FAMILIES)))
    rng = random.Random(draw(st.integers(0, 2 ** 30)))
    return [random_element(fam, rng, rng.randint(1, 3)) for _ in range(3)], rng


@given(triple())
def test_sequential_associativity(data):
    (a, b, c), rng = data
    i = rng.randint(1, a.arity)
    j = rng.randint(1, b.arity)
    lhs = operad_compose(operad_compose(a, i, b), i + j - 1, c)
    rhs = operad_compose(a, i, operad_compose(b, j, c))
    assert lhs == rhs


@given(triple())
def test_parallel_associativity(data):
    (a, b, c), rng = data
    if a.arity < 2:
        return
    i, k = sorted(rng.sample(range(1, a.arity + 1), 2))
    lhs = operad_compose(operad_compose(a, i, b), k + b.arity - 1, c)
    rhs = operad_compose(operad_compose(a, k, c), i, b)
    assert lhs == rhs


@given(triple())
def test_equivariance(data):
    (a, b, _), rng = data
    n, m = a.arity, b.arity
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    i = rng.randint(1, n)
    p = perm[i - 1]

    def position(q):
        # where input q of a lands in a o_p b
        return q if q < p else q + m - 1

    block = [position(perm[k - 1]) for k in range(1, i)]
    block += [p + r for r in range(m)]
    block += [position(perm[k - 1]) for k in range(i + 1, n + 1)]
    assert operad_compose(act_sigma(a, perm), i, b) == act_sigma(operad_compose(a, p, b), block)


@given(triple())
def test_graph_round_trip(data):
    (a, _, _), _ = data
    assert OperadElement.from_graph(a.to_graph()) == a


@st.composite
def wreath_triple(draw):
    fam = _fam(draw(st.sampled_from(ALL_FAMILIES)))
    size = draw(st.integers(1, 4))
    pool = _group(fam, 0)

    def one():
        perm = draw(st.permutations(range(size)))
        return WreathElement(tuple(draw(st.sampled_from(pool)) for _ in range(size)), tuple(perm))

    return fam, one(), one(), one()


@given(wreath_triple())
def test_wreath_group_laws(data):
    fam, a, b, c = data
    e = WreathElement.identity(fam, a.size)
    assert (a * b) * c == a * (b * c)
    assert a * e == a == e * a
    assert a * a.inverse() == e == a.inverse() * a
