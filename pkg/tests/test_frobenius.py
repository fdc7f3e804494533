import itertools

import pytest

from conftest import ALL_FAMILIES
from csft.csg import Family, FiniteGroup, enumerate_group, parity
from csft.frobenius import (
    ActionTable, FrobeniusPresentation, battery, check_algebra, check_equivariant,
    check_frobenius, group_algebra, matrix_algebra_twisted, nakayama, truncated_polynomials,
    verdicts, with_actions, with_companion_action,
)
from csft.tensor import Field, Tensor, invert, matmul, matpow

F5 = Field.prime(5)
FAMILY_NAMES = ALL_FAMILIES + ["NCyclic:4", "NDihedral:4"]


def _mat2_mul(x, y, p):
    return [[sum(x[i][k] * y[k][j] for k in range(2)) % p for j in range(2)] for i in range(2)]


def _unit_matrix(a, b):
    x = [[0, 0], [0, 0]]
    x[a][b] = 1
    return x


def test_group_algebra_passes():
    for name in ("Cyclic", "Dihedral", "NCyclic:3", "Paradihedral"):
        rep = check_frobenius(group_algebra(3), Family.parse(name))
        assert rep.passed, rep.to_text()


def test_corrupted_associativity_fails():
    pres = group_algebra(3)
    mul = pres.mul.data.copy()
    mul[1, 1, 2] = 0
    mul[1, 1, 0] = 1
    bad = FrobeniusPresentation(pres.field, Tensor(pres.field, mul), pres.unit, pres.trace)
    rep = check_algebra(bad)
    assert not rep.get("associativity").passed
    assert not check_frobenius(bad, Family.parse("Cyclic")).passed


def test_identity_involution_on_matrices_fails_dihedral():
    pres = matrix_algebra_twisted(2, [1, 1], F5, involution="identity")
    # the bad reflection is flagged even where the family ignores it
    cyc = check_frobenius(pres, Family.parse("Cyclic"))
    assert [c.name for c in cyc.checks if not c.passed] == ["reflection action is an anti-automorphism"]
    assert check_frobenius(matrix_algebra_twisted(2, [1, 1], F5, involution=None),
                           Family.parse("Cyclic")).passed
    rep = check_frobenius(pres, Family.parse("Dihedral"))
    assert not rep.passed
    assert rep.get("generic and family verdicts agree").passed
    assert not check_frobenius(matrix_algebra_twisted(2, [1, 1], F5, involution=None),
                               Family.parse("Dihedral")).passed


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_nakayama_map_of_twisted_matrices(k):
    pres = matrix_algebra_twisted(2, [1, k], F5)
    nak = nakayama(pres)
    F = nak.matrix

    def apply_f(x):
        flat = [x[a][b] for a in range(2) for b in range(2)]
        out = [sum(F.data[r, c] * flat[c] for c in range(4)) % 5 for r in range(4)]
        return [out[0:2], out[2:4]]

    def beta(x):
        return (x[0][0] + k * x[1][1]) % 5

    for (a, b), (c, d) in itertools.product(itertools.product(range(2), repeat=2), repeat=2):
        x, y = _unit_matrix(a, b), _unit_matrix(c, d)
        assert beta(_mat2_mul(x, y, 5)) == beta(_mat2_mul(y, apply_f(x), 5))
    # order of F by repeated multiplication, no shortcut
    order = next(j for j in range(1, 10) if matpow(F, j) == Tensor.identity(F5, 4))
    assert nak.order == order
    expected = {1: 1, 2: 4, 3: 4, 4: 2}[k]
    assert order == expected


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_finite_level_passes_iff_order_divides(k):
    pres = matrix_algebra_twisted(2, [1, k], F5)
    order = nakayama(pres).order
    for n in (1, 2, 3, 4):
        for kind in ("NCyclic", "NDihedral"):
            fam = Family.parse("Cyclic" if (n == 1 and kind == "NCyclic") else
                               "Dihedral" if n == 1 else f"{kind}:{n}")
            _, generic, family = verdicts(pres, fam, 3)
            assert generic == family == (n % order == 0)
    for name in ("Paracyclic", "Paradihedral"):
        assert verdicts(pres, Family.parse(name), 3) == (True, True, True)


@pytest.mark.parametrize("pres", battery(), ids=lambda p: p.name)
def test_generic_and_family_agree(pres):
    for name in FAMILY_NAMES:
        alg, generic, family = verdicts(pres, Family.parse(name), 3)
        assert alg and generic == family


@pytest.mark.parametrize("pres", battery(), ids=lambda p: p.name)
def test_rotation_action_is_the_nakayama_map(pres):
    F = nakayama(pres).matrix
    for name in ("NCyclic:4", "NDihedral:4", "Paradihedral"):
        fam = Family.parse(name)
        actions = ActionTable(pres, fam)
        group = enumerate_group(fam, 0, None if fam.finite else 1)
        for t in group:
            if parity(t) == "even":
                k = t.lift[0]
                expected = matpow(F, k) if k >= 0 else matpow(invert(F), -k)
                assert actions.matrix(t) == expected
                assert matmul(actions.matrix(t), F) == matmul(F, actions.matrix(t))


def test_supplied_rotation_must_match():
    pres = matrix_algebra_twisted(2, [1, 4], F5)
    wrong = with_actions(pres, rotation=Tensor.identity(F5, 4))
    assert not check_frobenius(wrong, Family.parse("NCyclic:2")).passed
    right = with_actions(pres, rotation=nakayama(pres).matrix)
    assert check_frobenius(right, Family.parse("NCyclic:2")).passed


def test_truncated_polynomial_gram_is_antidiagonal():
    for m in range(1, 5):
        B = truncated_polynomials(m).gram()
        for i in range(m):
            for j in range(m):
                assert B.data[i, j] == (1 if i + j == m - 1 else 0)


def _inversion(m):
    return [[1 if (r + c) % m == 0 else 0 for c in range(m)] for r in range(m)]


def test_companion_inversion_on_group_algebra():
    z2 = FiniteGroup.cyclic(2)
    pres = with_companion_action(group_algebra(3), {1: _inversion(3)})
    for name in ("Cyclic", "Dihedral", "NCyclic:2"):
        fam = Family.parse(name, z2)
        assert check_equivariant(pres, fam).passed
        assert check_frobenius(pres, fam).passed


def test_companion_scaling_is_rejected():
    z2 = FiniteGroup.cyclic(2)
    # x -> -x is linear and squares to one but does not fix the unit
    neg = [[-1 if r == c else 0 for c in range(3)] for r in range(3)]
    pres = with_companion_action(group_algebra(3), {1: neg})
    fam = Family.parse("Cyclic", z2)
    rep = check_equivariant(pres, fam)
    assert not rep.passed
    assert not check_frobenius(pres, fam).passed


def test_companion_must_be_a_homomorphism():
    z2 = FiniteGroup.cyclic(2)
    # a 3-cycle of the group elements has order 3, so it cannot represent Z/2
    shift = [[1 if r == (c + 1) % 3 else 0 for c in range(3)] for r in range(3)]
    pres = with_companion_action(group_algebra(3), {1: shift})
    assert not check_equivariant(pres, Family.parse("Cyclic", z2)).passed


def test_json_round_trip():
    for pres in battery():
        again = FrobeniusPresentation.from_json(pres.to_json())
        assert again.to_json() == pres.to_json()
