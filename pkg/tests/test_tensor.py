import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from csft.errors import SingularError, ValidationError
from csft.tensor import (
    Field, Tensor, contract, invert, matmul, permute_axes, rank_of, tensor_product, trace_axes,
)

FIELDS = [Field.rationals(), Field.prime(2), Field.prime(5), Field.prime(7), Field.prime(101)]


def _entry(field, rng):
    if field.p is None:
        return Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return rng.randrange(field.p)


def _random(field, shape, rng):
    n = 1
    for d in shape:
        n *= d
    return Tensor.from_values(field, [_entry(field, rng) for _ in range(n)], shape)


def _loop_contract(t1, a1, t2, a2):
    # brute force: iterate every index tuple
    field = t1.field
    free1 = [i for i in range(t1.rank) if i not in a1]
    free2 = [i for i in range(t2.rank) if i not in a2]
    shape = [t1.shape[i] for i in free1] + [t2.shape[i] for i in free2]
    summed = [t1.shape[i] for i in a1]
    out = {}
    for idx in itertools.product(*[range(d) for d in shape]):
        total = field.zero()
        for s in itertools.product(*[range(d) for d in summed]):
            i1 = [0] * t1.rank
            i2 = [0] * t2.rank
            for k, ax in enumerate(free1):
                i1[ax] = idx[k]
            for k, ax in enumerate(free2):
                i2[ax] = idx[len(free1) + k]
            for k in range(len(a1)):
                i1[a1[k]] = s[k]
                i2[a2[k]] = s[k]
            total += t1.data[tuple(i1)] * t2.data[tuple(i2)]
        out[idx] = total
    return Tensor.from_values(field, [out[i] for i in itertools.product(*[range(d) for d in shape])],
                              tuple(shape))


def test_invert_diagonal_over_f5():
    f5 = Field.prime(5)
    m = Tensor.from_values(f5, [1, 0, 0, 2], (2, 2))
    assert invert(m) == Tensor.from_values(f5, [1, 0, 0, 3], (2, 2))


def test_singular_matrix_raises():
    for field in FIELDS:
        with pytest.raises(SingularError):
            invert(Tensor.from_values(field, [1, 2, 2, 4], (2, 2)))
    with pytest.raises(SingularError):
        invert(Tensor.from_values(Field.prime(5), [1, 1, 1, 1], (2, 2)))


def test_field_validation():
    with pytest.raises(ValidationError):
        Field.prime(4)
    with pytest.raises(ValidationError):
        Field.prime(1)
    assert Field.prime(7).scalar("3/2") == 5
    assert Field.rationals().scalar("-3/6") == Fraction(-1, 2)


def test_different_fields_do_not_mix():
    with pytest.raises(ValidationError):
        contract(Tensor.identity(Field.prime(5), 2), [1], Tensor.identity(Field.prime(7), 2), [0])


def test_dimension_mismatch():
    q = Field.rationals()
    with pytest.raises(ValidationError):
        contract(Tensor.identity(q, 2), [1], Tensor.identity(q, 3), [0])


def test_permute_axes():
    q = Field.rationals()
    t = Tensor.from_values(q, list(range(24)), (2, 3, 4))
    p = permute_axes(t, [2, 0, 1])
    assert p.shape == (4, 2, 3)
    for i, j, k in itertools.product(range(2), range(3), range(4)):
        assert p.data[k, i, j] == t.data[i, j, k]
    with pytest.raises(ValidationError):
        permute_axes(t, [0, 0, 1])


def test_trace_of_identity():
    for field in FIELDS:
        t = trace_axes(Tensor.identity(field, 3), 0, 1)
        assert t == Tensor.scalar(field, 3)


def test_rank():
    q = Field.rationals()
    assert rank_of(Tensor.from_values(q, [1, 2, 2, 4], (2, 2))) == 1
    assert rank_of(Tensor.identity(q, 3)) == 3


def test_empty_tensor_product_is_one():
    f = Field.prime(3)
    assert tensor_product([], f) == Tensor.scalar(f, 1)


@pytest.mark.parametrize("field", FIELDS, ids=repr)
def test_random_inverses(field):
    rng = random.Random(field.p or 0)
    done = 0
    while done < 100:
        d = rng.randint(1, 5)
        m = _random(field, (d, d), rng)
        try:
            inv = invert(m)
        except SingularError:
            assert rank_of(m) < d
            continue
        assert matmul(m, inv) == Tensor.identity(field, d)
        assert matmul(inv, m) == Tensor.identity(field, d)
        done += 1


@st.composite
def contraction_case(draw):
    field = draw(st.sampled_from(FIELDS))
    rng = random.Random(draw(st.integers(0, 2 ** 30)))
    k = draw(st.integers(0, 2))
    summed = [rng.randint(1, 3) for _ in range(k)]
    free1 = [rng.randint(1, 3) for _ in range(draw(st.integers(0, 2)))]
    free2 = [rng.randint(1, 3) for _ in range(draw(st.integers(0, 2)))]
    dims1 = free1 + summed
    dims2 = summed + free2
    order1 = list(range(len(dims1)))
    order2 = list(range(len(dims2)))
    rng.shuffle(order1)
    rng.shuffle(order2)
    t1 = _random(field, tuple(dims1[i] for i in order1), rng)
    t2 = _random(field, tuple(dims2[i] for i in order2), rng)
    a1 = [order1.index(len(free1) + s) for s in range(k)]
    a2 = [order2.index(s) for s in range(k)]
    return t1, a1, t2, a2


@given(contraction_case())
def test_contract_matches_loops(case):
    t1, a1, t2, a2 = case
    assert contract(t1, a1, t2, a2) == _loop_contract(t1, a1, t2, a2)
