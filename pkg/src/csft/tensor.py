"""Exact scalars and dense tensors over Q or a prime field.

Rationals live in numpy object arrays of ``fractions.Fraction``; prime
field elements are int64 arrays reduced into ``[0, p)``.
"""

from fractions import Fraction
from functools import reduce

import numpy as np

from . import _kernels
from .errors import SingularError, ValidationError


def _is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Field:
    """Either ``Field.rationals()`` or ``Field.prime(p)``."""

    __slots__ = ("p",)

    def __init__(self, p=None):
        if p is not None:
            p = int(p)
            if not _is_prime(p):
                raise ValidationError(f"{p} is not prime")
            if p >= 1 << 31:
                raise ValidationError("prime fields are limited to p < 2^31")
        self.p = p

    @classmethod
    def rationals(cls):
        return cls(None)

    @classmethod
    def prime(cls, p):
        return cls(p)

    @property
    def is_prime(self):
        return self.p is not None

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(self.p)

    def __repr__(self):
        return "Q" if self.p is None else f"F_{self.p}"

    # -- scalars ---------------------------------------------------------------
    def scalar(self, x):
        """Coerce an int, Fraction or string to a field element."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return int(x.numerator) * pow(int(x.denominator), -1, self.p) % self.p
        return int(x) % self.p

    def to_str(self, x):
        if self.p is None:
            return str(Fraction(x))
        return str(int(x) % self.p)

    def zero(self):
        return Fraction(0) if self.p is None else 0

    def one(self):
        return Fraction(1) if self.p is None else 1

    def inv(self, x):
        if self.p is None:
            if x == 0:
                raise SingularError("division by zero")
            return 1 / Fraction(x)
        x = int(x) % self.p
        if x == 0:
            raise SingularError("division by zero")
        return pow(x, -1, self.p)

    # -- arrays ------------------------------------------------------------------
    def array(self, values, shape=None):
        arr = np.asarray(values, dtype=object)
        if shape is not None:
            arr = arr.reshape(shape)
        flat = [self.scalar(v) for v in arr.reshape(-1)]
        if self.p is None:
            out = np.empty(len(flat), dtype=object)
            out[:] = flat
        else:
            out = np.array(flat, dtype=np.int64)
        return out.reshape(arr.shape)

    def zeros(self, shape):
        if self.p is None:
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(shape, dtype=np.int64)

    def eye(self, d):
        out = self.zeros((d, d))
        for i in range(d):
            out[i, i] = self.one()
        return out

    def reduce(self, arr):
        if self.p is None:
            return arr
        return np.asarray(arr, dtype=np.int64) % self.p

    def to_json(self):
        return {"kind": "Q"} if self.p is None else {"kind": "Fp", "p": self.p}

    @classmethod
    def from_json(cls, obj):
        kind = obj.get("kind")
        if kind == "Q":
            return cls.rationals()
        if kind == "Fp":
            return cls.prime(obj["p"])
        raise ValidationError(f"unknown field kind {kind!r}")


class Tensor:
    """A dense tensor with exact entries.  Immutable by convention."""

    __slots__ = ("field", "data")

    def __init__(self, field, data):
        self.field = field
        self.data = data

    @classmethod
    def from_values(cls, field, values, shape=None):
        return cls(field, field.array(values, shape))

    @classmethod
    def zeros(cls, field, shape):
        return cls(field, field.zeros(tuple(shape)))

    @classmethod
    def identity(cls, field, d):
        return cls(field, field.eye(d))

    @classmethod
    def scalar(cls, field, x):
        return cls(field, field.array(x))

    @property
    def shape(self):
        return tuple(self.data.shape)

    @property
    def rank(self):
        return self.data.ndim

    def __eq__(self, other):
        if not isinstance(other, Tensor) or self.field != other.field:
            return NotImplemented
        return self.shape == other.shape and bool(np.all(self.data == other.data))

    def __hash__(self):
        return hash((self.shape, tuple(self.entries_str())))

    def __repr__(self):
        return f"Tensor({self.field}, shape={self.shape})"

    def __add__(self, other):
        return Tensor(self.field, self.field.reduce(self.data + other.data))

    def __sub__(self, other):
        return Tensor(self.field, self.field.reduce(self.data - other.data))

    def scale(self, c):
        return Tensor(self.field, self.field.reduce(self.data * self.field.scalar(c)))

    def is_zero(self):
        return bool(np.all(self.data == 0))

    def entries_str(self):
        return [self.field.to_str(x) for x in self.data.reshape(-1)]

    def to_json(self):
        return {"shape": list(self.shape), "entries": self.entries_str()}

    @classmethod
    def from_json(cls, field, obj):
        shape = tuple(int(d) for d in obj["shape"])
        entries = obj["entries"]
        if len(entries) != int(np.prod(shape, dtype=np.int64)):
            raise ValidationError("entry count does not match shape")
        return cls.from_values(field, entries, shape)


def _same_field(t1, t2):
    if t1.field != t2.field:
        raise ValidationError("tensors live over different fields")
    return t1.field


def contract(t1, axes1, t2, axes2):
    """Sum over the paired axes; free axes of ``t1`` come first."""
    field = _same_field(t1, t2)
    axes1, axes2 = list(axes1), list(axes2)
    if len(axes1) != len(axes2):
        raise ValidationError("axis lists differ in length")
    for a, b in zip(axes1, axes2):
        if t1.shape[a] != t2.shape[b]:
            raise ValidationError(f"dimension mismatch on axes {a} and {b}")
    if field.p is None:
        return Tensor(field, np.tensordot(t1.data, t2.data, axes=(axes1, axes2)))
    free1 = [i for i in range(t1.rank) if i not in axes1]
    free2 = [i for i in range(t2.rank) if i not in axes2]
    k = int(np.prod([t1.shape[a] for a in axes1], dtype=np.int64))
    a = np.transpose(t1.data, free1 + axes1).reshape(-1, k)
    b = np.transpose(t2.data, axes2 + free2).reshape(k, -1)
    out = _kernels.matmul_mod(a, b, field.p)
    shape = [t1.shape[i] for i in free1] + [t2.shape[i] for i in free2]
    return Tensor(field, out.reshape(shape))


def trace_axes(t, a, b):
    """Contract two axes of one tensor with each other."""
    if t.shape[a] != t.shape[b]:
        raise ValidationError("traced axes must have equal dimension")
    data = np.trace(t.data, axis1=a, axis2=b)
    if t.rank == 2:
        data = t.field.array(data)
    return Tensor(t.field, t.field.reduce(data))


def outer(t1, t2):
    return contract(t1, [], t2, [])


def tensor_product(tensors, field=None):
    if not tensors:
        return Tensor.scalar(field, 1)
    return reduce(outer, tensors)


def permute_axes(t, sigma):
    """Axis ``i`` of the result is axis ``sigma[i]`` of ``t``."""
    sigma = list(sigma)
    if sorted(sigma) != list(range(t.rank)):
        raise ValidationError("not a permutation of the axes")
    return Tensor(t.field, np.transpose(t.data, sigma).copy())


def matmul(a, b):
    return contract(a, [a.rank - 1], b, [0])


def matpow(m, k):
    d = m.shape[0]
    out = Tensor.identity(m.field, d)
    for _ in range(k):
        out = matmul(out, m)
    return out


def transpose(m):
    return permute_axes(m, [1, 0])


def invert(m):
    """Exact inverse by Gauss-Jordan elimination."""
    field = m.field
    if m.rank != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError("invert needs a square matrix")
    d = m.shape[0]
    a = [[field.scalar(x) for x in row] for row in m.data.tolist()]
    inv = [[field.one() if i == j else field.zero() for j in range(d)] for i in range(d)]
    p = field.p

    def red(x):
        return x if p is None else x % p
    for col in range(d):
        piv = next((r for r in range(col, d) if a[r][col] != 0), None)
        if piv is None:
            raise SingularError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        c = field.inv(a[col][col])
        a[col] = [red(x * c) for x in a[col]]
        inv[col] = [red(x * c) for x in inv[col]]
        for r in range(d):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [red(x - f * y) for x, y in zip(a[r], a[col])]
                inv[r] = [red(x - f * y) for x, y in zip(inv[r], inv[col])]
    return Tensor.from_values(field, inv, (d, d))


def rank_of(m):
    """Rank of a matrix by exact elimination."""
    field = m.field
    rows = [[field.scalar(x) for x in row] for row in m.data.tolist()]
    p = field.p
    rank = 0
    ncols = m.shape[1] if m.rank == 2 else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        c = field.inv(rows[rank][col])
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] * c
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
                if p is not None:
                    rows[r] = [x % p for x in rows[r]]
        rank += 1
    return rank
