"""Balanced crossed simplicial groups in the circle-map lift model.

A morphism ``[n] -> [m]`` is stored as an orientation sign together with an
integer lift ``F(0), ..., F(n)``.  The lift is extended to all of ``Z`` by

    F(i + n + 1) = F(i) + sign * (m + 1)

and two lifts describe the same morphism when they differ by a translation
of ``P * (m + 1)``, where ``P`` is the family's level (no identification in
the paracyclic and paradihedral families).  Composition is composition of
the extended lifts, which is what makes the model convenient.

EXAMPLES::

    >>> lam = Family.make("Cyclic")
    >>> f = CsgMorphism(lam, 1, 2, 1, (0, 2))
    >>> t = CsgMorphism(lam, 2, 2, 1, (1, 2, 3))
    >>> compose(f, t).lift
    (1, 3)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .errors import CompositionError, DomainError, EnumerationError, ValidationError

KINDS = ("Cyclic", "Dihedral", "NCyclic", "NDihedral", "Paracyclic", "Paradihedral")


class FiniteGroup:
    """A finite group given by its multiplication table; index 0 is the identity."""

    def __init__(self, table, names=None):
        table = tuple(tuple(int(x) for x in row) for row in table)
        k = len(table)
        if k == 0:
            raise ValidationError("empty group table")
        for r, row in enumerate(table):
            if len(row) != k:
                raise ValidationError("group table is not square", r)
            for x in row:
                if not 0 <= x < k:
                    raise ValidationError("group table entry out of range", r)
        if any(table[0][b] != b or table[b][0] != b for b in range(k)):
            raise ValidationError("index 0 is not the identity")
        for a, b, c in itertools.product(range(k), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise ValidationError("group table is not associative", (a, b, c))
        inv = []
        for a in range(k):
            hits = [b for b in range(k) if table[a][b] == 0]
            if len(hits) != 1 or table[hits[0]][a] != 0:
                raise ValidationError("element has no two-sided inverse", a)
            inv.append(hits[0])
        self.table = table
        self._inv = tuple(inv)
        self.names = tuple(names) if names is not None else tuple(f"h{i}" for i in range(k))
        if len(self.names) != k:
            raise ValidationError("names list has the wrong length")

    @property
    def order(self):
        return len(self.table)

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self._inv[a]

    @classmethod
    def cyclic(cls, k):
        return cls([[(a + b) % k for b in range(k)] for a in range(k)],
                   [f"z{i}" for i in range(k)])

    def to_json(self):
        return {"order": self.order, "table": [list(r) for r in self.table],
                "names": list(self.names)}

    @classmethod
    def from_json(cls, obj):
        if obj is None:
            return None
        group = cls(obj["table"], obj.get("names"))
        if "order" in obj and obj["order"] != group.order:
            raise ValidationError("declared order disagrees with table size")
        return group

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


@dataclass(frozen=True)
class Family:
    """One of the supported balanced families, optionally times ``BH``.

    ``level`` is ``N`` for the N-cyclic/N-dihedral families (Cyclic and
    Dihedral are stored with ``level = 1``) and ``None`` for the para
    families, whose groups are infinite.
    """

    base: str
    level: Optional[int]
    companion: Optional[FiniteGroup] = None

    def __post_init__(self):
        if self.base not in ("cyclic", "dihedral"):
            raise ValidationError(f"unknown family base {self.base!r}")
        if self.level is not None and self.level < 1:
            raise ValidationError("level must be a positive integer")

    @classmethod
    def make(cls, kind, N=None, companion=None):
        if kind not in KINDS:
            raise ValidationError(f"unknown family kind {kind!r}")
        base = "dihedral" if "ihedral" in kind else "cyclic"
        if kind in ("Cyclic", "Dihedral"):
            if N not in (None, 1):
                raise ValidationError(f"{kind} has no level parameter")
            level = 1
        elif kind.startswith("Para"):
            level = None
        else:
            if N is None:
                raise ValidationError(f"{kind} needs a level N")
            level = int(N)
        return cls(base, level, companion)

    @classmethod
    def parse(cls, text, companion=None):
        """Parse strings such as ``"Cyclic"``, ``"NCyclic:4"`` or ``"Paradihedral"``."""
        kind, _, level = text.partition(":")
        return cls.make(kind.strip(), int(level) if level else None, companion)

    @property
    def kind(self):
        if self.level is None:
            return "Paradihedral" if self.dihedral else "Paracyclic"
        if self.level == 1:
            return "Dihedral" if self.dihedral else "Cyclic"
        return "NDihedral" if self.dihedral else "NCyclic"

    @property
    def dihedral(self):
        return self.base == "dihedral"

    @property
    def period(self):
        return self.level

    @property
    def finite(self):
        return self.level is not None

    @property
    def h_order(self):
        return 1 if self.companion is None else self.companion.order

    def with_companion(self, companion):
        return Family(self.base, self.level, companion)

    def label(self):
        name = self.kind if self.level in (None, 1) else f"{self.kind}:{self.level}"
        if self.companion is not None:
            name += f"xB[{self.companion.order}]"
        return name

    def group_order(self, n):
        """Order of the automorphism group of ``[n]`` (None when infinite)."""
        if self.level is None:
            return None
        return (2 if self.dihedral else 1) * self.level * (n + 1) * self.h_order

    def h_mul(self, a, b):
        return 0 if self.companion is None else self.companion.mul(a, b)

    def h_inv(self, a):
        return 0 if self.companion is None else self.companion.inv(a)

    def to_json(self):
        return {"kind": self.kind,
                "N": self.level if self.kind in ("NCyclic", "NDihedral") else None,
                "H": None if self.companion is None else self.companion.to_json()}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            return cls.parse(obj)
        return cls.make(obj["kind"], obj.get("N"), FiniteGroup.from_json(obj.get("H")))

    def __repr__(self):
        return f"Family({self.label()})"


def _normalize(family, target, lift):
    if family.level is None:
        return tuple(lift)
    q = family.level * (target + 1)
    shift = (lift[0] // q) * q
    return tuple(x - shift for x in lift)


@dataclass(frozen=True, repr=False)
class CsgMorphism:
    """A morphism ``[source] -> [target]`` of ``family``.

    ``h`` is the companion-group label (an index, 0 = identity); it is
    always 0 when the family has no companion group.
    """

    family: Family
    source: int
    target: int
    sign: int
    lift: tuple
    h: int = 0
    _checked: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        lift = tuple(int(x) for x in self.lift)
        if self._checked:
            _validate(self.family, self.source, self.target, self.sign, lift, self.h)
        object.__setattr__(self, "lift", _normalize(self.family, self.target, lift))

    # -- evaluation of the periodic extension -------------------------------
    def ext(self, i):
        q, r = divmod(i, self.source + 1)
        return self.lift[r] + self.sign * q * (self.target + 1)

    def in_delta(self):
        return (self.sign == 1 and self.h == 0 and self.lift[0] >= 0
                and self.lift[-1] <= self.target)

    def is_automorphism(self):
        if self.source != self.target:
            return False
        return all(self.lift[i] == self.lift[0] + self.sign * i for i in range(self.source + 1))

    def set_map(self):
        return tuple(x % (self.target + 1) for x in self.lift)

    def to_json(self):
        return {"family": self.family.to_json(), "source": self.source,
                "target": self.target, "sign": self.sign, "lift": list(self.lift),
                "h": None if self.family.companion is None else self.h}

    @classmethod
    def from_json(cls, obj, family=None):
        fam = family if family is not None else Family.from_json(obj["family"])
        h = obj.get("h")
        return cls(fam, int(obj["source"]), int(obj["target"]), int(obj["sign"]),
                   tuple(obj["lift"]), 0 if h is None else int(h))

    def __str__(self):
        tag = "" if self.family.companion is None else f";h={self.h}"
        return f"({'+' if self.sign > 0 else '-'}1,{list(self.lift)}{tag}):[{self.source}]->[{self.target}]"

    __repr__ = __str__


def _validate(family, n, m, sign, lift, h):
    if n < 0 or m < 0:
        raise ValidationError("objects are [n] with n >= 0")
    if len(lift) != n + 1:
        raise ValidationError(f"lift must have {n + 1} entries, got {len(lift)}")
    if sign not in (1, -1):
        raise ValidationError("sign must be +1 or -1")
    if sign == -1 and not family.dihedral:
        raise ValidationError(f"orientation reversal is not available in {family.kind}")
    if not 0 <= h < family.h_order:
        raise ValidationError("companion label out of range")
    for i in range(n):
        if sign * (lift[i + 1] - lift[i]) < 0:
            raise ValidationError("lift is not monotone", i + 1)
    if sign * (lift[n] - lift[0]) > m + 1:
        raise ValidationError("lift winds more than once around the circle")


def morphism(family, source, target, sign, lift, h=0):
    return CsgMorphism(family, source, target, sign, tuple(lift), h)


def _fast(family, n, m, sign, lift, h=0):
    return CsgMorphism(family, n, m, sign, lift, h, False)


# -- named morphisms ---------------------------------------------------------

def identity(family, n):
    return _fast(family, n, n, 1, tuple(range(n + 1)))


def rotation(family, n, r=1, h=0):
    """Rotation lift ``i -> i + r`` in ``G_n``."""
    return _fast(family, n, n, 1, tuple(i + r for i in range(n + 1)), h)


def reflection(family, n, r=0, h=0):
    """Reflection lift ``i -> r - i`` in ``G_n`` (dihedral families only)."""
    if not family.dihedral:
        raise DomainError(f"{family.kind} has no reflections")
    return _fast(family, n, n, -1, tuple(r - i for i in range(n + 1)), h)


def point(family, n, i):
    """The map ``[0] -> [n]`` picking out ``i``."""
    return _fast(family, 0, n, 1, (i,))


def omega(family, n):
    """The unique Delta map ``[n] -> [0]``."""
    return _fast(family, n, 0, 1, (0,) * (n + 1))


def face_pair(family, n, i, j):
    """The Delta map ``{i, j}: [1] -> [n]``."""
    return morphism(family, 1, n, 1, (i, j))


# -- the category structure --------------------------------------------------

def compose(f, g):
    """Return ``g o f`` (first ``f``, then ``g``)."""
    if f.family != g.family:
        raise CompositionError("morphisms belong to different families")
    if f.target != g.source:
        raise CompositionError(f"cannot compose {f} with {g}: [{f.target}] != [{g.source}]")
    lift = tuple(g.ext(x) for x in f.lift)
    return _fast(f.family, f.source, g.target, f.sign * g.sign, lift,
                 f.family.h_mul(g.h, f.h))


def inverse(g):
    if not g.is_automorphism():
        raise DomainError(f"{g} is not an automorphism")
    if g.sign == 1:
        lift = tuple(i - g.lift[0] for i in range(g.source + 1))
    else:
        lift = g.lift
    return _fast(g.family, g.source, g.source, g.sign, lift, g.family.h_inv(g.h))


def factorize(f):
    """Canonical factorization ``f = phi o g`` with ``phi`` in Delta, ``g`` in ``G_n``.

    Returns ``(phi, g)``.
    """
    n, m, fam = f.source, f.target, f.family
    f0 = f.lift[0]
    if f.sign == 1:
        # smallest i with F(i) >= 0
        i = -(f0 // (m + 1)) * (n + 1)
        while f.ext(i - 1) >= 0:
            i -= 1
        while f.ext(i) < 0:
            i += 1
        g = _fast(fam, n, n, 1, tuple(k - i for k in range(n + 1)), f.h)
        phi = _fast(fam, n, m, 1, tuple(f.ext(j + i) for j in range(n + 1)))
    else:
        # largest r with F(r) >= 0
        r = (f0 // (m + 1)) * (n + 1)
        while f.ext(r + 1) >= 0:
            r += 1
        while f.ext(r) < 0:
            r -= 1
        g = _fast(fam, n, n, -1, tuple(r - k for k in range(n + 1)), f.h)
        phi = _fast(fam, n, m, 1, tuple(f.ext(r - j) for j in range(n + 1)))
    return phi, g


def pullback_along(phi, g):
    """For ``phi: [n] -> [m]`` in Delta and ``g`` in ``G_m`` return ``(g^*phi, phi^*g)``.

    These are the unique pair with ``g o phi = (g^*phi) o (phi^*g)``.
    """
    if not phi.in_delta():
        raise DomainError(f"{phi} does not lie in Delta")
    if not g.is_automorphism() or g.source != phi.target:
        raise DomainError(f"{g} is not an automorphism of [{phi.target}]")
    return factorize(compose(phi, g))


def omega_pullback(g, n):
    if g.source != 0 or not g.is_automorphism():
        raise DomainError("omega_pullback expects an element of G_0")
    return pullback_along(omega(g.family, n), g)[1]


def point_pullback(g, i):
    """``i_n^*(g)``: pull ``g`` in ``G_n`` back along ``i: [0] -> [n]``."""
    return pullback_along(point(g.family, g.source, i), g)[1]


@dataclass(frozen=True)
class SetMap:
    """A map ``{0..source_size-1} -> {0..target_size-1}``."""

    source_size: int
    target_size: int
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.source_size:
            raise ValidationError("set map has the wrong number of values")
        if any(not 0 <= v < self.target_size for v in self.values):
            raise ValidationError("set map value out of range")

    def __call__(self, i):
        return self.values[i]

    def then(self, other):
        """``other o self``."""
        return SetMap(self.source_size, other.target_size,
                      tuple(other.values[v] for v in self.values))

    def is_bijection(self):
        return self.source_size == self.target_size and len(set(self.values)) == self.source_size

    def inverse(self):
        out = [0] * self.source_size
        for i, v in enumerate(self.values):
            out[v] = i
        return SetMap(self.source_size, self.source_size, tuple(out))


def lambda_map(f):
    return SetMap(f.source + 1, f.target + 1, f.set_map())


def _max_index(fn, bound, step_in, step_out):
    """Largest i with fn(i) <= bound for nondecreasing ``fn`` of period (step_in, step_out)."""
    i = ((bound - fn(0)) // step_out) * step_in
    while fn(i) > bound:
        i -= 1
    while fn(i + 1) <= bound:
        i += 1
    return i


def dualize(f):
    """The self-duality ``D``, contravariant and strictly involutive.

    For orientation preserving ``f: [a] -> [b]`` the dual is the right
    adjoint of the mirrored lift ``i -> -F(-i)``:

        D(f)(j) = max{ i : -F(-i) <= j }.

    Orientation reversing maps use ``D(f)(j) = 2a + 1 - max{ i : F(i) >= -j }``.
    The companion label is inverted.
    """
    a, b = f.source, f.target
    if f.sign == 1:
        def mirrored(i):
            return -f.ext(-i)
        lift = tuple(_max_index(mirrored, j, a + 1, b + 1) for j in range(b + 1))
    else:
        def negated(i):
            return -f.ext(i)
        lift = tuple(2 * a + 1 - _max_index(negated, j, a + 1, b + 1) for j in range(b + 1))
    return _fast(f.family, b, a, f.sign, lift, f.family.h_inv(f.h))


def parity(g):
    if g.source != 0 or not g.is_automorphism():
        raise DomainError("parity is defined on G_0")
    return "odd" if g.sign == -1 else "even"


def enumerate_group(family, n, winding=None):
    """All elements of ``G_n``; the para families need a winding bound.

    With a bound ``w`` the para families return the lifts with
    ``-w(n+1) <= F(0) < w(n+1)``.
    """
    if family.finite:
        starts = range(family.level * (n + 1))
    elif winding is None:
        raise EnumerationError(f"G_{n} of {family.kind} is infinite; pass a winding bound")
    else:
        starts = range(-winding * (n + 1), winding * (n + 1))
    signs = (1, -1) if family.dihedral else (1,)
    out = []
    for h in range(family.h_order):
        for s in signs:
            for r in starts:
                out.append(_fast(family, n, n, s, tuple(r + s * i for i in range(n + 1)), h))
    return out


def group_generators(family, n):
    """A generating set of ``G_n``: one rotation, one reflection, companion labels."""
    gens = []
    rot = rotation(family, n, 1)
    if rot != identity(family, n):
        gens.append(rot)
    if family.dihedral:
        gens.append(reflection(family, n, 0))
    for h in range(1, family.h_order):
        gens.append(_fast(family, n, n, 1, tuple(range(n + 1)), h))
    return gens


def g0_word(t):
    """Write ``t`` in ``G_0`` as ``rot^k o refl^e`` with companion label ``h``.

    Returns ``(k, e, h)``; ``refl`` is the reflection with lift ``[0]``.
    """
    if t.source != 0 or t.target != 0:
        raise DomainError("g0_word expects an element of G_0")
    return t.lift[0], int(t.sign == -1), t.h


# -- augmentations: morphisms [n] -> [1] singling out one slot ---------------

def standard_augmentation(family, n, slot, side):
    """Lift ``side + sgn(i - slot)``: ``slot`` goes to ``side``, the rest to ``1 - side``."""
    return _fast(family, n, 1, 1, tuple(side + (i > slot) - (i < slot) for i in range(n + 1)))


def edge_automorphism(t):
    """The element of ``Stab(0) = Stab(1)`` in ``G_1`` whose pullback along ``0_1`` is ``t``."""
    k, _, h = g0_word(t)
    return _fast(t.family, 1, 1, t.sign, (2 * k, 2 * k + t.sign), h)


def augmentation(family, n, slot, side, twist):
    """The augmentation of a half-edge at ``slot`` with the given side and twist.

    The twist ``t`` enters through the edge automorphism of ``t^{-1}``, so
    that moving both half-edges of an edge by the same edge automorphism
    multiplies both twists on the right.
    """
    std = standard_augmentation(family, n, slot, side)
    return compose(std, edge_automorphism(inverse(twist)))


def read_augmentation(aug, slot):
    """Recover ``(side, twist)`` of an augmentation at ``slot``."""
    values = aug.set_map()
    side = values[slot]
    if any(v == side for i, v in enumerate(values) if i != slot):
        raise DomainError(f"{aug} does not single out slot {slot}")
    k = (aug.lift[slot] - aug.sign * side) // 2
    inv_twist = _fast(aug.family, 0, 0, aug.sign, (k,), aug.h)
    return side, inverse(inv_twist)
