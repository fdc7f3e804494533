"""The operad of multiplications, its unary part, and the χ_2 / η_n homomorphisms."""

from dataclasses import dataclass

from .csg import (
    compose, edge_automorphism, enumerate_group, factorize, identity, inverse, lambda_map,
    point_pullback, standard_augmentation,
)
from .errors import DomainError, ValidationError
from .graph import act_on_vertex, concatenate, contract_edge, corolla


# -- wreath products ------------------------------------------------------------

@dataclass(frozen=True)
class WreathElement:
    """``(g_0, ..., g_n; sigma)`` in ``G_0 wr Sigma_{n+1}``.

    ``sigma[j]`` is the position that leg ``j`` moves to and ``twists[i]``
    is the twist picked up by the leg landing in position ``i``.  With
    that indexing the product (first ``b``, then ``a``) is

        (a * b).twists[i] = a.twists[i] o b.twists[a.sigma^-1(i)]
    """

    twists: tuple
    perm: tuple

    def __post_init__(self):
        if len(self.twists) != len(self.perm):
            raise ValidationError("twists and permutation must have the same length")
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValidationError("perm is not a permutation")

    @property
    def size(self):
        return len(self.perm)

    def _perm_inverse(self):
        inv = [0] * self.size
        for i, p in enumerate(self.perm):
            inv[p] = i
        return inv

    def __mul__(self, other):
        if self.size != other.size:
            raise ValidationError("wreath elements of different sizes")
        inv = self._perm_inverse()
        tw = tuple(compose(other.twists[inv[i]], self.twists[i]) for i in range(self.size))
        return WreathElement(tw, tuple(self.perm[other.perm[i]] for i in range(self.size)))

    def inverse(self):
        tw = tuple(inverse(self.twists[self.perm[j]]) for j in range(self.size))
        return WreathElement(tw, tuple(self._perm_inverse()))

    def map_twists(self, fn):
        return WreathElement(tuple(fn(t) for t in self.twists), self.perm)

    @classmethod
    def identity(cls, family, size):
        e = identity(family, 0)
        return cls((e,) * size, tuple(range(size)))

    def to_json(self):
        return {"twists": [t.to_json() for t in self.twists], "perm": list(self.perm)}

    def __str__(self):
        tw = ", ".join(_g0_name(t) for t in self.twists)
        return f"({tw}; {list(self.perm)})"


def _g0_name(t):
    k, e = t.lift[0], t.sign == -1
    parts = []
    if k:
        parts.append(f"r^{k}")
    if e:
        parts.append("f")
    if t.h:
        parts.append(f"h{t.h}")
    return "*".join(parts) or "e"


# -- operad elements --------------------------------------------------------------

@dataclass(frozen=True)
class OperadElement:
    """A corolla with one outgoing leg, in standard form.

    The outgoing leg sits at slot 0 with identity twist; input ``i``
    (1-based) sits at ``slots[i-1]`` with twist ``twists[i-1]``.
    """

    family: object
    slots: tuple
    twists: tuple

    def __post_init__(self):
        n = len(self.slots)
        if sorted(self.slots) != list(range(1, n + 1)):
            raise ValidationError("input slots must be a permutation of 1..n")
        if len(self.twists) != n:
            raise ValidationError("one twist per input")

    @property
    def arity(self):
        return len(self.slots)

    def to_graph(self):
        n = self.arity
        legs = [(0, None)] + [None] * n
        for s, t in zip(self.slots, self.twists):
            legs[s] = (1, t)
        return corolla(self.family, legs, in_order=list(self.slots), out_order=[0])

    @classmethod
    def from_graph(cls, g):
        """Read a one-output corolla, standardizing it first."""
        if not g.is_corolla() or len(g.out_order) != 1:
            raise DomainError("operad elements are corollas with exactly one output")
        g = standardize(g)
        slots = tuple(g.half_edges[i].slot for i in g.in_order)
        twists = tuple(g.half_edges[i].twist for i in g.in_order)
        return cls(g.family, slots, twists)

    def to_json(self):
        return {"family": self.family.to_json(), "slots": list(self.slots),
                "twists": [t.to_json() for t in self.twists]}


def standardize(g, half_edge=None):
    """Act on the vertex holding ``half_edge`` (default: first output) so that its
    augmentation becomes the Delta map ``0 -> 0, rest -> 1`` with identity twist."""
    if half_edge is None:
        if not g.out_order:
            raise DomainError("graph has no outgoing leg to standardize at")
        half_edge = g.out_order[0]
    if g.half_edges[half_edge].side != 0:
        raise DomainError("standardization needs an outgoing half-edge")
    _, gpart = factorize(g.augmentation(half_edge))
    return act_on_vertex(g, g.half_edges[half_edge].vertex, gpart)


def standard_multiplication(family, n):
    """``m_n``: input ``i`` sits at slot ``n + 1 - i``, all twists trivial."""
    if n < 1:
        raise DomainError("standard multiplications have arity >= 1")
    e = identity(family, 0)
    return OperadElement(family, tuple(n + 1 - i for i in range(1, n + 1)), (e,) * n)


def unary(t):
    """The arity-1 element whose input carries twist ``t``."""
    return OperadElement(t.family, (1,), (t,))


def operad_compose(a, i, b):
    """``a o_i b``: the output of ``b`` feeds input ``i`` (1-based) of ``a``."""
    if not 1 <= i <= a.arity:
        raise DomainError(f"input {i} out of range for arity {a.arity}")
    if a.family != b.family:
        raise DomainError("elements belong to different families")
    g = concatenate(b.to_graph(), 0, a.to_graph(), i - 1)
    edge = g.edges()[0][0]
    return OperadElement.from_graph(contract_edge(g, edge))


def act_sigma(a, perm):
    """Relabel inputs: input ``i`` of the result is input ``perm[i-1]`` of ``a``."""
    return OperadElement(a.family, tuple(a.slots[p - 1] for p in perm),
                         tuple(a.twists[p - 1] for p in perm))


def p1_iso(x):
    """Identify an arity-1 element with its input twist in ``G_0``."""
    if x.arity != 1:
        raise DomainError("p1_iso expects an arity-1 element")
    return x.twists[0]


def p1_iso_inverse(t):
    return unary(t)


def compute_chi2(f):
    """Push ``f`` through the output of ``m_2`` and read off the input action.

    Returns a wreath element on the two inputs (0-based): after
    standardization input ``i`` sits where input ``perm[i]`` of ``m_2``
    sits, and ``twists[perm[i]]`` is its twist.
    """
    fam = f.family
    m2 = standard_multiplication(fam, 2)
    res = operad_compose(unary(f), 1, m2)
    perm = tuple(m2.slots.index(res.slots[i]) for i in range(2))
    twists = [None, None]
    for i in range(2):
        twists[perm[i]] = res.twists[i]
    return WreathElement(tuple(twists), perm)


# -- traces and eta -------------------------------------------------------------

def trace_corolla(family, n):
    """The standard trace on ``[n]``: every slot incoming with identity twist."""
    return corolla(family, [(1, None)] * (n + 1))


def trace_augmentations(family, n):
    return [standard_augmentation(family, n, s, 1) for s in range(n + 1)]


def compute_eta(n, g, trace_augs=None):
    """``eta_n(g)`` from the factorizations ``phi_i = psi o g_i`` of the trace legs.

    Entry ``i`` is the pullback along the point ``n`` of
    ``g_i o g o g_{sigma^-1(i)}^{-1}`` with ``sigma = lambda_n(g)``.
    """
    fam = g.family
    if trace_augs is None:
        trace_augs = trace_augmentations(fam, n)
    psi = standard_augmentation(fam, n, n, 1)
    gs = []
    for phi in trace_augs:
        d, gi = factorize(phi)
        if d != psi:
            raise DomainError(f"{phi} is not an incoming trace augmentation")
        gs.append(gi)
    sigma = lambda_map(g)
    inv = sigma.inverse()
    twists = []
    for i in range(n + 1):
        x = compose(compose(inverse(gs[inv(i)]), g), gs[i])
        twists.append(point_pullback(x, n))
    return WreathElement(tuple(twists), sigma.values)


def reidentify_twist(t):
    """Pull the edge automorphism of ``t`` back along the point 1 instead of 0.

    ``compute_eta`` identifies ``G_0`` with the stabilizer of the last
    vertex; half-edge twists use the stabilizer of 0.  This map converts
    the second description into the first (it fixes rotations and sends
    ``r^k f`` to ``r^(k-1) f``).
    """
    return point_pullback(edge_automorphism(t), 1)


def eta_by_action(n, g):
    """``eta_n(g)`` read directly from re-framing the standard trace by ``g``.

    Entry ``i`` is the twist of the leg that lands in slot ``i``.
    """
    t = act_on_vertex(trace_corolla(g.family, n), 0, g)
    twists = [None] * (n + 1)
    perm = [0] * (n + 1)
    for j, he in enumerate(t.half_edges):
        twists[he.slot] = he.twist
        perm[j] = he.slot
    return WreathElement(tuple(twists), tuple(perm))


def enumerate_p1(family, winding=None):
    return [unary(t) for t in enumerate_group(family, 0, winding)]
