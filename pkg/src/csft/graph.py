"""Structured graphs in trivialized form.

Every vertex ``v`` carries a frame identifying its half-edges with the
slots ``0..n_v`` of ``[n_v]``.  A half-edge at ``slot`` is described by its
side (0 outgoing, 1 incoming) and a twist in ``G_0``; together these
determine its augmentation ``[n_v] -> [1]`` (see ``csg.augmentation``).
"""

from dataclasses import dataclass

from .csg import (
    CsgMorphism, Family, _fast, augmentation, compose, identity, inverse,
    lambda_map, read_augmentation,
)
from .errors import (
    ContractLoopError, DomainError, GluingError, NotAnEdgeError, ValidationError,
)


@dataclass(frozen=True)
class HalfEdge:
    vertex: int
    slot: int
    side: int
    twist: CsgMorphism

    def moved(self, vertex=None, slot=None, side=None, twist=None):
        return HalfEdge(self.vertex if vertex is None else vertex,
                        self.slot if slot is None else slot,
                        self.side if side is None else side,
                        self.twist if twist is None else twist)


def _is_g0(t, family):
    return (isinstance(t, CsgMorphism) and t.family == family
            and t.source == 0 and t.target == 0)


class StructuredGraph:
    """An augmented structured graph, i.e. a morphism of the bordism category.

    ``pairing[i]`` is the partner of half-edge ``i`` (``i`` itself when
    external).  ``in_order``/``out_order`` list the external incoming and
    outgoing half-edges in leg order.
    """

    __slots__ = ("family", "arities", "half_edges", "pairing", "in_order", "out_order")

    def __init__(self, family, arities, half_edges, pairing, in_order, out_order):
        self.family = family
        self.arities = tuple(int(a) for a in arities)
        self.half_edges = tuple(half_edges)
        self.pairing = tuple(int(p) for p in pairing)
        self.in_order = tuple(int(i) for i in in_order)
        self.out_order = tuple(int(i) for i in out_order)
        self._validate()

    def _validate(self):
        fam, hs = self.family, self.half_edges
        if len(self.pairing) != len(hs):
            raise ValidationError("pairing must have one entry per half-edge")
        seen = {}
        for i, he in enumerate(hs):
            if not 0 <= he.vertex < len(self.arities):
                raise ValidationError(f"half-edge {i} sits on a missing vertex", i)
            if not 0 <= he.slot <= self.arities[he.vertex]:
                raise ValidationError(f"half-edge {i} has slot out of range", i)
            if he.side not in (0, 1):
                raise ValidationError(f"half-edge {i} has side {he.side}", i)
            if not _is_g0(he.twist, fam) or not he.twist.is_automorphism():
                raise ValidationError(f"half-edge {i} twist is not in G_0 of {fam.label()}", i)
            key = (he.vertex, he.slot)
            if key in seen:
                raise ValidationError(f"half-edges {seen[key]} and {i} share a slot", i)
            seen[key] = i
        for v, n in enumerate(self.arities):
            if n < 0:
                raise ValidationError(f"vertex {v} has negative arity", v)
            for s in range(n + 1):
                if (v, s) not in seen:
                    raise ValidationError(f"slot {s} of vertex {v} is empty", v)
        for i, j in enumerate(self.pairing):
            if not 0 <= j < len(hs) or self.pairing[j] != i:
                raise ValidationError(f"pairing is not an involution at {i}", i)
            if j != i and hs[i].side == hs[j].side:
                raise ValidationError(f"edge {i}-{j} joins two half-edges of the same side", i)
        ext_in = {i for i, j in enumerate(self.pairing) if i == j and hs[i].side == 1}
        ext_out = {i for i, j in enumerate(self.pairing) if i == j and hs[i].side == 0}
        if sorted(self.in_order) != sorted(ext_in):
            raise ValidationError("in_order must list exactly the external incoming half-edges")
        if sorted(self.out_order) != sorted(ext_out):
            raise ValidationError("out_order must list exactly the external outgoing half-edges")
        if not ext_in and not ext_out:
            raise ValidationError("closed graphs are not morphisms")

    # -- basic queries --------------------------------------------------------
    def __eq__(self, other):
        return (isinstance(other, StructuredGraph) and self.family == other.family
                and self.arities == other.arities and self.half_edges == other.half_edges
                and self.pairing == other.pairing and self.in_order == other.in_order
                and self.out_order == other.out_order)

    def __hash__(self):
        return hash((self.arities, self.half_edges, self.pairing, self.in_order, self.out_order))

    def __repr__(self):
        return (f"StructuredGraph({self.family.label()}, vertices={list(self.arities)}, "
                f"edges={self.edges()}, in={list(self.in_order)}, out={list(self.out_order)})")

    @property
    def vertex_count(self):
        return len(self.arities)

    def augmentation(self, i):
        he = self.half_edges[i]
        return augmentation(self.family, self.arities[he.vertex], he.slot, he.side, he.twist)

    def edges(self):
        """Internal edges as ``(outgoing half, incoming half)`` pairs."""
        out = []
        for i, j in enumerate(self.pairing):
            if i != j and self.half_edges[i].side == 0:
                out.append((i, j))
        return out

    def at_vertex(self, v):
        """Half-edge indices at ``v`` ordered by slot."""
        hs = [i for i, he in enumerate(self.half_edges) if he.vertex == v]
        return sorted(hs, key=lambda i: self.half_edges[i].slot)

    def is_loop(self, i):
        j = self.pairing[i]
        return j != i and self.half_edges[i].vertex == self.half_edges[j].vertex

    def components(self):
        """Vertex sets of the connected components."""
        parent = list(range(self.vertex_count))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x
        for i, j in self.edges():
            a, b = find(self.half_edges[i].vertex), find(self.half_edges[j].vertex)
            if a != b:
                parent[max(a, b)] = min(a, b)
        groups = {}
        for v in range(self.vertex_count):
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values())

    def is_connected(self):
        return len(self.components()) == 1

    def is_corolla(self):
        return self.vertex_count == 1 and not self.edges()

    def is_rose(self):
        return self.vertex_count == 1

    def euler_characteristic(self):
        return self.vertex_count - len(self.edges())

    def subgraph(self, vertices):
        """The full subgraph on a union of components, external orders restricted."""
        vs = sorted(vertices)
        vmap = {v: k for k, v in enumerate(vs)}
        keep = [i for i, he in enumerate(self.half_edges) if he.vertex in vmap]
        hmap = {i: k for k, i in enumerate(keep)}
        for i in keep:
            if self.pairing[i] not in hmap:
                raise ValidationError("subgraph must be a union of components")
        hs = [self.half_edges[i].moved(vertex=vmap[self.half_edges[i].vertex]) for i in keep]
        return StructuredGraph(self.family, [self.arities[v] for v in vs], hs,
                               [hmap[self.pairing[i]] for i in keep],
                               [hmap[i] for i in self.in_order if i in hmap],
                               [hmap[i] for i in self.out_order if i in hmap])

    # -- JSON ----------------------------------------------------------------
    def to_json(self):
        comp = self.family.companion is not None
        return {
            "family": self.family.to_json(),
            "vertices": list(self.arities),
            "half_edges": [{"v": he.vertex, "slot": he.slot, "side": he.side,
                            "twist": he.twist.to_json(), "h": he.twist.h if comp else None}
                           for he in self.half_edges],
            "pairing": [[i, j] for i, j in enumerate(self.pairing) if i < j],
            "in": list(self.in_order),
            "out": list(self.out_order),
        }

    @classmethod
    def from_json(cls, obj, family=None):
        try:
            fam = family if family is not None else Family.from_json(obj["family"])
            hs = []
            for k, raw in enumerate(obj["half_edges"]):
                tw = raw.get("twist")
                h = raw.get("h")
                if tw is None:
                    twist = identity(fam, 0)
                else:
                    twist = CsgMorphism.from_json(tw, fam)
                if h is not None and h != twist.h:
                    twist = _fast(fam, 0, 0, twist.sign, twist.lift, int(h))
                hs.append(HalfEdge(int(raw["v"]), int(raw["slot"]), int(raw["side"]), twist))
            pairing = list(range(len(hs)))
            for k, pair in enumerate(obj.get("pairing", [])):
                a, b = (int(x) for x in pair)
                if not (0 <= a < len(hs) and 0 <= b < len(hs)) or pairing[a] != a or pairing[b] != b:
                    raise ValidationError(f"bad pairing entry {pair}", k)
                pairing[a], pairing[b] = b, a
            return cls(fam, obj["vertices"], hs, pairing, obj["in"], obj["out"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed graph JSON: {exc}") from exc


# -- constructors -------------------------------------------------------------

def corolla(family, legs, in_order=None, out_order=None):
    """One-vertex graph.  ``legs[s] = (side, twist)`` for slot ``s``; a twist of
    ``None`` means the identity.  Leg orders default to slot order."""
    n = len(legs) - 1
    hs = []
    for s, (side, twist) in enumerate(legs):
        hs.append(HalfEdge(0, s, side, identity(family, 0) if twist is None else twist))
    if in_order is None:
        in_order = [s for s, he in enumerate(hs) if he.side == 1]
    if out_order is None:
        out_order = [s for s, he in enumerate(hs) if he.side == 0]
    return StructuredGraph(family, [n], hs, range(len(hs)), in_order, out_order)


def disjoint_union(g1, g2):
    if g1.family != g2.family:
        raise GluingError("graphs belong to different families")
    off_v, off_h = g1.vertex_count, len(g1.half_edges)
    hs = list(g1.half_edges) + [he.moved(vertex=he.vertex + off_v) for he in g2.half_edges]
    pairing = list(g1.pairing) + [p + off_h for p in g2.pairing]
    return StructuredGraph(g1.family, g1.arities + g2.arities, hs, pairing,
                           g1.in_order + tuple(i + off_h for i in g2.in_order),
                           g1.out_order + tuple(i + off_h for i in g2.out_order))


def glue(g, out_leg, in_leg):
    """Pair external outgoing leg ``out_leg`` with external incoming leg ``in_leg``
    (positions in ``out_order``/``in_order``) of the same graph."""
    try:
        p, q = g.out_order[out_leg], g.in_order[in_leg]
    except IndexError:
        raise GluingError("leg index out of range") from None
    pairing = list(g.pairing)
    pairing[p], pairing[q] = q, p
    ins = [i for i in g.in_order if i != q]
    outs = [i for i in g.out_order if i != p]
    if not ins and not outs:
        raise GluingError("gluing would close the graph")
    return StructuredGraph(g.family, g.arities, g.half_edges, pairing, ins, outs)


def concatenate(g1, out_leg, g2, in_leg):
    """Feed outgoing leg ``out_leg`` of ``g1`` into incoming leg ``in_leg`` of ``g2``.

    The incoming legs of ``g1`` are spliced into ``g2``'s incoming order at
    the glued position, and the outgoing legs of ``g2`` into ``g1``'s
    outgoing order likewise.
    """
    if g1.family != g2.family:
        raise GluingError("graphs belong to different families")
    if not 0 <= out_leg < len(g1.out_order):
        raise GluingError(f"g1 has no outgoing leg {out_leg}")
    if not 0 <= in_leg < len(g2.in_order):
        raise GluingError(f"g2 has no incoming leg {in_leg}")
    off_v, off_h = g1.vertex_count, len(g1.half_edges)
    hs = list(g1.half_edges) + [he.moved(vertex=he.vertex + off_v) for he in g2.half_edges]
    pairing = list(g1.pairing) + [p + off_h for p in g2.pairing]
    p = g1.out_order[out_leg]
    q = g2.in_order[in_leg] + off_h
    pairing[p], pairing[q] = q, p
    ins2 = [i + off_h for i in g2.in_order]
    outs1 = list(g1.out_order)
    ins = ins2[:in_leg] + list(g1.in_order) + ins2[in_leg + 1:]
    outs = outs1[:out_leg] + [i + off_h for i in g2.out_order] + outs1[out_leg + 1:]
    return StructuredGraph(g1.family, g1.arities + g2.arities, hs, pairing, ins, outs)


def concatenate_legs(g1, g2, pairs):
    """Glue several legs at once: ``pairs`` lists ``(out_leg of g1, in_leg of g2)``."""
    if not pairs:
        raise GluingError("nothing to glue")
    pairs = list(pairs)
    (j0, i0), rest = pairs[0], pairs[1:]
    g = concatenate(g1, j0, g2, i0)
    n_in1 = len(g1.in_order)
    # where the remaining legs ended up after the first splice
    outs_map = {}
    for j in range(len(g1.out_order)):
        if j < j0:
            outs_map[j] = j
        elif j > j0:
            outs_map[j] = j - 1 + len(g2.out_order)
    ins_map = {}
    for i in range(len(g2.in_order)):
        if i < i0:
            ins_map[i] = i
        elif i > i0:
            ins_map[i] = i - 1 + n_in1
    glued = []
    for j, i in rest:
        glued.append((g.out_order[outs_map[j]], g.in_order[ins_map[i]]))
    for p, q in glued:
        g = glue(g, g.out_order.index(p), g.in_order.index(q))
    return g


# -- contraction --------------------------------------------------------------

def fiber_product(a, b):
    """Pullback of two augmentations ``a: [n] -> [1]``, ``b: [m] -> [1]``.

    ``a`` must single out one slot with value 0 and ``b`` one slot with
    value 1, as the two ends of a directed edge do.  Returns
    ``(pi_a, pi_b)`` with ``a o pi_a = b o pi_b`` on ``[n + m - 1]``.
    """
    fam = a.family
    n, m = a.source, b.source
    if a.target != 1 or b.target != 1:
        raise DomainError("fiber_product expects two maps into [1]")
    if n + m == 0:
        raise DomainError("contracting [0] against [0] leaves no object")
    if list(a.set_map()).count(0) != 1 or list(b.set_map()).count(1) != 1:
        raise DomainError("augmentations do not single out one slot each")
    s = a.sign * b.sign
    pairs = []
    b0 = b.ext(0)
    for x in range(-(n + 1), 3 * (n + 1)):
        v = a.ext(x)
        yc = b.sign * ((v - b0) // 2) * (m + 1)
        for y in range(yc - 2 * (m + 1), yc + 2 * (m + 1) + 1):
            if b.ext(y) == v:
                pairs.append((x, y))
    pairs.sort(key=lambda p: (p[0], s * p[1]))
    base = next(k for k, p in enumerate(pairs) if p[0] >= 0)
    x0, y0 = pairs[base]
    end = pairs.index((x0 + n + 1, y0 + s * (m + 1)))
    window = pairs[base:end]
    k = len(window) - 1
    if k != n + m - 1:
        raise DomainError("augmentations do not single out one slot each")
    hb = fam.h_mul(fam.h_inv(b.h), a.h)
    pi_a = _fast(fam, k, n, 1, tuple(x for x, _ in window))
    pi_b = _fast(fam, k, m, s, tuple(y for _, y in window), hb)
    return pi_a, pi_b


def _rebuild(g, drop, vertex_map, new_arities, updates):
    """Remove half-edges in ``drop`` and apply per-half-edge ``updates``."""
    keep = [i for i in range(len(g.half_edges)) if i not in drop]
    hmap = {i: k for k, i in enumerate(keep)}
    hs = []
    for i in keep:
        he = updates.get(i, g.half_edges[i])
        hs.append(he.moved(vertex=vertex_map[he.vertex]) if i not in updates
                  else he)
    pairing = [hmap[g.pairing[i]] for i in keep]
    return StructuredGraph(g.family, new_arities, hs, pairing,
                           [hmap[i] for i in g.in_order], [hmap[i] for i in g.out_order])


def contract_edge(g, e):
    """Contract the internal edge containing half-edge ``e``."""
    if not 0 <= e < len(g.half_edges):
        raise NotAnEdgeError(f"no half-edge {e}")
    f = g.pairing[e]
    if f == e:
        raise NotAnEdgeError(f"half-edge {e} is external")
    p, q = (e, f) if g.half_edges[e].side == 0 else (f, e)
    u, v = g.half_edges[p].vertex, g.half_edges[q].vertex
    if u == v:
        raise ContractLoopError(f"edge {p}-{q} is a loop")
    pi_u, pi_v = fiber_product(g.augmentation(p), g.augmentation(q))
    size = pi_u.source + 1
    n = g.arities[u]
    pu = g.half_edges[p].slot
    # slot k of the merged vertex is (x, q) or (p, y)
    slot_of_u, slot_of_v = {}, {}
    for k in range(size):
        x, y = pi_u.lift[k] % (n + 1), pi_v.lift[k] % (g.arities[v] + 1)
        if x == pu:
            slot_of_v[y] = k
        else:
            slot_of_u[x] = k
    merged = min(u, v)
    others = [w for w in range(g.vertex_count) if w not in (u, v)]
    order = sorted(others + [merged])
    vertex_map = {w: order.index(w) for w in others}
    vertex_map[u] = vertex_map[v] = order.index(merged)
    new_arities = [size - 1 if w == merged else g.arities[w] for w in order]
    updates = {}
    for i, he in enumerate(g.half_edges):
        if i in (p, q) or he.vertex not in (u, v):
            continue
        proj = pi_u if he.vertex == u else pi_v
        slot = (slot_of_u if he.vertex == u else slot_of_v)[he.slot]
        side, twist = read_augmentation(compose(proj, g.augmentation(i)), slot)
        updates[i] = HalfEdge(vertex_map[he.vertex], slot, side, twist)
    return _rebuild(g, {p, q}, vertex_map, new_arities, updates)


def act_on_vertex(g, v, a):
    """Re-frame vertex ``v`` by ``a`` in ``G_{n_v}``: each augmentation ``alpha``
    becomes ``alpha o a^{-1}``."""
    if a.source != g.arities[v] or not a.is_automorphism() or a.family != g.family:
        raise DomainError(f"{a} is not in G_{g.arities[v]}")
    ainv = inverse(a)
    perm = lambda_map(a)
    updates = {}
    for i, he in enumerate(g.half_edges):
        if he.vertex != v:
            continue
        slot = perm(he.slot)
        side, twist = read_augmentation(compose(ainv, g.augmentation(i)), slot)
        updates[i] = HalfEdge(v, slot, side, twist)
    hs = [updates.get(i, he) for i, he in enumerate(g.half_edges)]
    return StructuredGraph(g.family, g.arities, hs, g.pairing, g.in_order, g.out_order)


def normalize_to_rose(g):
    """Contract non-loop edges until each component has a single vertex."""
    while True:
        for p, q in g.edges():
            if not g.is_loop(p):
                g = contract_edge(g, p)
                break
        else:
            return g


def reorder_vertices(g, order):
    """Renumber vertices so that old vertex ``order[k]`` becomes ``k``."""
    vmap = {old: k for k, old in enumerate(order)}
    hs = [he.moved(vertex=vmap[he.vertex]) for he in g.half_edges]
    return StructuredGraph(g.family, [g.arities[v] for v in order], hs, g.pairing,
                           g.in_order, g.out_order)
