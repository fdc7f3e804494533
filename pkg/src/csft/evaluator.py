"""Evaluate structured graphs against a Frobenius algebra with group action.

A graph with ``m`` outgoing and ``n`` incoming legs evaluates to a tensor
of rank ``m + n``: axes ``[out legs in out_order, in legs in in_order]``.

``evaluate`` contracts every component to a rose and reads the rose off as
a product: after standardizing at its first outgoing leg, the value is the
product of the remaining slots in decreasing slot order, each slot
contributing its leg twisted by ``U_t``.  Extra outgoing legs are bent
back through the copairing and loops are closed with it.
``evaluate_network`` is an independent route that evaluates every vertex
separately and contracts the tensors along edges.
"""

import random

from .csg import enumerate_group, group_generators, identity
from .errors import ClosedMorphismError, ContextError, DomainError
from .frobenius import ActionTable, check_frobenius, twisted_trace, unreidentify_twist
from .graph import (
    StructuredGraph, act_on_vertex, concatenate, concatenate_legs, contract_edge,
    corolla, normalize_to_rose,
)
from .operad import compute_eta, standard_multiplication, standardize
from .report import Report
from .tensor import contract, invert, outer, permute_axes, trace_axes, transpose


class EvaluationContext:
    """An algebra, a family and the tensors the evaluator keeps reusing."""

    def __init__(self, pres, family, validate=False):
        self.pres = pres
        self.family = family
        self.field = pres.field
        self.actions = ActionTable(pres, family)
        self.copairing = invert(pres.gram())
        # reflected legs read the pairing in the opposite order
        self.copairing_reversed = invert(transpose(pres.gram()))
        self._right = {}
        if validate:
            rep = check_frobenius(pres, family)
            if not rep.passed:
                raise ContextError(f"{pres.name or 'algebra'} is not valid for {family.label()}")
        # sanity: the pairing and copairing are mutually inverse, unit is a unit
        if contract(pres.gram(), [1], self.copairing, [0]) != pres.identity():
            raise ContextError("copairing does not invert the pairing")
        if contract(pres.unit, [0], pres.mul, [1]) != pres.identity():
            raise ContextError("unit is not a right unit")

    def bend(self, t):
        """Copairing used to turn an outgoing leg with twist ``t`` around."""
        return self.copairing if t.sign == 1 else self.copairing_reversed

    def twist_matrix(self, t):
        return self.actions.matrix(t)

    def right_multiplier(self, t):
        """``R[a, c, c'] = coefficient of e_c' in e_c * U_t(e_a)``."""
        key = (t.sign, t.lift, t.h)
        if key not in self._right:
            U = self.twist_matrix(t)
            # sum_y U[y, a] mul[c, y, c']
            self._right[key] = contract(U, [0], self.pres.mul, [1])
        return self._right[key]


class _Labeled:
    """A tensor whose axes carry labels."""

    __slots__ = ("tensor", "labels")

    def __init__(self, tensor, labels):
        self.tensor, self.labels = tensor, list(labels)

    def arranged(self, labels):
        return permute_axes(self.tensor, [self.labels.index(x) for x in labels])


def _join(a, b, pairs):
    """Contract ``a`` and ``b`` along label pairs ``(label in a, label in b)``."""
    ax_a = [a.labels.index(x) for x, _ in pairs]
    ax_b = [b.labels.index(y) for _, y in pairs]
    t = contract(a.tensor, ax_a, b.tensor, ax_b)
    labels = [x for i, x in enumerate(a.labels) if i not in ax_a]
    labels += [y for i, y in enumerate(b.labels) if i not in ax_b]
    return _Labeled(t, labels)


def _self_join(a, x, y):
    i, j = a.labels.index(x), a.labels.index(y)
    t = trace_axes(a.tensor, i, j)
    return _Labeled(t, [lab for k, lab in enumerate(a.labels) if k not in (i, j)])


def _check_context(g, ctx):
    if not isinstance(g, StructuredGraph):
        raise ContextError("expected a StructuredGraph")
    if g.family != ctx.family:
        raise ContextError(f"graph family {g.family.label()} differs from context {ctx.family.label()}")


# -- the rose route ----------------------------------------------------------------------

def _rose_value(rose, ctx):
    """Labeled value of a one-vertex graph; labels are half-edge indices."""
    pres = ctx.pres
    externals = set(rose.in_order) | set(rose.out_order)
    if not externals:
        raise ClosedMorphismError("component has no external legs")
    outs = [i for i in rose.out_order]
    if outs:
        rose = standardize(rose, outs[0])
        top = outs[0]
    else:
        top = None
    hs = rose.half_edges
    by_slot = {he.slot: i for i, he in enumerate(hs)}
    n = rose.arities[0]
    lowest = 1 if top is not None else 0
    # running product, coordinate axis labelled "c"
    P = _Labeled(pres.unit, ["c"])
    pending = {}
    for s in range(n, lowest - 1, -1):
        i = by_slot[s]
        R = ctx.right_multiplier(hs[i].twist)
        P = _join(P, _Labeled(R, [i, "c_in", "c_next"]), [("c", "c_in")])
        P.labels[P.labels.index("c_next")] = "c"
        j = rose.pairing[i]
        if j != i:
            if j in pending:
                out_half, in_half = (i, j) if hs[i].side == 0 else (j, i)
                # sum_b e_b at the outgoing half, e^b fed to the incoming half
                Kt = _Labeled(ctx.bend(hs[out_half].twist), [("k", out_half), ("k", in_half)])
                P = _join(P, Kt, [(out_half, ("k", out_half))])
                P = _self_join(P, in_half, ("k", in_half))
                del pending[j]
            else:
                pending[i] = True
        elif hs[i].side == 0:
            P = _join(P, _Labeled(ctx.bend(hs[i].twist), [("b", i), i]), [(i, ("b", i))])
    if top is not None:
        P.labels[P.labels.index("c")] = top
    else:
        P = _join(P, _Labeled(pres.trace, ["t"]), [("c", "t")])
    return P


def _component_order(g):
    comps = g.components()
    pos = {}
    for k, i in enumerate(list(g.out_order) + list(g.in_order)):
        pos[i] = k

    def key(vs):
        hits = [pos[i] for i, he in enumerate(g.half_edges) if he.vertex in vs and i in pos]
        if not hits:
            raise ClosedMorphismError("graph has a closed component")
        return min(hits)
    return sorted(comps, key=key)


def evaluate(g, ctx):
    """The linear map of ``g``: axes ``[outs in out_order, ins in in_order]``."""
    _check_context(g, ctx)
    if not g.in_order and not g.out_order:
        raise ClosedMorphismError("closed graphs are not evaluated")
    pieces = []
    for comp in _component_order(g):
        sub_ids = [i for i, he in enumerate(g.half_edges) if he.vertex in comp]
        sub = g.subgraph(comp)
        rose = normalize_to_rose(sub)
        # contraction keeps the external orders, so legs match by position
        t = _rose_value(rose, ctx).arranged(list(rose.out_order) + list(rose.in_order))
        labels = [sub_ids[x] for x in list(sub.out_order) + list(sub.in_order)]
        pieces.append(_Labeled(t, labels))
    total = pieces[0]
    for p in pieces[1:]:
        total = _Labeled(outer(total.tensor, p.tensor), total.labels + p.labels)
    return total.arranged(list(g.out_order) + list(g.in_order))


# -- the network route --------------------------------------------------------------------

def evaluate_corolla_direct(g, ctx):
    """Value of a single-vertex graph without loops, read in its own frame.

    Uses the trace formula ``beta(Y_n ... Y_0)`` over all slots with every
    outgoing leg bent through the copairing.  No standardization, so this
    agrees with ``evaluate`` only for algebras valid for the family.
    """
    _check_context(g, ctx)
    if g.vertex_count != 1 or g.edges():
        raise DomainError("expected a corolla")
    pres = ctx.pres
    hs = g.half_edges
    by_slot = {he.slot: i for i, he in enumerate(hs)}
    P = _Labeled(pres.unit, ["c"])
    for s in range(g.arities[0], -1, -1):
        i = by_slot[s]
        R = ctx.right_multiplier(hs[i].twist)
        P = _join(P, _Labeled(R, [i, "c_in", "c_next"]), [("c", "c_in")])
        P.labels[P.labels.index("c_next")] = "c"
        if hs[i].side == 0:
            P = _join(P, _Labeled(ctx.bend(hs[i].twist), [("b", i), i]), [(i, ("b", i))])
    P = _join(P, _Labeled(pres.trace, ["t"]), [("c", "t")])
    return P.arranged(list(g.out_order) + list(g.in_order))


def vertex_corolla(g, v):
    """The corolla of vertex ``v`` with all its half-edges as legs.

    Returns ``(corolla, ids)`` where ``ids[k]`` is the half-edge of ``g``
    sitting at slot ``k``.
    """
    ids = g.at_vertex(v)
    legs = [(g.half_edges[i].side, g.half_edges[i].twist) for i in ids]
    return corolla(g.family, legs), ids


def evaluate_network(g, ctx):
    """Evaluate each vertex on its own and contract along the edges."""
    _check_context(g, ctx)
    if not g.in_order and not g.out_order:
        raise ClosedMorphismError("closed graphs are not evaluated")
    for comp in g.components():
        if not any(g.half_edges[i].vertex in comp for i in list(g.in_order) + list(g.out_order)):
            raise ClosedMorphismError("graph has a closed component")
    total = None
    for v in range(g.vertex_count):
        c, ids = vertex_corolla(g, v)
        t = evaluate(c, ctx)
        lab = _Labeled(t, [ids[s] for s in list(c.out_order) + list(c.in_order)])
        total = lab if total is None else _Labeled(outer(total.tensor, lab.tensor),
                                                   total.labels + lab.labels)
        # close every edge whose two ends are now present
        for p, q in g.edges():
            if p in total.labels and q in total.labels:
                total = _self_join(total, p, q)
    return total.arranged(list(g.out_order) + list(g.in_order))


def compose_values(t1, g1, t2, g2, pairs):
    """Glue tensor values the way ``concatenate_legs(g1, g2, pairs)`` glues graphs."""
    off = len(g1.half_edges)
    a = _Labeled(t1, list(g1.out_order) + list(g1.in_order))
    b = _Labeled(t2, [off + i for i in list(g2.out_order) + list(g2.in_order)])
    joins = [(g1.out_order[j], off + g2.in_order[i]) for j, i in pairs]
    joined = _join(a, b, joins)
    glued = concatenate_legs(g1, g2, pairs)
    return joined.arranged(list(glued.out_order) + list(glued.in_order)), glued


# -- random graphs -------------------------------------------------------------------------

def _twist_pool(family):
    return enumerate_group(family, 0, None if family.finite else 2)


def random_rose(family, rng, max_legs=4, loops=1, need_in=False, need_out=False):
    """A random one-vertex graph with up to ``loops`` loops."""
    pool = _twist_pool(family)
    while True:
        k = rng.randint(1, max_legs)
        sides = [rng.randint(0, 1) for _ in range(k)]
        twists = [rng.choice(pool) for _ in range(k)]
        c = corolla(family, list(zip(sides, twists)))
        ins, outs = list(c.in_order), list(c.out_order)
        nl = rng.randint(0, loops)
        pairing = list(range(k))
        for _ in range(nl):
            if len(ins) >= 1 and len(outs) >= 1 and len(ins) + len(outs) > 2:
                p, q = rng.choice(outs), rng.choice(ins)
                outs.remove(p)
                ins.remove(q)
                pairing[p], pairing[q] = q, p
        if need_in and not ins:
            continue
        if need_out and not outs:
            continue
        if not ins and not outs:
            continue
        rng.shuffle(ins)
        rng.shuffle(outs)
        return StructuredGraph(family, c.arities, c.half_edges, pairing, ins, outs)


def random_graph(family, rng, max_vertices=5, max_legs=4, max_total=10, extra_edges=1):
    """A random connected graph: a random tree of vertices plus extra edges.

    ``max_legs`` bounds the half-edges per vertex, ``max_total`` the number
    of half-edges left after all tree edges are contracted.
    """
    pool = _twist_pool(family)
    while True:
        nv = rng.randint(1, max_vertices)
        sizes = [rng.randint(1, max_legs) for _ in range(nv)]
        hs, owner = [], []
        for v, k in enumerate(sizes):
            for s in range(k):
                hs.append((v, s, rng.randint(0, 1), rng.choice(pool)))
                owner.append(v)
        pairing = list(range(len(hs)))
        free = set(range(len(hs)))
        ok = True
        # tree edges: join vertex v to an earlier vertex
        for v in range(1, nv):
            u = rng.randrange(v)
            a = [i for i in free if owner[i] == v]
            b = [i for i in free if owner[i] == u]
            choices = [(x, y) for x in a for y in b if hs[x][2] != hs[y][2]]
            if not choices:
                ok = False
                break
            x, y = rng.choice(choices)
            pairing[x], pairing[y] = y, x
            free -= {x, y}
        if not ok:
            continue
        for _ in range(rng.randint(0, extra_edges)):
            outs = [i for i in free if hs[i][2] == 0]
            ins = [i for i in free if hs[i][2] == 1]
            if outs and ins and len(free) > 2:
                x, y = rng.choice(outs), rng.choice(ins)
                pairing[x], pairing[y] = y, x
                free -= {x, y}
        if not free:
            continue
        if len(hs) - 2 * (nv - 1) > max_total:
            continue
        from .graph import HalfEdge
        half_edges = [HalfEdge(v, s, side, t) for v, s, side, t in hs]
        ins = sorted(i for i in free if hs[i][2] == 1)
        outs = sorted(i for i in free if hs[i][2] == 0)
        rng.shuffle(ins)
        rng.shuffle(outs)
        return StructuredGraph(family, sizes and [k - 1 for k in sizes], half_edges,
                               pairing, ins, outs)


def _with_spare_input(g):
    """Append an untwisted incoming leg at a new top slot of vertex 0."""
    from .graph import HalfEdge
    n = g.arities[0] + 1
    hs = list(g.half_edges) + [HalfEdge(0, n, 1, identity(g.family, 0))]
    k = len(g.half_edges)
    return StructuredGraph(g.family, [n] + list(g.arities[1:]), hs,
                           list(g.pairing) + [k], list(g.in_order) + [k], g.out_order)


def random_vertex_element(family, n, rng):
    return rng.choice(enumerate_group(family, n, None if family.finite else 2))


# -- harnesses ----------------------------------------------------------------------------

def verify_functoriality(ctx, trials=200, seed=0, double_trials=None, max_legs=4):
    """Glue random roses and compare the glued value with the contracted graph."""
    rng = random.Random(seed)
    fam = ctx.family
    rep = Report()
    single = rep.add("single gluing")
    double = rep.add("double gluing")
    double_trials = trials // 2 if double_trials is None else double_trials
    for kind, count, check in (("single", trials, single), ("double", double_trials, double)):
        for t in range(count):
            trial_seed = rng.randrange(1 << 30)
            r = random.Random(trial_seed)
            npairs = 1 if kind == "single" else 2
            g1 = random_rose(fam, r, max_legs, need_out=True)
            g2 = random_rose(fam, r, max_legs, need_in=True)
            if len(g1.out_order) < npairs or len(g2.in_order) < npairs:
                # regenerate until there are enough legs to glue
                while len(g1.out_order) < npairs:
                    g1 = random_rose(fam, r, max_legs, need_out=True)
                while len(g2.in_order) < npairs:
                    g2 = random_rose(fam, r, max_legs, need_in=True)
            legs = sum(len(x.in_order) + len(x.out_order) for x in (g1, g2))
            if legs == 2 * npairs:
                # gluing would close the graph; add a spare leg to g2
                g2 = _with_spare_input(g2)
            outs = r.sample(range(len(g1.out_order)), npairs)
            ins = r.sample(range(len(g2.in_order)), npairs)
            pairs = list(zip(outs, ins))
            check.instances += 1
            lhs, glued = compose_values(evaluate(g1, ctx), g1, evaluate(g2, ctx), g2, pairs)
            first_edge = next(p for p, _ in glued.edges() if not glued.is_loop(p))
            rhs = evaluate(contract_edge(glued, first_edge), ctx)
            if lhs != rhs:
                check.fail({"seed": trial_seed, "pairs": pairs})
    return rep


def pachner_pair(family, rng):
    """Two two-vertex graphs related by re-association, with random frames.

    Both carry the same leaf twists and leaf order; each vertex is then
    re-framed by a random group element.
    """
    pool = _twist_pool(family)
    m2 = standard_multiplication(family, 2)
    twists = [rng.choice(pool) for _ in range(3)]
    order = list(range(3))
    rng.shuffle(order)
    graphs = []
    for i in (1, 2):
        g = concatenate(m2.to_graph(), 0, m2.to_graph(), i - 1)
        # leaf twists: replace the identity twists of the incoming legs
        hs = list(g.half_edges)
        for pos, h in enumerate(g.in_order):
            hs[h] = hs[h].moved(twist=twists[pos])
        g = StructuredGraph(family, g.arities, hs, g.pairing,
                            [g.in_order[k] for k in order], g.out_order)
        for v in range(g.vertex_count):
            g = act_on_vertex(g, v, random_vertex_element(family, g.arities[v], rng))
        graphs.append(g)
    return graphs


def verify_pachner(ctx, trials=200, seed=0):
    """Re-associating two adjacent trivalent vertices does not change the value."""
    rng = random.Random(seed)
    rep = Report()
    c = rep.add("2-2 move")
    for _ in range(trials):
        trial_seed = rng.randrange(1 << 30)
        r = random.Random(trial_seed)
        g1, g2 = pachner_pair(ctx.family, r)
        c.instances += 1
        a, b = evaluate_network(g1, ctx), evaluate_network(g2, ctx)
        if a != b or evaluate(g1, ctx) != a:
            c.fail({"seed": trial_seed})
    return rep


def verify_invariance(ctx, trials=200, seed=0, max_vertices=5, max_legs=4, max_total=10):
    """Vertex re-framing and contraction order do not change the value."""
    rng = random.Random(seed)
    fam = ctx.family
    rep = Report()
    frames = rep.add("vertex automorphisms")
    orders = rep.add("contraction order")
    network = rep.add("rose value equals network value")
    for _ in range(trials):
        trial_seed = rng.randrange(1 << 30)
        r = random.Random(trial_seed)
        g = random_graph(fam, r, max_vertices, max_legs, max_total)
        base = evaluate(g, ctx)
        network.instances += 1
        if evaluate_network(g, ctx) != base:
            network.fail({"seed": trial_seed})
        frames.instances += 1
        h = g
        for v in range(g.vertex_count):
            h = act_on_vertex(h, v, random_vertex_element(fam, g.arities[v], r))
        if evaluate(h, ctx) != base:
            frames.fail({"seed": trial_seed})
        orders.instances += 1
        k = g
        while True:
            tree = [p for p, q in k.edges() if not k.is_loop(p)]
            if not tree:
                break
            k = contract_edge(k, r.choice(tree))
        if evaluate(k, ctx) != base:
            orders.fail({"seed": trial_seed})
    return rep


def verify_reframed_traces(ctx, max_n=3, winding=1):
    """Invariance of every re-framed trace, not just the standard one.

    For each frame ``h`` of ``G_n`` the trace corolla is re-framed by ``h``;
    its value must be fixed by ``eta_n(g)`` computed from the re-framed
    legs, for every generator ``g``.
    """
    fam = ctx.family
    rep = Report()
    c = rep.add("re-framed traces are invariant")
    for n in range(max_n + 1):
        frames = enumerate_group(fam, n, None if fam.finite else winding)
        for h in frames:
            y = act_on_vertex(trace_graph(fam, n + 1), 0, h)
            augs = [y.augmentation(i) for i in range(n + 1)]
            order = list(y.in_order)
            # value with axes in half-edge order, matching augs
            T = permute_axes(evaluate(y, ctx), [order.index(i) for i in range(n + 1)])
            for g in group_generators(fam, n):
                c.instances += 1
                w = compute_eta(n, g, augs)
                mats = [ctx.twist_matrix(unreidentify_twist(t)) for t in w.twists]
                if twisted_trace(T, mats, w.perm) != T:
                    c.fail({"n": n, "frame": str(h), "g": str(g)})
    return rep


# -- named graphs -------------------------------------------------------------------------

def trace_graph(family, n):
    """``b_n``: the corolla on ``[n-1]`` with all ``n`` legs incoming."""
    return corolla(family, [(1, None)] * n)


def cotrace_graph(family, n):
    return corolla(family, [(0, None)] * n)


def b2_after_p2(family):
    """The first output of the two-cotrace fed into the first input of the two-trace.

    One incoming leg (the second input of ``b_2``) and one outgoing leg
    (the second output of ``p_2``) remain; the value is the identity.
    Crossing the legs instead gives the Nakayama automorphism or its inverse.
    """
    return concatenate(cotrace_graph(family, 2), 0, trace_graph(family, 2), 0)


def handle_graph(family):
    """One vertex with a loop, one incoming and one outgoing leg, no twists."""
    e = identity(family, 0)
    c = corolla(family, [(0, e), (1, e), (0, e), (1, e)])
    # slot 2 (out) feeds slot 3 (in)
    return StructuredGraph(family, c.arities, c.half_edges, [0, 1, 3, 2], [1], [0])


def p1_graph(family):
    return cotrace_graph(family, 1)


def b1_graph(family):
    return trace_graph(family, 1)
