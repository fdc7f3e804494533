"""Brute-force checks of the categorical axioms at small sizes.

Nothing here trusts ``factorize`` or ``fiber_product``: hom-sets are
produced by scanning lift windows, and every universal property is
checked by exhausting the candidates.  Bulk composition of whole hom-sets
goes through the integer kernels.
"""

import itertools
from math import comb

import numpy as np

from . import _kernels
from .csg import (
    CsgMorphism, KINDS, augmentation, compose, dualize, enumerate_group, factorize,
    lambda_map, morphism, point,
)
from .errors import DomainError
from .graph import fiber_product
from .report import Report

DEFAULT_WINDING = 3


# -- enumeration ---------------------------------------------------------------

def _start_range(family, m, winding):
    if family.finite:
        return range(family.level * (m + 1))
    return range(-winding * (m + 1), winding * (m + 1))


def _monotone_steps(n, total):
    """Nonnegative step vectors of length ``n`` with sum at most ``total``."""
    if n == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in _monotone_steps(n - 1, total - first):
            yield (first,) + rest


def enumerate_hom(family, n, m, winding=DEFAULT_WINDING):
    """Every morphism ``[n] -> [m]`` found by scanning lifts.

    Finite families: ``0 <= F(0) < level * (m + 1)``.  Para families use the
    window ``-winding*(m+1) <= F(0) < winding*(m+1)``.
    """
    signs = (1, -1) if family.dihedral else (1,)
    out = []
    for h in range(family.h_order):
        for s in signs:
            for f0 in _start_range(family, m, winding):
                for steps in _monotone_steps(n, m + 1):
                    lift = [f0]
                    for d in steps:
                        lift.append(lift[-1] + s * d)
                    out.append(morphism(family, n, m, s, lift, h))
    return out


def expected_hom_count(family, n, m, winding=DEFAULT_WINDING):
    """``|G_n| * C(n + m + 1, n + 1)``, with ``G_n`` cut to the scan window."""
    if family.finite:
        g = family.group_order(n)
    else:
        g = 2 * winding * (n + 1) * (2 if family.dihedral else 1) * family.h_order
    return g * comb(n + m + 1, n + 1)


def delta_maps(family, n, m):
    """Monotone maps ``[n] -> [m]`` as morphisms of ``family``."""
    return [morphism(family, n, m, 1, c)
            for c in itertools.combinations_with_replacement(range(m + 1), n + 1)]


# -- bulk composition ----------------------------------------------------------

class _HomTable:
    """A hom-set as arrays, with a key index for fast lookup."""

    def __init__(self, family, n, m, morphisms):
        self.family, self.n, self.m = family, n, m
        self.items = morphisms
        self.lifts = np.array([f.lift for f in morphisms], dtype=np.int64).reshape(-1, n + 1)
        self.signs = np.array([f.sign for f in morphisms], dtype=np.int64)
        self.hs = np.array([f.h for f in morphisms], dtype=np.int64)
        keys = _keys(family, m, self.lifts, self.signs, self.hs)
        self.order = np.argsort(keys, kind="stable")
        self.sorted_keys = keys[self.order]
        if len(np.unique(keys)) != len(keys):
            raise DomainError("hom-set listing has duplicates")

    def lookup(self, lifts, signs, hs):
        """Indices of the given morphisms, or -1 where absent."""
        keys = _keys(self.family, self.m, lifts, signs, hs)
        pos = np.searchsorted(self.sorted_keys, keys)
        pos = np.clip(pos, 0, len(self.sorted_keys) - 1)
        found = self.sorted_keys[pos] == keys
        return np.where(found, self.order[pos], -1)


def _normalize_rows(family, m, lifts):
    if family.level is None:
        return lifts
    q = family.level * (m + 1)
    return lifts - (lifts[:, :1] // q) * q


def _keys(family, m, lifts, signs, hs):
    lifts = _normalize_rows(family, m, lifts)
    base = 8 * (m + 2) * (family.level or 8)
    key = np.zeros(len(lifts), dtype=np.int64)
    for c in range(lifts.shape[1]):
        key = key * base + (lifts[:, c] + base // 2)
    key = key * 2 + (signs < 0)
    return key * max(family.h_order, 1) + hs


def compose_all(family, left, right):
    """Compose every ``f`` in ``left`` with every ``g`` in ``right`` (``g o f``).

    Returns ``(lifts, signs, hs)`` flattened in row-major ``(f, g)`` order.
    """
    n1 = left.lifts.shape[1]
    lifts = _kernels.compose_lifts(left.lifts, right.lifts, right.signs,
                                   left.m + 1, right.m + 1)
    nf, ng = len(left.items), len(right.items)
    lifts = lifts.reshape(nf * ng, n1)
    signs = np.multiply.outer(left.signs, right.signs).reshape(-1)
    if not np.all(_kernels.monotone_ok(lifts, signs, right.m + 1)):
        raise DomainError("batched composition produced a non-monotone lift")
    table = np.array(family.companion.table if family.companion is not None else [[0]],
                     dtype=np.int64)
    hs = table[right.hs[None, :], left.hs[:, None]].reshape(-1)
    return lifts, signs, hs


# -- reports -----------------------------------------------------------------

def verify_enumeration(family, max_n, winding=DEFAULT_WINDING):
    rep = Report()
    c = rep.add("hom-set sizes")
    g = rep.add("group orders")
    for n in range(max_n + 1):
        for m in range(max_n + 1):
            homs = enumerate_hom(family, n, m, winding)
            c.instances += 1
            want = expected_hom_count(family, n, m, winding)
            if len(homs) != want or len(set(homs)) != len(homs):
                c.fail({"n": n, "m": m, "found": len(homs), "expected": want})
        if family.finite:
            g.instances += 1
            autos = [f for f in enumerate_hom(family, n, n) if f.is_automorphism()]
            lib = enumerate_group(family, n)
            if set(autos) != set(lib) or len(lib) != family.group_order(n):
                g.fail({"n": n, "scan": len(autos), "library": len(lib)})
    return rep


def verify_factorization_unique(family, max_n, max_m=None, winding=DEFAULT_WINDING,
                                compose_fn=compose, factorize_fn=factorize):
    """Every morphism is ``phi o g`` for exactly one pair, and it is the canonical one.

    ``compose_fn`` and ``factorize_fn`` can be swapped for corrupted versions
    to check that the oracle notices.
    """
    max_m = max_n if max_m is None else max_m
    rep = Report()
    uniq = rep.add("unique factorization")
    canon = rep.add("factorize returns the unique pair")
    for n in range(max_n + 1):
        group = enumerate_group(family, n, None if family.finite else winding + 1)
        for m in range(max_m + 1):
            deltas = delta_maps(family, n, m)
            hits = {}
            for g in group:
                for phi in deltas:
                    f = compose_fn(g, phi)
                    hits.setdefault(f, []).append((phi, g))
            for f in enumerate_hom(family, n, m, winding):
                uniq.instances += 1
                pairs = hits.get(f, [])
                if len(pairs) != 1:
                    uniq.fail({"morphism": str(f), "pairs": len(pairs)})
                    continue
                canon.instances += 1
                got = factorize_fn(f)
                if (got[0], got[1]) != pairs[0]:
                    canon.fail({"morphism": str(f), "factorize": [str(x) for x in got]})
    return rep


def broken_compose(f, g):
    """A deliberately wrong composition: drops any rotation of an automorphism."""
    if f.is_automorphism() and f.sign == 1 and f.lift[0] != 0:
        return compose(morphism(f.family, f.source, f.source, 1, range(f.source + 1), f.h), g)
    return compose(f, g)


def _cones(family, k, n, m, a, b, winding):
    """Pairs ``(c, d)`` with ``a o c = b o d``, grouped through the common value."""
    left, right = {}, {}
    for c in enumerate_hom(family, k, n, winding):
        left.setdefault(compose(c, a), []).append(c)
    for d in enumerate_hom(family, k, m, winding):
        right.setdefault(compose(d, b), []).append(d)
    return [(c, d) for key, cs in left.items() for c in cs for d in right.get(key, [])]


def admissible_cospans(family, n, m, winding=1):
    """All augmentation pairs ``[n] -> [1] <- [m]`` of an edge: out slot, in slot, twists."""
    if n + m == 0:
        return
    twists = enumerate_group(family, 0, None if family.finite else winding)
    for i in range(n + 1):
        for j in range(m + 1):
            for s, t in itertools.product(twists, repeat=2):
                yield (augmentation(family, n, i, 0, s), augmentation(family, m, j, 1, t))


def verify_pullback_universal(family, n, m, apex=2, winding=1, cospans=None):
    """The contraction square commutes and is universal among cones with apex ``<= apex``.

    For para families the cones are only those visible in the lift window,
    so universality is checked there.
    """
    rep = Report()
    square = rep.add("square commutes")
    univ = rep.add("universal property")
    cospans = admissible_cospans(family, n, m, winding) if cospans is None else cospans
    for a, b in cospans:
        pa, pb = fiber_product(a, b)
        square.instances += 1
        if compose(pa, a) != compose(pb, b):
            square.fail({"a": str(a), "b": str(b)})
            continue
        p = pa.source
        for k in range(apex + 1):
            induced = {}
            for u in enumerate_hom(family, k, p, winding + 1):
                induced.setdefault((compose(u, pa), compose(u, pb)), []).append(u)
            for c, d in _cones(family, k, n, m, a, b, winding):
                univ.instances += 1
                us = induced.get((c, d), [])
                if len(us) != 1:
                    univ.fail({"a": str(a), "b": str(b), "cone": [str(c), str(d)],
                               "factorizations": len(us)})
    return rep


def reject_non_admissible(family, n, m):
    """A cospan that collapses nothing is refused before any computation."""
    a = morphism(family, n, 1, 1, [0] * (n + 1))
    b = morphism(family, m, 1, 1, [1] * (m + 1))
    try:
        fiber_product(a, b)
    except DomainError:
        return True
    return False


def _singles_out(values, i):
    """Whether ``i`` is alone in its fibre under the set map ``values``."""
    return [k for k, v in enumerate(values) if v == values[i]] == [i]


def verify_duality(family, max_n, winding=1, clause_max_n=4):
    """Involution, contravariance, and the collapse pattern of dual edge maps."""
    rep = Report()
    inv = rep.add("involution")
    contra = rep.add("contravariance")
    clause = rep.add("dual of an edge singles out one element")
    tables, duals = {}, {}
    for a in range(max_n + 1):
        for b in range(max_n + 1):
            homs = enumerate_hom(family, a, b, winding)
            tables[a, b] = _HomTable(family, a, b, homs)
    for (a, b), t in tables.items():
        back = tables[b, a]
        d = [dualize(f) for f in t.items]
        for f, df in zip(t.items, d):
            inv.instances += 1
            if dualize(df) != f:
                inv.fail({"morphism": str(f)})
        if family.finite:
            idx = back.lookup(np.array([x.lift for x in d], dtype=np.int64).reshape(-1, b + 1),
                              np.array([x.sign for x in d], dtype=np.int64),
                              np.array([x.h for x in d], dtype=np.int64))
            duals[a, b] = idx
    if family.finite:
        for a, b, c in itertools.product(range(max_n + 1), repeat=3):
            left, right = tables[a, b], tables[b, c]
            lifts, signs, hs = compose_all(family, left, right)
            comp = tables[a, c].lookup(lifts, signs, hs)
            # D(g o f) looked up in Hom(c, a)
            lhs = np.where(comp >= 0, duals[a, c][np.maximum(comp, 0)], -2)
            dl, ds, dh = compose_all(family, _dual_table(tables, duals, b, c),
                                     _dual_table(tables, duals, a, b))
            rhs = tables[c, a].lookup(dl, ds, dh).reshape(len(right.items), len(left.items)).T
            rhs = rhs.reshape(-1)
            contra.instances += len(lhs)
            bad = np.nonzero(lhs != rhs)[0]
            for k in bad[:5]:
                f, g = left.items[k // len(right.items)], right.items[k % len(right.items)]
                contra.fail({"f": str(f), "g": str(g)})
            if len(bad) > 5:
                contra.fail({"more": int(len(bad) - 5)})
    else:
        for (a, b), t in tables.items():
            for c in range(max_n + 1):
                for f in t.items:
                    for g in tables[b, c].items:
                        contra.instances += 1
                        if dualize(compose(f, g)) != compose(dualize(g), dualize(f)):
                            contra.fail({"f": str(f), "g": str(g)})
    for n in range(1, clause_max_n + 1):
        for i in range(1, n + 2):
            clause.instances += 1
            edge = morphism(family, 1, n, 1, (i - 1, i))
            dual = dualize(edge)
            if not _singles_out(dual.set_map(), (n + 1 - i) % (n + 1)):
                clause.fail({"n": n, "i": i, "dual": str(dual)})
    return rep


def _dual_table(tables, duals, a, b):
    """``D(Hom(a, b))`` as a table over ``Hom(b, a)``, in the order of ``Hom(a, b)``."""
    key = ("dual", a, b)
    if key not in tables:
        back = tables[b, a]
        idx = duals[a, b]
        t = object.__new__(_HomTable)
        t.family, t.n, t.m = back.family, b, a
        t.items = [back.items[i] for i in idx]
        t.lifts, t.signs, t.hs = back.lifts[idx], back.signs[idx], back.hs[idx]
        tables[key] = t
    return tables[key]


def _stabilizer(group, i):
    return [g for g in group if lambda_map(g)(i) == i]


def verify_balanced(family, max_n, winding=1):
    """Stabilizers pull back bijectively to ``G_0``, and ``1_1^* = 0_1^*``."""
    rep = Report()
    bij = rep.add("stabilizer pullback is bijective")
    ends = rep.add("both ends of [1] pull back alike")
    w = None if family.finite else winding
    g0 = enumerate_group(family, 0, None if family.finite else winding * 4 + 2)

    def pull(g, i):
        # the unique t in G_0 with g o i = i o t, by search
        target = compose(point(family, g.source, i), g)
        hits = [t for t in g0 if compose(t, point(family, g.source, i)) == target]
        return hits[0] if len(hits) == 1 else None
    # one extra turn so that shifted pullbacks still cover the inner window
    wide = None if family.finite else winding + 1
    for n in range(max_n + 1):
        group = enumerate_group(family, n, wide)
        for i in range(n + 1):
            bij.instances += 1
            stab = _stabilizer(group, i)
            images = [pull(g, i) for g in stab]
            if any(x is None for x in images) or len(set(images)) != len(images):
                bij.fail({"n": n, "i": i, "reason": "not injective"})
                continue
            if family.finite and set(images) != set(enumerate_group(family, 0)):
                bij.fail({"n": n, "i": i, "reason": "not surjective"})
            elif not family.finite:
                inner = set(enumerate_group(family, 0, winding))
                if not inner <= set(images):
                    bij.fail({"n": n, "i": i, "reason": "window not covered"})
    group1 = enumerate_group(family, 1, w)
    s0, s1 = _stabilizer(group1, 0), _stabilizer(group1, 1)
    ends.instances += len(s0)
    if set(s0) != set(s1):
        ends.fail({"reason": "stabilizers of 0 and 1 differ"})
    else:
        for g in s0:
            if pull(g, 0) != pull(g, 1):
                ends.fail({"element": str(g)})
    return rep


# -- a family that is not balanced -------------------------------------------------

class SemiconstantMock:
    """``Delta x BH``: monotone maps paired with labels of a finite group ``H``.

    Its automorphism groups are all ``H``, so stabilizers pull back
    bijectively, but there is no contravariant self-duality sending edges
    to maps that single out one element.
    """

    def __init__(self, order=2):
        self.order = order

    def hom(self, n, m):
        return [(tuple(c), h)
                for c in itertools.combinations_with_replacement(range(m + 1), n + 1)
                for h in range(self.order)]

    def group(self, n):
        return [(tuple(range(n + 1)), h) for h in range(self.order)]

    def pullback(self, g, i):
        return ((0,), g[1])


def verify_balanced_mock(mock, max_n=4):
    """The balanced checks for the semi-constant family; the duality clause fails."""
    rep = Report()
    bij = rep.add("stabilizer pullback is bijective")
    clause = rep.add("dual of an edge singles out one element")
    for n in range(max_n + 1):
        for i in range(n + 1):
            bij.instances += 1
            images = [mock.pullback(g, i) for g in mock.group(n)]
            if len(set(images)) != len(images) or set(images) != set(mock.group(0)):
                bij.fail({"n": n, "i": i})
    for n in range(1, max_n + 1):
        maps = mock.hom(n, 1)
        for i in range(1, n + 2):
            clause.instances += 1
            want = (n + 1 - i) % (n + 1)
            found = any(_singles_out(lift, want) for lift, _ in maps)
            if not found:
                clause.fail({"n": n, "i": i, "reason": "no map singles out this element"})
    return rep


def run_all(family, max_n=3, winding=1, apex=1):
    """Every oracle at the given size, merged into one report."""
    rep = Report()
    rep.extend(verify_enumeration(family, max_n, winding), "enumeration: ")
    rep.extend(verify_factorization_unique(family, max_n, winding=winding), "factorization: ")
    rep.extend(verify_duality(family, max_n, winding, clause_max_n=max_n), "duality: ")
    rep.extend(verify_balanced(family, max_n, winding), "balanced: ")
    pb_n = min(max_n, 2)
    for n in range(pb_n + 1):
        for m in range(pb_n + 1):
            rep.extend(verify_pullback_universal(family, n, m, apex, winding),
                       f"pullback {n},{m}: ")
    return rep


__all__ = [
    "CsgMorphism", "KINDS", "enumerate_hom", "expected_hom_count", "delta_maps",
    "verify_enumeration", "verify_factorization_unique", "broken_compose",
    "verify_pullback_universal", "admissible_cospans", "reject_non_admissible",
    "verify_duality", "verify_balanced", "SemiconstantMock", "verify_balanced_mock",
    "run_all", "compose_all",
]
