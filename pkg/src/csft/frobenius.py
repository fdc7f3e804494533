"""Frobenius algebras with a group action, and the checks that make them
valid inputs for the evaluator.

Conventions: basis ``e_0..e_{d-1}``; ``mul[i, j, k]`` is the coefficient of
``e_k`` in ``e_i e_j``; a matrix ``M`` acts on coordinate columns,
``(M x)_r = sum_c M[r, c] x_c``.  The Nakayama map ``F`` is defined by
``beta(a b) = beta(b F(a))``.
"""

from dataclasses import dataclass

import numpy as np

from .csg import g0_word, group_generators
from .errors import DomainError, SingularError, ValidationError
from .operad import compute_chi2, compute_eta, reidentify_twist
from .report import Report
from .tensor import (
    Field, Tensor, contract, invert, matmul, matpow, permute_axes, transpose,
)

ETA_MAX_N = 5
ORDER_BOUND = 1000


class FrobeniusPresentation:
    """Structure constants, unit, trace and the action data of an algebra.

    ``rotation`` and ``reflection`` are the matrices of the rotation
    generator ``(+1,[1])`` and the reflection ``(-1,[0])`` of ``G_0``.  A
    missing rotation is derived from the Nakayama map; a missing reflection
    makes every dihedral check fail.  ``h_action`` maps companion-group
    elements to matrices.
    """

    def __init__(self, field, mul, unit, trace, rotation=None, reflection=None,
                 h_action=None, name=""):
        self.field = field
        self.mul = mul if isinstance(mul, Tensor) else Tensor.from_values(field, mul)
        d = self.mul.shape[0]
        if self.mul.shape != (d, d, d):
            raise ValidationError("mul must have shape (d, d, d)")
        self.dim = d
        self.unit = unit if isinstance(unit, Tensor) else Tensor.from_values(field, unit)
        self.trace = trace if isinstance(trace, Tensor) else Tensor.from_values(field, trace)
        if self.unit.shape != (d,) or self.trace.shape != (d,):
            raise ValidationError("unit and trace must be vectors of length dim")
        self.rotation = self._matrix(rotation)
        self.reflection = self._matrix(reflection)
        self.h_generators = {int(k): self._matrix(v) for k, v in (h_action or {}).items()}
        self.name = name

    def _matrix(self, m):
        if m is None:
            return None
        t = m if isinstance(m, Tensor) else Tensor.from_values(self.field, m)
        if t.shape != (self.dim, self.dim):
            raise ValidationError("action matrices must be dim x dim")
        return t

    # -- derived data ---------------------------------------------------------------
    def basis(self, i):
        v = [0] * self.dim
        v[i] = 1
        return Tensor.from_values(self.field, v)

    def product(self, x, y):
        return contract(contract(x, [0], self.mul, [0]), [0], y, [0])

    def mu2(self):
        """The multiplication as a map tensor with axes ``[out, in1, in2]``."""
        return permute_axes(self.mul, [2, 0, 1])

    def gram(self):
        return contract(self.mul, [2], self.trace, [0])

    def copairing(self):
        """``B^{-1}``: ``sum_a e_a (x) e^a`` with ``beta(e^a e_b) = delta``, axes ``[a, c]``
        giving the coordinates of ``e^a``."""
        return invert(self.gram())

    def identity(self):
        return Tensor.identity(self.field, self.dim)

    # -- JSON -----------------------------------------------------------------------------
    def to_json(self):
        f = self.field

        def mat(m):
            return [[f.to_str(x) for x in row] for row in m.data.tolist()]
        g0 = []
        if self.rotation is not None:
            g0.append({"parity": "even", "matrix": mat(self.rotation)})
        if self.reflection is not None:
            g0.append({"parity": "odd", "matrix": mat(self.reflection)})
        h = None
        if self.h_generators:
            h = [{"element": k, "matrix": mat(v)} for k, v in sorted(self.h_generators.items())]
        out = {
            "field": f.to_json(),
            "dim": self.dim,
            "mul": [[[f.to_str(x) for x in row] for row in plane] for plane in self.mul.data.tolist()],
            "unit": self.unit.entries_str(),
            "trace": self.trace.entries_str(),
            "g0_action": g0,
            "h_action": h,
        }
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, obj):
        try:
            field = Field.from_json(obj["field"])
            d = int(obj["dim"])
            mul = Tensor.from_values(field, obj["mul"])
            if mul.shape != (d, d, d):
                raise ValidationError(f"mul has shape {mul.shape}, expected {(d, d, d)}")
            rot = refl = None
            for k, entry in enumerate(obj.get("g0_action") or []):
                parity = entry.get("parity")
                if parity == "even":
                    rot = entry["matrix"]
                elif parity == "odd":
                    refl = entry["matrix"]
                else:
                    raise ValidationError(f"unknown parity {parity!r}", k)
            h = None
            if obj.get("h_action"):
                h = {int(e["element"]): e["matrix"] for e in obj["h_action"]}
            return cls(field, mul, obj["unit"], obj["trace"], rot, refl, h, obj.get("name", ""))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed algebra JSON: {exc}") from exc


# -- action of G_0 (and H) ----------------------------------------------------------

class ActionTable:
    """Matrices ``U_t`` for ``t`` in ``G_0`` of ``family``.

    ``t = rot^k o refl^e`` with label ``h`` acts by ``R^k S^e V_h``.
    """

    def __init__(self, pres, family):
        self.pres, self.family = pres, family
        self.has_rotation = family.level != 1
        self.rotation_derived = pres.rotation is None
        if self.has_rotation:
            self.R = pres.rotation if pres.rotation is not None else nakayama(pres).matrix
        else:
            self.R = pres.identity()
        self._R_inv = None
        self.S = pres.reflection if family.dihedral else None
        self.V, self.h_conflicts = self._close_h(pres, family)
        self._cache = {}

    @staticmethod
    def _close_h(pres, family):
        grp = family.companion
        I = pres.identity()
        if grp is None:
            return {0: I}, []
        gens = {k: v for k, v in pres.h_generators.items() if k != 0}
        known = {0: I}
        conflicts = []
        frontier = [0]
        while frontier:
            a = frontier.pop()
            for g, M in sorted(gens.items()):
                b = grp.mul(a, g)
                val = matmul(known[a], M)
                if b in known:
                    if known[b] != val:
                        conflicts.append((a, g))
                else:
                    known[b] = val
                    frontier.append(b)
        return known, conflicts

    def h_complete(self):
        grp = self.family.companion
        return grp is None or len(self.V) == grp.order

    def matrix(self, t):
        key = (t.sign, t.lift, t.h)
        if key in self._cache:
            return self._cache[key]
        k, e, h = g0_word(t)
        if e and self.S is None:
            raise DomainError("the algebra carries no reflection action")
        if h not in self.V:
            raise DomainError(f"no action given for companion element {h}")
        if k >= 0:
            M = matpow(self.R, k)
        else:
            if self._R_inv is None:
                self._R_inv = invert(self.R)
            M = matpow(self._R_inv, -k)
        if e:
            M = matmul(M, self.S)
        M = matmul(M, self.V[h])
        self._cache[key] = M
        return M


# -- checks -----------------------------------------------------------------------

def _first_mismatch(a, b):
    diff = np.argwhere(a.data != b.data)
    return None if len(diff) == 0 else tuple(int(x) for x in diff[0])


def _is_automorphism(pres, M, anti=False):
    """Index of the first failure of ``M(e_i e_j) = M e_i M e_j`` (or reversed)."""
    lhs = contract(pres.mul, [2], M, [1])                      # [i, j, r]
    tmp = contract(M, [0], pres.mul, [0])                      # [i, b, r]
    rhs = contract(M, [0], tmp, [1])                           # [j, i, r]
    if not anti:
        rhs = permute_axes(rhs, [1, 0, 2])
    return _first_mismatch(lhs, rhs)


def _preserves_trace(pres, M):
    return contract(pres.trace, [0], M, [0]) == pres.trace


def check_algebra(pres):
    rep = Report()
    m = pres.mul
    c = rep.add("associativity")
    c.instances = pres.dim ** 4
    left = contract(m, [2], m, [0])                           # [i, j, k, q]
    right = permute_axes(contract(m, [2], m, [1]), [2, 0, 1, 3])
    bad = _first_mismatch(left, right)
    if bad is not None:
        c.fail({"i": bad[0], "j": bad[1], "k": bad[2], "q": bad[3]})
    c = rep.add("unit")
    c.instances = 2 * pres.dim
    lu = contract(pres.unit, [0], m, [0])                     # [j, k]
    ru = contract(pres.unit, [0], m, [1])                     # [i, k]
    I = pres.identity()
    if lu != I:
        c.fail({"side": "left", "at": _first_mismatch(lu, I)})
    if ru != I:
        c.fail({"side": "right", "at": _first_mismatch(ru, I)})
    for label, M, anti in (("rotation", pres.rotation, False), ("reflection", pres.reflection, True)):
        if M is None:
            continue
        c = rep.add(f"{label} action is an {'anti-' if anti else ''}automorphism")
        c.instances = pres.dim ** 2
        bad = _is_automorphism(pres, M, anti)
        if bad is not None:
            c.fail({"i": bad[0], "j": bad[1]})
        if matmul(M, pres.unit) != pres.unit:
            c.fail("unit not fixed")
    c = rep.add("gram non-degenerate")
    c.instances = 1
    try:
        invert(pres.gram())
    except SingularError:
        c.fail("Gram matrix is singular")
    return rep


@dataclass(frozen=True)
class NakayamaData:
    matrix: Tensor
    order: object            # int, or None when no order <= bound was found

    def to_json(self):
        return {"matrix": [[self.matrix.field.to_str(x) for x in row] for row in self.matrix.data.tolist()],
                "order": self.order}


def nakayama(pres, bound=ORDER_BOUND):
    """``F = B^{-1} B^T``, rechecked against ``beta(a b) = beta(b F a)``."""
    B = pres.gram()
    F = matmul(invert(B), transpose(B))
    # beta(e_i e_j) = beta(e_j F e_i)  <=>  B[i, j] = sum_k B[j, k] F[k, i]
    if transpose(matmul(B, F)) != B:
        raise SingularError("Nakayama relation failed to verify")
    return NakayamaData(F, multiplicative_order(F, bound))


def multiplicative_order(M, bound=ORDER_BOUND):
    I = Tensor.identity(M.field, M.shape[0])
    P = M
    for k in range(1, bound + 1):
        if P == I:
            return k
        P = matmul(P, M)
    return None


def check_chi2_equivariance(pres, family, actions=None):
    rep = Report()
    c = rep.add("chi2 equivariance")
    actions = actions or ActionTable(pres, family)
    for f in group_generators(family, 0):
        c.instances += 1
        try:
            U = actions.matrix(f)
            w = compute_chi2(f)
            lhs = contract(pres.mul, [2], U, [1])             # [i1, i2, r]
            A0, A1 = actions.matrix(w.twists[0]), actions.matrix(w.twists[1])
            if w.perm == (0, 1):
                # mu(A0 x1, A1 x2)
                rhs = contract(A0, [0], contract(A1, [0], pres.mul, [1]), [1])   # [i1, i2, r]
            else:
                # mu(A0 x2, A1 x1)
                rhs = permute_axes(contract(A0, [0], contract(A1, [0], pres.mul, [1]), [1]),
                                   [1, 0, 2])
        except DomainError as exc:
            c.fail({"generator": str(f), "error": str(exc)})
            continue
        bad = _first_mismatch(lhs, rhs)
        if bad is not None:
            c.fail({"generator": str(f), "at": bad})
    return rep


def trace_tensor(pres, n):
    """``T[a_0, ..., a_n] = beta(e_{a_n} ... e_{a_0})``."""
    Q = pres.identity()                                         # [a_0, c]
    for j in range(1, n + 1):
        Q = contract(Q, [j], pres.mul, [1])                     # [..., a_j, c]
    return contract(Q, [n + 1], pres.trace, [0])


def twisted_trace(T, mats, perm):
    """Apply the wreath element ``(mats; perm)`` to a trace tensor ``T``.

    Slot ``i`` receives ``mats[i]`` applied to leg ``perm^-1(i)``; the
    result is indexed by legs.
    """
    W = T
    for M in mats:
        W = contract(W, [0], M, [0])
    return permute_axes(W, list(perm))


def unreidentify_twist(t):
    """Inverse of ``reidentify_twist``."""
    if t.sign == 1:
        return t
    cand = type(t)(t.family, 0, 0, -1, (t.lift[0] + 1,), t.h)
    if reidentify_twist(cand) != t:
        raise DomainError("twist identification is not invertible here")
    return cand


def eta_invariance(pres, family, n, actions=None, group=None):
    """Failures of the trace on ``[n]`` under ``eta_n(g)`` for ``g`` in ``group``
    (default: a generating set of ``G_n``)."""
    actions = actions or ActionTable(pres, family)
    T = trace_tensor(pres, n)
    fails = []
    gens = group if group is not None else group_generators(family, n)
    for g in gens:
        w = compute_eta(n, g)
        try:
            mats = [actions.matrix(unreidentify_twist(t)) for t in w.twists]
        except DomainError as exc:
            fails.append({"g": str(g), "error": str(exc)})
            continue
        if twisted_trace(T, mats, w.perm) != T:
            fails.append({"g": str(g)})
    return len(gens), fails


def check_relations(pres, family, actions):
    """The action matrices must satisfy the defining relations of ``G_0 x H``."""
    rep = Report()
    I = pres.identity()
    c = rep.add("G0 relations")
    if actions.has_rotation and family.finite:
        c.instances += 1
        if matpow(actions.R, family.level) != I:
            c.fail(f"rotation^{family.level} != id")
    if actions.has_rotation and not family.finite:
        c.instances += 1
        try:
            invert(actions.R)
        except SingularError:
            c.fail("rotation action is singular")
    if family.dihedral:
        c.instances += 2
        if actions.S is None:
            c.fail("no reflection action supplied")
        else:
            if matmul(actions.S, actions.S) != I:
                c.fail("reflection^2 != id")
            if actions.has_rotation:
                S, R = actions.S, actions.R
                if matmul(matmul(S, R), matmul(S, R)) != I:
                    c.fail("reflection o rotation is not an involution")
    if family.companion is not None:
        c.instances += 1
        if not actions.h_complete():
            c.fail("companion action does not reach every group element")
        for a, g in actions.h_conflicts:
            c.fail(f"companion action is not a homomorphism at ({a}, {g})")
        for h, V in actions.V.items():
            c.instances += 1
            if actions.has_rotation and matmul(V, actions.R) != matmul(actions.R, V):
                c.fail(f"companion element {h} does not commute with the rotation")
            if actions.S is not None and matmul(V, actions.S) != matmul(actions.S, V):
                c.fail(f"companion element {h} does not commute with the reflection")
    return rep


def _generic_report(pres, family, actions, max_n):
    rep = Report()
    rep.extend(check_relations(pres, family, actions), "generic: ")
    rep.extend(check_chi2_equivariance(pres, family, actions), "generic: ")
    if family.companion is not None:
        c = rep.add("generic: companion acts by automorphisms")
        for h, V in actions.V.items():
            c.instances += 1
            if _is_automorphism(pres, V) is not None:
                c.fail({"h": h})
    for n in range(0, max_n + 1):
        c = rep.add(f"generic: eta_{n} invariance")
        c.instances, fails = eta_invariance(pres, family, n, actions)
        c.violations.extend(fails)
    return rep


def _family_report(pres, family):
    """The closed-form characterization of valid algebras for ``family``."""
    rep = Report()
    nak = nakayama(pres)
    F, I = nak.matrix, pres.identity()
    c = rep.add("family: Nakayama condition")
    c.instances = 1
    if family.level == 1:
        c.note = "trace must be symmetric"
        if F != I:
            c.fail("Nakayama map is not the identity")
    else:
        if _is_automorphism(pres, F) is not None:
            c.fail("Nakayama map is not an algebra automorphism")
        if pres.rotation is not None and pres.rotation != F:
            c.fail("supplied rotation action differs from the Nakayama map")
        if family.finite:
            c.note = f"F^{family.level} = id (order {nak.order})"
            if matpow(F, family.level) != I:
                c.fail(f"Nakayama map has order {nak.order}, not dividing {family.level}")
        else:
            c.note = "no order constraint"
    if family.dihedral:
        c = rep.add("family: involution")
        c.instances = 1
        S = pres.reflection
        if S is None:
            c.fail("no involution supplied")
        else:
            if _is_automorphism(pres, S, anti=True) is not None:
                c.fail("involution is not an anti-automorphism")
            if matmul(S, S) != I:
                c.fail("involution does not square to the identity")
            if not _preserves_trace(pres, S):
                c.fail("involution does not preserve the trace")
    if family.companion is not None:
        rep.extend(check_equivariant(pres, family), "family: ")
    return rep


def check_equivariant(pres, family):
    """Companion group acts by trace-preserving algebra automorphisms."""
    rep = Report()
    c = rep.add("companion action")
    if family.companion is None:
        c.note = "no companion group"
        return rep
    V, conflicts = ActionTable._close_h(pres, family)
    if len(V) != family.companion.order:
        c.fail("companion action does not reach every group element")
    for a, g in conflicts:
        c.fail(f"not a homomorphism at ({a}, {g})")
    for h, M in sorted(V.items()):
        c.instances += 1
        if _is_automorphism(pres, M) is not None:
            c.fail({"h": h, "reason": "not an algebra automorphism"})
        if not _preserves_trace(pres, M):
            c.fail({"h": h, "reason": "does not preserve the trace"})
        if pres.reflection is not None and family.dihedral:
            if matmul(M, pres.reflection) != matmul(pres.reflection, M):
                c.fail({"h": h, "reason": "does not commute with the involution"})
    return rep


def check_frobenius(pres, family, max_n=ETA_MAX_N):
    """Full report: algebra axioms, the generic invariance conditions and the
    closed-form characterization, plus their agreement."""
    rep = check_algebra(pres)
    if not rep.get("gram non-degenerate").passed:
        return rep
    actions = ActionTable(pres, family)
    generic = _generic_report(pres, family, actions, max_n)
    specific = _family_report(pres, family)
    rep.extend(generic).extend(specific)
    c = rep.add("generic and family verdicts agree")
    c.instances = 1
    if generic.passed != specific.passed:
        c.fail({"generic": generic.passed, "family": specific.passed})
    return rep


def verdicts(pres, family, max_n=ETA_MAX_N):
    """``(algebra_ok, generic_ok, family_ok)`` for cross-validation."""
    alg = check_algebra(pres)
    if not alg.passed:
        return False, False, False
    actions = ActionTable(pres, family)
    return True, _generic_report(pres, family, actions, max_n).passed, _family_report(pres, family).passed


# -- built-in algebras -------------------------------------------------------------

def group_algebra(m, field=None, involution=True):
    """``k[Z/m]`` with ``beta`` = coefficient of the identity; the involution is inversion."""
    field = field or Field.rationals()
    mul = np.zeros((m, m, m), dtype=object)
    for i in range(m):
        for j in range(m):
            mul[i, j, (i + j) % m] = 1
    unit = [1] + [0] * (m - 1)
    inv = [[1 if (r + c) % m == 0 else 0 for c in range(m)] for r in range(m)]
    return FrobeniusPresentation(field, mul.tolist(), unit, unit, None,
                                 inv if involution else None, name=f"k[Z/{m}]")


def matrix_algebra_twisted(d, u, field=None, involution="transpose"):
    """``M_d`` with ``beta(X) = tr(u X)`` for an invertible diagonal ``u``.

    Basis ``E_ab`` at index ``a*d + b``.  The involution is the transpose
    (or ``None``/``"identity"`` for negative controls).
    """
    field = field or Field.rationals()
    u = [field.scalar(x) for x in u]
    D = d * d
    mul = np.zeros((D, D, D), dtype=object)
    for a in range(d):
        for b in range(d):
            for c in range(d):
                mul[a * d + b, b * d + c, a * d + c] = 1
    mul = mul.tolist()
    unit = [1 if a == b else 0 for a in range(d) for b in range(d)]
    trace = [u[a] if a == b else 0 for a in range(d) for b in range(d)]
    if involution == "transpose":
        S = [[1 if (r // d, r % d) == (c % d, c // d) else 0 for c in range(D)] for r in range(D)]
    elif involution == "identity":
        S = [[int(r == c) for c in range(D)] for r in range(D)]
    else:
        S = None
    label = ",".join(field.to_str(x) for x in u)
    return FrobeniusPresentation(field, mul, unit, trace, None, S,
                                 name=f"M_{d}({field}) u=diag({label})")


def truncated_polynomials(m, field=None):
    """``k[x]/x^m`` with ``beta`` = coefficient of ``x^(m-1)``; involution the identity."""
    field = field or Field.rationals()
    mul = np.zeros((m, m, m), dtype=object)
    for i in range(m):
        for j in range(m):
            if i + j < m:
                mul[i, j, i + j] = 1
    unit = [1] + [0] * (m - 1)
    trace = [0] * (m - 1) + [1]
    S = [[int(r == c) for c in range(m)] for r in range(m)]
    return FrobeniusPresentation(field, mul.tolist(), unit, trace, None, S,
                                 name=f"k[x]/x^{m}")


def with_companion_action(pres, matrices):
    """Copy of ``pres`` with ``h_action`` set to ``{element: matrix}``."""
    return FrobeniusPresentation(pres.field, pres.mul, pres.unit, pres.trace,
                                 pres.rotation, pres.reflection, matrices, pres.name)


def with_actions(pres, rotation=None, reflection="keep"):
    return FrobeniusPresentation(pres.field, pres.mul, pres.unit, pres.trace, rotation,
                                 pres.reflection if reflection == "keep" else reflection,
                                 pres.h_generators, pres.name)


def battery():
    """The algebras used throughout the test-suite and the acceptance run."""
    f5 = Field.prime(5)
    algs = [group_algebra(m) for m in range(1, 5)]
    algs += [matrix_algebra_twisted(2, [1, k], f5) for k in (1, 2, 3, 4)]
    algs += [truncated_polynomials(m) for m in range(1, 5)]
    return algs


BUILTINS = {
    "group_algebra": group_algebra,
    "matrix_algebra_twisted": matrix_algebra_twisted,
    "truncated_polynomials": truncated_polynomials,
}


def builtin(name, *args, **kwargs):
    try:
        return BUILTINS[name](*args, **kwargs)
    except KeyError:
        raise ValidationError(f"unknown builtin algebra {name!r}") from None
