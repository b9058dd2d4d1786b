"""Finite groups acting strictly on DG-categories, and linearisations.

An action assigns a DG-functor g^* to every group element with 1^* = id and
(gh)^* = h^* g^* holding on the nose. A linearisation of A is a family of
closed, strictly invertible degree-0 maps lambda_g: A -> g^*(A) with
lambda_1 = id and lambda_{gh} = h^*(lambda_g) . lambda_h.

A morphism phi: (A, lambda) -> (A', lambda') is invariant when
lambda'_g . phi = g^*(phi) . lambda_g for all g.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Any

from .complexes import CochainComplex, validate_complex
from .dg import (
    CheckReport,
    DGCategory,
    DGFunctor,
    DGMorphism,
    IdentityFunctor,
    ComposedFunctor,
    functors_agree,
    strict_inverse,
    validate_functor,
)
from .linalg import (
    Matrix,
    is_zero_vector,
    kernel_basis,
    left_inverse,
    vec_add,
    vec_scale,
    vstack,
    zero_vector,
)
from .polysolve import Poly, UnsupportedSystemError, solve_system


class GroupTableError(ValueError):
    pass


class UnsupportedEnumerationError(ValueError):
    pass


class FiniteGroup:
    """Group given by its multiplication table on elements 0..n-1."""

    def __init__(self, table, generator=None, name=None):
        table = tuple(tuple(int(x) for x in row) for row in table)
        n = len(table)
        if n == 0 or any(len(r) != n for r in table):
            raise GroupTableError("multiplication table must be a nonempty square")
        if any(not 0 <= x < n for r in table for x in r):
            raise GroupTableError("table entries must be element indices")
        ident = next((e for e in range(n)
                      if all(table[e][g] == g and table[g][e] == g for g in range(n))), None)
        if ident is None:
            raise GroupTableError("table has no identity element")
        for a, b, c in itertools.product(range(n), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise GroupTableError(f"table is not associative at ({a}, {b}, {c})")
        inverses = []
        for g in range(n):
            inv = next((h for h in range(n) if table[g][h] == ident), None)
            if inv is None or table[inv][g] != ident:
                raise GroupTableError(f"element {g} has no inverse")
            inverses.append(inv)
        self.table = table
        self.identity = ident
        self.inverses = tuple(inverses)
        self.generator = generator
        self.name = name or f"group of order {n}"
        if generator is not None:
            if len({self.power(generator, k) for k in range(n)}) != n:
                raise GroupTableError(f"element {generator} does not generate the group")

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        if n < 1:
            raise GroupTableError("cyclic group order must be positive")
        table = [[(a + b) % n for b in range(n)] for a in range(n)]
        return cls(table, generator=1 % n, name=f"Z/{n}")

    @property
    def order(self):
        return len(self.table)

    @property
    def elements(self):
        return range(self.order)

    def mul(self, g, h):
        return self.table[g][h]

    def inv(self, g):
        return self.inverses[g]

    def power(self, g, k):
        x = self.identity
        for _ in range(k):
            x = self.mul(x, g)
        return x

    @property
    def is_cyclic(self):
        return self.generator is not None

    def __repr__(self):
        return self.name


class StrictAction:
    """g |-> g^* with g^* given by ``functors[g]``."""

    def __init__(self, group: FiniteGroup, category: DGCategory, functors, name="action"):
        self.group = group
        self.category = category
        self.functors = dict(functors) if not callable(functors) else {
            g: functors(g) for g in group.elements}
        self.name = name

    def functor(self, g) -> DGFunctor:
        return self.functors[g]

    def obj(self, g, X):
        return self.functors[g].obj(X)

    def __call__(self, g, f: DGMorphism) -> DGMorphism:
        return self.functors[g](f)


def trivial_action(category, group=None):
    group = group or FiniteGroup.cyclic(1)
    ident = IdentityFunctor(category)
    return StrictAction(group, category, {g: ident for g in group.elements}, name="trivial")


def validate_strict_action(act: StrictAction, sample) -> CheckReport:
    """1^* = id, (gh)^* = h^* g^* and each g^* a DG-functor, on samples."""
    sample = list(sample)
    G, A = act.group, act.category
    rep = CheckReport(f"strict action {act.name}", sample=[A.describe(X) for X in sample])
    r = functors_agree(act.functor(G.identity), IdentityFunctor(A), sample)
    rep.checked += r.checked
    for f in r.failures:
        rep.fail(f"1^* is not the identity: {f}")
    for g in G.elements:
        rep.merge(validate_functor(act.functor(g), sample))
    for g, h in itertools.product(G.elements, repeat=2):
        lhs = act.functor(G.mul(g, h))
        rhs = ComposedFunctor(act.functor(h), act.functor(g))
        r = functors_agree(lhs, rhs, sample)
        rep.checked += r.checked
        for f in r.failures:
            rep.fail(f"composition law fails for (g, h) = ({g}, {h}): {f}")
    return rep


@dataclass(frozen=True)
class Linearisation:
    """An object together with lambda_g: obj -> g^*(obj), indexed by element."""

    obj: Any
    maps: tuple
    label: str = dc_field(default="", compare=False)

    def lam(self, g) -> DGMorphism:
        return self.maps[g]

    def __hash__(self):
        try:
            return self._h
        except AttributeError:
            h = hash((self.obj, self.maps))
            object.__setattr__(self, "_h", h)
            return h

    def __repr__(self):
        return self.label or f"Lin({self.obj!r})"


def forget(L: Linearisation):
    return L.obj


def validate_linearisation(act: StrictAction, L: Linearisation) -> CheckReport:
    """Failures are prefixed by their kind: shape, identity, degree, closed,
    cocycle or invertible."""
    G, A = act.group, act.category
    rep = CheckReport("linearisation", sample=[A.describe(L.obj)])
    X = L.obj
    if len(L.maps) != G.order:
        rep.fail(f"shape: {len(L.maps)} maps for a group of order {G.order}")
        return rep
    for g in G.elements:
        lg = L.lam(g)
        rep.checked += 1
        if lg.source != X or lg.target != act.obj(g, X):
            rep.fail(f"shape: lambda_{g} is not a map A -> g^*(A)")
            return rep
    rep.checked += 1
    if L.lam(G.identity) != A.identity(X):
        rep.fail("identity: lambda_1 != id")
    for g in G.elements:
        lg = L.lam(g)
        rep.checked += 2
        if not lg.is_homogeneous(0):
            rep.fail(f"degree: lambda_{g} is not of degree 0")
        if not A.is_closed(lg):
            rep.fail(f"closed: d(lambda_{g}) != 0")
    for g, h in itertools.product(G.elements, repeat=2):
        rep.checked += 1
        rhs = A.compose(act(h, L.lam(g)), L.lam(h))
        if L.lam(G.mul(g, h)) != rhs:
            rep.fail(f"cocycle: lambda_{G.mul(g, h)} != {h}^*(lambda_{g}) . lambda_{h}")
    for g in G.elements:
        rep.checked += 1
        if L.lam(g).is_homogeneous(0) and strict_inverse(A, L.lam(g)) is None:
            rep.fail(f"invertible: lambda_{g} has no strict inverse")
    return rep


def linearisation_from_generator(act: StrictAction, X, lam_gen: DGMorphism, label=""):
    """Fill lambda_{g^k} from lambda_g by the cocycle, for a cyclic group."""
    G, A = act.group, act.category
    if not G.is_cyclic:
        raise UnsupportedEnumerationError("group has no distinguished generator")
    g = G.generator
    maps = {G.identity: A.identity(X)}
    cur, elt = A.identity(X), G.identity
    for _ in range(1, G.order):
        # lambda_{g^k . g}... use lambda_{a b} = b^*(lambda_a) . lambda_b with a = g, b = g^k
        cur = A.compose(act(elt, lam_gen), cur)
        elt = G.mul(g, elt)
        maps[elt] = cur
    return Linearisation(X, tuple(maps[e] for e in G.elements), label)


@dataclass
class Enumeration:
    """Linearisations of one object, one per solution of the closure equation.

    ``free_directions[i]`` lists directions (as maps A -> g^*A) along which
    lambda_g of the i-th result may move without leaving the solution set.
    """

    obj: Any
    parameter_basis: list
    linearisations: list
    free_directions: list
    rejected_noninvertible: int = 0


def enumerate_linearisations_cyclic(act: StrictAction, X) -> Enumeration:
    G, A = act.group, act.category
    F = A.field
    if not G.is_cyclic:
        raise UnsupportedEnumerationError("enumeration needs a cyclic group with a generator")
    if G.order == 1:
        L = Linearisation(X, (A.identity(X),))
        return Enumeration(X, [], [L], [[]])
    g = G.generator
    T = act.obj(g, X)
    H = A.hom(X, T)
    V = list(kernel_basis(H.differential(0)).basis) if H.dim(0) else []
    r = len(V)
    if r > 2:
        raise UnsupportedEnumerationError(
            f"closed degree-0 part of Hom(A, g^*A) has dimension {r} > 2")
    # lambda_g as polynomial coordinates in the unknowns c_0..c_{r-1}
    lam_g = [Poly(F, r) for _ in range(H.dim(0))]
    for i, v in enumerate(V):
        ci = Poly.var(F, r, i)
        lam_g = [p + ci.scale(x) for p, x in zip(lam_g, v)]
    cur = [Poly.const(F, r, x) for x in A.identity_vector(X)]   # lambda_1 = id
    elt = G.identity
    for _ in range(G.order):
        # lambda_{g . elt} = elt^*(lambda_g) . lambda_elt
        src_obj = act.obj(elt, X)
        tgt_obj = act.obj(G.mul(g, elt), X)
        Hcur = A.hom(X, src_obj)
        Hnext = A.hom(X, tgt_obj)
        moved = [act.functor(elt).map_vector(X, T, 0, v) for v in V]
        nxt = [Poly(F, r) for _ in range(Hnext.dim(0))]
        for i, w in enumerate(moved):
            ci = Poly.var(F, r, i)
            for a in range(Hcur.dim(0)):
                if cur[a].is_zero():
                    continue
                e = tuple(F.one if b == a else F.zero for b in range(Hcur.dim(0)))
                prod = A.compose_vectors(X, src_obj, tgt_obj, 0, w, 0, e)
                coef = ci * cur[a]
                nxt = [p + coef.scale(x) for p, x in zip(nxt, prod)]
        cur = nxt
        elt = G.mul(g, elt)
    assert elt == G.identity
    equations = [p - Poly.const(F, r, x) for p, x in zip(cur, A.identity_vector(X))]
    try:
        sols = solve_system(F, r, equations)
    except UnsupportedSystemError as exc:
        raise UnsupportedEnumerationError(str(exc)) from exc
    out, dirs, rejected = [], [], 0
    for sol in sols:
        vec = zero_vector(F, H.dim(0))
        for c, v in zip(sol.point, V):
            vec = vec_add(vec, vec_scale(c, v))
        lam = DGMorphism.make(X, T, {0: vec})
        if strict_inverse(A, lam) is None:
            rejected += 1
            continue
        L = linearisation_from_generator(act, X, lam)
        out.append(L)
        fd = []
        for direction in sol.free_directions:
            dv = zero_vector(F, H.dim(0))
            for c, v in zip(direction, V):
                dv = vec_add(dv, vec_scale(c, v))
            fd.append(DGMorphism.make(X, T, {0: dv}))
        dirs.append(fd)
    basis = [DGMorphism.make(X, T, {0: v}) for v in V]
    return Enumeration(X, basis, out, dirs, rejected)


# --- invariant morphisms ----------------------------------------------------------

def invariance_operator(act: StrictAction, L: Linearisation, L2: Linearisation, k) -> Matrix:
    """phi |-> (lambda'_g . phi - g^*(phi) . lambda_g)_g on Hom(A, A')^k."""
    A = act.category
    F = A.field
    X, Y = L.obj, L2.obj
    n = A.hom(X, Y).dim(k)
    blocks = []
    for g in act.group.elements:
        gY = act.obj(g, Y)
        post = A.postcompose_matrix(L2.lam(g), X, k)            # Hom(X,Y)^k -> Hom(X,gY)^k
        pre = A.precompose_matrix(L.lam(g), gY, k)              # Hom(gX,gY)^k -> Hom(X,gY)^k
        moved = act.functor(g).hom_matrix(X, Y, k)              # Hom(X,Y)^k -> Hom(gX,gY)^k
        blocks.append(post - pre @ moved if moved.nrows else post)
    rows = sum(b.nrows for b in blocks)
    return vstack(F, blocks, n) if rows else Matrix.zeros(F, 0, n)


@dataclass
class InvariantHom:
    complex: CochainComplex
    inclusion: dict      # degree -> Matrix, columns = basis in Hom(A, A')^k
    retraction: dict     # degree -> Matrix, left inverse of inclusion


def invariant_hom_complex(act: StrictAction, L: Linearisation, L2: Linearisation) -> InvariantHom:
    A = act.category
    F = A.field
    X, Y = L.obj, L2.obj
    H = A.hom(X, Y)
    bases, inc, ret = {}, {}, {}
    for k in H.degrees():
        K = kernel_basis(invariance_operator(act, L, L2, k))
        if K.dim:
            bases[k] = K.basis
            inc[k] = Matrix.from_columns(F, K.basis, H.dim(k))
            ret[k] = left_inverse(F, K.basis, H.dim(k))
    diffs = {}
    for k, basis in bases.items():
        if k + 1 not in bases:
            for v in basis:
                if not is_zero_vector(H.apply_d(k, v)):
                    raise AssertionError(f"d does not preserve invariant morphisms in degree {k}")
            continue
        cols = []
        for v in basis:
            dv = H.apply_d(k, v)
            c = ret[k + 1].apply(dv)
            if inc[k + 1].apply(c) != dv:
                raise AssertionError(f"d does not preserve invariant morphisms in degree {k}")
            cols.append(c)
        diffs[k] = Matrix.from_columns(F, cols, len(bases[k + 1]))
    labels = {k: [f"inv{k}_{i}" for i in range(len(b))] for k, b in bases.items()}
    C = CochainComplex(F, {k: len(b) for k, b in bases.items()}, diffs, labels)
    assert validate_complex(C).ok
    return InvariantHom(C, inc, ret)


@dataclass
class StarReport:
    holds: bool
    failing_degrees: list

    def __bool__(self):
        return self.holds


def check_star_condition(act: StrictAction, L: Linearisation, L2: Linearisation) -> StarReport:
    """Does invariance of d(phi) force invariance of phi?  Per degree:
    ker(T_{k+1} . d_k) must lie inside ker(T_k)."""
    A = act.category
    X, Y = L.obj, L2.obj
    H = A.hom(X, Y)
    failing = []
    for k in H.degrees():
        Tk = invariance_operator(act, L, L2, k)
        dk = H.differential(k)
        if H.dim(k + 1):
            TD = invariance_operator(act, L, L2, k + 1) @ dk
        else:
            TD = Matrix.zeros(A.field, 0, H.dim(k))
        for v in kernel_basis(TD).basis:
            if not is_zero_vector(Tk.apply(v)):
                failing.append(k)
                break
    return StarReport(not failing, failing)


# --- inflation ---------------------------------------------------------------------

def inflate(act: StrictAction, X) -> Linearisation:
    """(+)_g g^*(X) with lambda_h moving summand g to position g h^{-1}."""
    G, A = act.group, act.category
    summands = [act.obj(g, X) for g in G.elements]
    S = A.direct_sum(summands)
    maps = []
    for h in G.elements:
        moved = [act.obj(h, Y) for Y in summands]
        if act.obj(h, S) != A.direct_sum(moved):
            raise AssertionError("action does not commute with direct sums")
        blocks = {}
        for g in G.elements:
            target_pos = G.mul(g, G.inv(h))
            blocks[(target_pos, g)] = A.identity(summands[g])
        maps.append(A.block_morphism(summands, moved, blocks))
    return Linearisation(S, tuple(maps), f"Inf({A.describe(X)})")
