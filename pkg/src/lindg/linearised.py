"""The category A^G of linearised objects and functors between such categories.

Hom complexes of A^G are the invariant subcomplexes computed in ``group``;
they are stored in their own coordinates, and composition goes through the
base category via the inclusion and retraction matrices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Any

from .complexes import cohomology
from .dg import (
    CheckReport,
    ComposedFunctor,
    DGCategory,
    DGFunctor,
    DGMorphism,
    IdentityFunctor,
    PreconditionError,
    functors_agree,
    h0_is_isomorphism,
    strict_inverse,
)
from .group import (
    Linearisation,
    StrictAction,
    invariant_hom_complex,
    validate_strict_action,
)
from .linalg import Matrix, is_zero_vector, kernel_basis, rank


class ConstructionError(ValueError):
    pass


class LinearisedCategory(DGCategory):
    name = "linearised"

    def __init__(self, act: StrictAction):
        super().__init__(act.category.field)
        self.base = act.category
        self.action = act
        self._inv: dict = {}

    def describe(self, L):
        return repr(L)

    def invariant(self, L, L2):
        key = (L, L2)
        hit = self._inv.get(key)
        if hit is None:
            hit = invariant_hom_complex(self.action, L, L2)
            self._inv[key] = hit
        return hit

    def _hom(self, L, L2):
        return self.invariant(L, L2).complex

    def include(self, L, L2, k, v):
        """Invariant coordinates -> coordinates in the base hom complex."""
        return self.invariant(L, L2).inclusion[k].apply(v)

    def retract(self, L, L2, k, w):
        inv = self.invariant(L, L2)
        if k not in inv.retraction:
            if not is_zero_vector(w):
                raise ValueError("base morphism is not invariant")
            return ()
        v = inv.retraction[k].apply(w)
        if inv.inclusion[k].apply(v) != tuple(w):
            raise ValueError("base morphism is not invariant")
        return v

    def compose_vectors(self, X, Y, Z, m, g, n, f):
        gb = self.include(Y, Z, m, g)
        fb = self.include(X, Y, n, f)
        h = self.base.compose_vectors(X.obj, Y.obj, Z.obj, m, gb, n, fb)
        return self.retract(X, Z, m + n, h)

    def identity_vector(self, L):
        return self.retract(L, L, 0, self.base.identity_vector(L.obj))

    def to_base(self, f: DGMorphism) -> DGMorphism:
        return DGMorphism.make(f.source.obj, f.target.obj,
                               {k: self.include(f.source, f.target, k, v) for k, v in f.components})

    def from_base(self, L, L2, f: DGMorphism) -> DGMorphism:
        """The invariant base morphism f viewed in A^G (ValueError if not invariant)."""
        return DGMorphism.make(L, L2, {k: self.retract(L, L2, k, v) for k, v in f.components})

    def direct_sum(self, objects):
        A, act = self.base, self.action
        objs = [L.obj for L in objects]
        S = A.direct_sum(objs)
        maps = []
        for g in act.group.elements:
            moved = [act.obj(g, X) for X in objs]
            blocks = {(i, i): L.lam(g) for i, L in enumerate(objects)}
            maps.append(A.block_morphism(objs, moved, blocks))
        return Linearisation(S, tuple(maps), " (+) ".join(repr(L) for L in objects))


def build_linearised_category(act: StrictAction, sample=None) -> LinearisedCategory:
    """A^G for a strict action; the action is validated on ``sample`` when given."""
    if sample is not None:
        rep = validate_strict_action(act, sample)
        if not rep.ok:
            raise ConstructionError("invalid action: " + "; ".join(rep.failures[:3]))
    return LinearisedCategory(act)


# --- isomorphism classification -----------------------------------------------------

@dataclass
class IsoClassReport:
    source: Any
    target: Any
    verdict: str                     # "isomorphic" | "not-isomorphic" | "unknown"
    witness: DGMorphism | None = None
    inverse: DGMorphism | None = None
    strict: bool = False
    obstruction: str = ""
    family: list = dc_field(default_factory=list)   # closed invariant degree-0 basis (in A^G)
    points_tested: int = 0

    @property
    def isomorphic(self):
        return self.verdict == "isomorphic"


def _closed_degree0_basis(cat: LinearisedCategory, L, L2):
    H = cat.hom(L, L2)
    if not H.dim(0):
        return []
    return [DGMorphism.make(L, L2, {0: v}) for v in kernel_basis(H.differential(0)).basis]


def _projective_points(F, r, count):
    """[1:t] for t = 0..count-1 and [0:1]; a nonzero binary form of degree < count + 1
    cannot vanish at all of them."""
    if r == 1:
        return [(F.one,)]
    return [(F.one, F(t)) for t in range(count)] + [(F.zero, F.one)]


def iso_classify(cat: LinearisedCategory, L, L2) -> IsoClassReport:
    """Three-valued isomorphism test in H^0(A^G).

    f is invertible in H^0 iff post- and precomposition with f are surjective
    on H^0, so the non-invertible members of a linear family form the zero set
    of homogeneous minors. With r <= 2 parameters, testing more points than the
    total minor degree decides the question exactly.
    """
    F = cat.field
    if L == L2:
        idL = cat.identity(L)
        return IsoClassReport(L, L2, "isomorphic", idL, idL, True, points_tested=0)
    h_end1 = cohomology(cat.hom(L, L)).dims
    h_end2 = cohomology(cat.hom(L2, L2)).dims
    if dict(h_end1) != dict(h_end2):
        return IsoClassReport(L, L2, "not-isomorphic",
                              obstruction=f"H dims differ: End {sorted(h_end1.items())} "
                                          f"vs {sorted(h_end2.items())}")
    Z = _closed_degree0_basis(cat, L, L2)
    r = len(Z)
    if r == 0:
        return IsoClassReport(L, L2, "not-isomorphic",
                              obstruction="no nonzero invariant closed degree-0 morphism")
    if r > 2:
        return IsoClassReport(L, L2, "unknown", family=Z,
                              obstruction=f"closed invariant degree-0 space has dimension {r} > 2")
    total = h_end1.get(0, 0) + h_end2.get(0, 0)
    points = _projective_points(F, r, total)
    for pt in points:
        f = Z[0].scale(pt[0])
        for c, z in zip(pt[1:], Z[1:]):
            f = f + z.scale(c)
        if f.is_zero():
            continue
        ok, wit = h0_is_isomorphism(cat, f)
        if ok:
            inv = strict_inverse(cat, f)
            return IsoClassReport(L, L2, "isomorphic", f, inv or wit.inverse, inv is not None,
                                  family=Z, points_tested=len(points))
    return IsoClassReport(L, L2, "not-isomorphic", family=Z, points_tested=len(points),
                          obstruction=f"no member of the {r}-dimensional family of invariant "
                                      f"closed degree-0 morphisms is invertible in H^0")


# --- functors ------------------------------------------------------------------------

def check_equivariance(Phi: DGFunctor, act_src: StrictAction, act_tgt: StrictAction,
                       sample) -> CheckReport:
    """Phi . g^* = g^* . Phi on sampled objects and hom spaces."""
    rep = CheckReport("equivariance", sample=list(map(repr, sample)))
    if act_src.group.elements != act_tgt.group.elements:
        rep.fail("actions are by different groups")
        return rep
    for g in act_src.group.elements:
        left = ComposedFunctor(Phi, act_src.functor(g))
        right = ComposedFunctor(act_tgt.functor(g), Phi)
        r = functors_agree(left, right, sample)
        rep.checked += r.checked
        for f in r.failures:
            rep.fail(f"g = {g}: {f}")
    return rep


class InducedFunctor(DGFunctor):
    """Phi^G: (A, lambda) |-> (Phi A, Phi lambda), restricted to invariant complexes."""

    def __init__(self, Phi: DGFunctor, src: LinearisedCategory, tgt: LinearisedCategory):
        super().__init__(src, tgt, name=f"{Phi.name}^G")
        self.Phi = Phi
        self._obj_cache: dict = {}

    def obj(self, L):
        hit = self._obj_cache.get(L)
        if hit is None:
            hit = Linearisation(self.Phi.obj(L.obj), tuple(self.Phi(lg) for lg in L.maps),
                                f"{self.Phi.name}({L!r})")
            self._obj_cache[L] = hit
        return hit

    def map_vector(self, L, L2, k, v):
        w = self.source.include(L, L2, k, v)
        u = self.Phi.map_vector(L.obj, L2.obj, k, w)
        return self.target.retract(self.obj(L), self.obj(L2), k, u)


def induced_functor(Phi: DGFunctor, act_src: StrictAction, act_tgt: StrictAction, sample,
                    src: LinearisedCategory | None = None,
                    tgt: LinearisedCategory | None = None) -> InducedFunctor:
    """Strict equivariance is verified on ``sample`` (base objects) first."""
    rep = check_equivariance(Phi, act_src, act_tgt, sample)
    if not rep.ok:
        raise PreconditionError("functor is not equivariant: " + rep.failures[0])
    src = src or LinearisedCategory(act_src)
    tgt = tgt or LinearisedCategory(act_tgt)
    if src.action is not act_src or tgt.action is not act_tgt:
        raise ValueError("linearised categories do not match the actions")
    return InducedFunctor(Phi, src, tgt)


@dataclass
class QFFEntry:
    source: Any
    target: Any
    source_dims: dict
    target_dims: dict
    bijective: dict          # degree -> bool


@dataclass
class QFFReport:
    entries: list
    failures: list

    @property
    def ok(self):
        return not self.failures


def quasi_fully_faithful_check(Phi: DGFunctor, sample) -> QFFReport:
    """Are the maps H^*Hom(X, Y) -> H^*Hom(Phi X, Phi Y) bijective on sampled pairs?"""
    A, B = Phi.source, Phi.target
    F = A.field
    entries, failures = [], []
    objs = list(sample)
    for X, Y in itertools.product(objs, repeat=2):
        Hs = cohomology(A.hom(X, Y))
        PX, PY = Phi.obj(X), Phi.obj(Y)
        Ht = cohomology(B.hom(PX, PY))
        bij = {}
        for k in sorted(set(Hs.dims) | set(Ht.dims)):
            ns, nt = Hs.dim(k), Ht.dim(k)
            if ns != nt:
                bij[k] = False
            elif ns == 0:
                bij[k] = True
            else:
                cols = [Ht.class_of(k, Phi.map_vector(X, Y, k, v)) for v in Hs.reps[k]]
                bij[k] = rank(Matrix.from_columns(F, cols, nt)) == nt
            if not bij[k]:
                failures.append(f"H^{k} Hom({A.describe(X)}, {A.describe(Y)}): "
                                f"dims {ns} -> {nt}, induced map not bijective")
        entries.append(QFFEntry(X, Y, dict(sorted(Hs.dims.items())),
                                dict(sorted(Ht.dims.items())), bij))
    return QFFReport(entries, failures)


# --- conjugation --------------------------------------------------------------------

def _check_strict_inverse(Phi: DGFunctor, Phi_inv: DGFunctor, sample_src, sample_tgt):
    a = functors_agree(ComposedFunctor(Phi_inv, Phi), IdentityFunctor(Phi.source), sample_src)
    b = functors_agree(ComposedFunctor(Phi, Phi_inv), IdentityFunctor(Phi.target), sample_tgt)
    if not (a.ok and b.ok):
        raise PreconditionError("the given inverse is not a strict inverse: "
                                + "; ".join((a.failures + b.failures)[:2]))


def conjugated_action(Phi: DGFunctor, Phi_inv: DGFunctor, act: StrictAction,
                      sample_src, sample_tgt=None) -> StrictAction:
    """g |-> Phi^{-1} . g^* . Phi on the source of Phi (which maps into act's category)."""
    if Phi.target is not act.category:
        raise ValueError("Phi must land in the acted-on category")
    sample_tgt = list(sample_tgt) if sample_tgt is not None else [Phi.obj(X) for X in sample_src]
    _check_strict_inverse(Phi, Phi_inv, sample_src, sample_tgt)
    functors = {g: ComposedFunctor(Phi_inv, ComposedFunctor(act.functor(g), Phi))
                for g in act.group.elements}
    return StrictAction(act.group, Phi.source, functors, name=f"{act.name}^{Phi.name}")


def conjugation_equivalence(Phi: DGFunctor, Phi_inv: DGFunctor, act: StrictAction,
                            conj: StrictAction, sample_tgt,
                            src: LinearisedCategory | None = None,
                            tgt: LinearisedCategory | None = None) -> InducedFunctor:
    """A^G -> A~^{G~}, (A, lambda) |-> (Phi^{-1} A, Phi^{-1} lambda).

    Phi^{-1} is equivariant from ``act`` to ``conj`` because Phi Phi^{-1} = id.
    """
    sample_src = [Phi_inv.obj(X) for X in sample_tgt]
    _check_strict_inverse(Phi, Phi_inv, sample_src, sample_tgt)
    return induced_functor(Phi_inv, act, conj, sample_tgt, src, tgt)


def invariant_scalar_family(cat: LinearisedCategory, report: IsoClassReport):
    """Base-category images of the closed invariant degree-0 basis of a report."""
    return [cat.to_base(z) for z in report.family]


__all__ = [
    "ConstructionError", "LinearisedCategory", "build_linearised_category",
    "IsoClassReport", "iso_classify", "check_equivariance", "InducedFunctor",
    "induced_functor", "QFFEntry", "QFFReport", "quasi_fully_faithful_check",
    "conjugated_action", "conjugation_equivalence", "invariant_scalar_family",
]
