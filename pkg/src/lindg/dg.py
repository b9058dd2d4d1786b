"""Intensional DG-categories, their morphisms and functors.

A category never enumerates its objects. It answers three questions about the
handles it is given: the hom complex Hom(X, Y) (with a labelled basis per
degree), the composition of two homogeneous coordinate vectors, and the
identity of X. Everything else in this module is built from those.

Morphisms are stored as coordinate vectors per degree in the basis of the hom
complex. Composition ``compose(g, f)`` means "f first, then g".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Any, Iterable

from .complexes import CochainComplex, cohomology, validate_complex
from .linalg import (
    Matrix,
    hstack,
    is_zero_vector,
    solve_linear,
    unit_vector,
    vec_add,
    vec_scale,
    vstack,
    zero_vector,
)


class CompositionError(ValueError):
    """Morphisms whose objects do not match were composed."""


class PreconditionError(ValueError):
    pass


class UnsupportedObjectError(ValueError):
    """The category cannot form the requested object (e.g. a direct sum)."""


@dataclass(frozen=True)
class DGMorphism:
    """A (possibly inhomogeneous) element of Hom(source, target).

    ``components`` is a sorted tuple of (degree, coordinate vector) pairs;
    zero components are dropped, so the zero morphism has none.
    """

    source: Any
    target: Any
    components: tuple = ()

    @classmethod
    def make(cls, source, target, comps: dict):
        items = tuple(sorted((k, tuple(v)) for k, v in comps.items() if not is_zero_vector(v)))
        return cls(source, target, items)

    def as_dict(self):
        return dict(self.components)

    def component(self, k):
        for deg, v in self.components:
            if deg == k:
                return v
        return None

    @property
    def degrees(self):
        return [k for k, _ in self.components]

    def is_zero(self):
        return not self.components

    def is_homogeneous(self, k=None):
        degs = self.degrees
        if k is None:
            return len(degs) <= 1
        return not degs or degs == [k]

    @property
    def degree(self):
        degs = self.degrees
        if len(degs) > 1:
            raise ValueError("inhomogeneous morphism has no degree")
        return degs[0] if degs else None

    def _check_parallel(self, other):
        if (self.source, self.target) != (other.source, other.target):
            raise CompositionError("morphisms are not parallel")

    def __add__(self, other):
        self._check_parallel(other)
        d = self.as_dict()
        for k, v in other.components:
            d[k] = vec_add(d[k], v) if k in d else v
        return DGMorphism.make(self.source, self.target, d)

    def __neg__(self):
        return DGMorphism(self.source, self.target,
                          tuple((k, tuple(-x for x in v)) for k, v in self.components))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return DGMorphism.make(self.source, self.target,
                               {k: vec_scale(c, v) for k, v in self.components})

    def __rmul__(self, c):
        return self.scale(c)


class DGCategory:
    """Base class. Subclasses implement ``_hom``, ``compose_vectors`` and
    ``identity_vector``; results of ``hom`` are memoized per instance."""

    name = "dg-category"

    def __init__(self, field):
        self.field = field
        self._hom_cache: dict = {}

    # --- to implement ---------------------------------------------------
    def _hom(self, X, Y) -> CochainComplex:
        raise NotImplementedError

    def compose_vectors(self, X, Y, Z, m, g, n, f):
        """g in Hom(Y,Z)^m, f in Hom(X,Y)^n -> g.f in Hom(X,Z)^{m+n}."""
        raise NotImplementedError

    def identity_vector(self, X):
        raise NotImplementedError

    def direct_sum(self, objects):
        raise UnsupportedObjectError(f"{self.name} has no direct sums")

    def block_morphism(self, sources, targets, blocks: dict):
        """Morphism (+)sources -> (+)targets with block (i, j): sources[j] -> targets[i]."""
        raise UnsupportedObjectError(f"{self.name} has no direct sums")

    def extra_checks(self, sample) -> list:
        return []

    def describe(self, X) -> str:
        return repr(X)

    # --- derived --------------------------------------------------------
    def hom(self, X, Y) -> CochainComplex:
        key = (X, Y)
        c = self._hom_cache.get(key)
        if c is None:
            c = self._hom(X, Y)
            self._hom_cache[key] = c
        return c

    def identity(self, X) -> DGMorphism:
        return DGMorphism.make(X, X, {0: self.identity_vector(X)})

    def zero(self, X, Y) -> DGMorphism:
        return DGMorphism(X, Y, ())

    def morphism(self, X, Y, comps: dict) -> DGMorphism:
        H = self.hom(X, Y)
        clean = {}
        for k, v in comps.items():
            v = tuple(self.field(x) for x in v)
            if len(v) != H.dim(k):
                raise ValueError(f"component in degree {k} has length {len(v)}, "
                                 f"Hom^{k} has dimension {H.dim(k)}")
            clean[k] = v
        return DGMorphism.make(X, Y, clean)

    def basis_morphism(self, X, Y, k, i) -> DGMorphism:
        return DGMorphism.make(X, Y, {k: unit_vector(self.field, self.hom(X, Y).dim(k), i)})

    def basis(self, X, Y):
        """All (degree, index) pairs of the hom basis."""
        H = self.hom(X, Y)
        return [(k, i) for k in H.degrees() for i in range(H.dim(k))]

    def d(self, f: DGMorphism) -> DGMorphism:
        H = self.hom(f.source, f.target)
        return DGMorphism.make(f.source, f.target,
                               {k + 1: H.apply_d(k, v) for k, v in f.components
                                if H.dim(k + 1)})

    def is_closed(self, f: DGMorphism) -> bool:
        return self.d(f).is_zero()

    def compose(self, g: DGMorphism, f: DGMorphism) -> DGMorphism:
        if f.target != g.source:
            raise CompositionError(
                f"cannot compose: target {self.describe(f.target)} of f differs from "
                f"source {self.describe(g.source)} of g")
        X, Y, Z = f.source, f.target, g.target
        H = self.hom(X, Z)
        out: dict = {}
        for m, gv in g.components:
            for n, fv in f.components:
                if not H.dim(m + n):
                    continue
                v = self.compose_vectors(X, Y, Z, m, gv, n, fv)
                out[m + n] = vec_add(out[m + n], v) if m + n in out else v
        return DGMorphism.make(X, Z, out)

    def precompose_matrix(self, f: DGMorphism, Z, m):
        """Matrix of g |-> g.f on Hom(Y, Z)^m -> Hom(X, Z)^{m+deg f}; f homogeneous."""
        X, Y = f.source, f.target
        n = f.degree if not f.is_zero() else 0
        src, tgt = self.hom(Y, Z), self.hom(X, Z)
        cols = []
        for i in range(src.dim(m)):
            e = unit_vector(self.field, src.dim(m), i)
            if f.is_zero() or not tgt.dim(m + n):
                cols.append(zero_vector(self.field, tgt.dim(m + n)))
            else:
                cols.append(self.compose_vectors(X, Y, Z, m, e, n, f.component(n)))
        return Matrix.from_columns(self.field, cols, tgt.dim(m + n))

    def postcompose_matrix(self, g: DGMorphism, X, n):
        """Matrix of f |-> g.f on Hom(X, Y)^n -> Hom(X, Z)^{deg g + n}; g homogeneous."""
        Y, Z = g.source, g.target
        m = g.degree if not g.is_zero() else 0
        src, tgt = self.hom(X, Y), self.hom(X, Z)
        cols = []
        for i in range(src.dim(n)):
            e = unit_vector(self.field, src.dim(n), i)
            if g.is_zero() or not tgt.dim(m + n):
                cols.append(zero_vector(self.field, tgt.dim(m + n)))
            else:
                cols.append(self.compose_vectors(X, Y, Z, m, g.component(m), n, e))
        return Matrix.from_columns(self.field, cols, tgt.dim(m + n))


# --- validation --------------------------------------------------------------

@dataclass
class CheckReport:
    """Outcome of a sample-based axiom check."""

    name: str
    checked: int = 0
    failures: list = dc_field(default_factory=list)
    sample: list = dc_field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def __bool__(self):
        return self.ok

    def fail(self, msg):
        self.failures.append(msg)

    def merge(self, other):
        self.checked += other.checked
        self.failures.extend(other.failures)


def validate_dg_category(A: DGCategory, sample: Iterable, *, associativity: bool = True,
                         max_failures: int = 20) -> CheckReport:
    """Leibniz, associativity, unit laws and d(id) = 0 over basis elements."""
    sample = list(sample)
    if not sample:
        raise PreconditionError("validation sample must be nonempty")
    rep = CheckReport("dg-category", sample=[A.describe(X) for X in sample])
    for X, Y in itertools.product(sample, repeat=2):
        H = A.hom(X, Y)
        r = validate_complex(H)
        rep.checked += 1
        for v in r.violations:
            rep.fail(f"Hom({A.describe(X)}, {A.describe(Y)}): {v}")
    for X in sample:
        idX = A.identity(X)
        rep.checked += 1
        if not idX.is_homogeneous(0):
            rep.fail(f"identity of {A.describe(X)} is not of degree 0")
        if not A.is_closed(idX):
            rep.fail(f"d(id) != 0 for {A.describe(X)}")
    basis = {}                       # (X, Y) -> [((k, i), basis morphism)]

    def elems(X, Y):
        key = (X, Y)
        if key not in basis:
            basis[key] = [((k, i), A.basis_morphism(X, Y, k, i)) for k, i in A.basis(X, Y)]
        return basis[key]

    for X, Y in itertools.product(sample, repeat=2):
        for (k, i), f in elems(X, Y):
            rep.checked += 1
            if A.compose(A.identity(Y), f) != f or A.compose(f, A.identity(X)) != f:
                rep.fail(f"unit law fails for basis element {k}:{i} of "
                         f"Hom({A.describe(X)}, {A.describe(Y)})")
    # Leibniz: d(g.f) = dg.f + (-1)^|g| g.df
    products = {}                    # (X, Y, Z) -> {(j, i): g.f}
    for X, Y, Z in itertools.product(sample, repeat=3):
        prod = products[(X, Y, Z)] = {}
        for a, ((n, i), f) in enumerate(elems(X, Y)):
            df = A.d(f)
            for b, ((m, j), g) in enumerate(elems(Y, Z)):
                gf = prod[(b, a)] = A.compose(g, f)
                lhs = A.d(gf)
                rhs = A.compose(A.d(g), f) + A.compose(g, df).scale((-1) ** (m % 2))
                rep.checked += 1
                if lhs != rhs:
                    rep.fail(f"Leibniz fails for ({A.describe(X)} -> {A.describe(Y)} -> "
                             f"{A.describe(Z)}) on basis {A.hom(Y, Z).label(m, j)} . "
                             f"{A.hom(X, Y).label(n, i)}")
                if len(rep.failures) >= max_failures:
                    return rep
    if associativity:
        # (h.g).f == h.(g.f), reusing the pairwise products computed above
        for X, Y, Z, W in itertools.product(sample, repeat=4):
            gfs, hgs = products[(X, Y, Z)], products[(Y, Z, W)]
            bxy, byz, bzw = elems(X, Y), elems(Y, Z), elems(Z, W)
            for (a, ((n, i), f)), (b, ((m, j), _)), (c, ((l, k), h)) in itertools.product(
                    enumerate(bxy), enumerate(byz), enumerate(bzw)):
                rep.checked += 1
                if A.compose(hgs[(c, b)], f) != A.compose(h, gfs[(b, a)]):
                    rep.fail(f"associativity fails on basis triple ({A.hom(Z, W).label(l, k)}, "
                             f"{A.hom(Y, Z).label(m, j)}, {A.hom(X, Y).label(n, i)}) "
                             f"over {A.describe(X)} -> {A.describe(Y)} -> "
                             f"{A.describe(Z)} -> {A.describe(W)}")
                    if len(rep.failures) >= max_failures:
                        return rep
    for msg in A.extra_checks(sample):
        rep.fail(msg)
    return rep


# --- functors ----------------------------------------------------------------

class DGFunctor:
    """Object map plus degreewise linear maps on hom complexes."""

    def __init__(self, source: DGCategory, target: DGCategory, name="F"):
        self.source = source
        self.target = target
        self.name = name
        self._mat_cache: dict = {}

    def obj(self, X):
        raise NotImplementedError

    def map_vector(self, X, Y, k, v):
        raise NotImplementedError

    def hom_matrix(self, X, Y, k) -> Matrix:
        key = (X, Y, k)
        M = self._mat_cache.get(key)
        if M is None:
            H = self.source.hom(X, Y)
            Ht = self.target.hom(self.obj(X), self.obj(Y))
            cols = [self.map_vector(X, Y, k, unit_vector(self.source.field, H.dim(k), i))
                    for i in range(H.dim(k))]
            M = Matrix.from_columns(self.target.field, cols, Ht.dim(k))
            self._mat_cache[key] = M
        return M

    def __call__(self, f: DGMorphism) -> DGMorphism:
        FX, FY = self.obj(f.source), self.obj(f.target)
        return DGMorphism.make(FX, FY, {k: self.map_vector(f.source, f.target, k, v)
                                        for k, v in f.components})

    def then(self, other: "DGFunctor") -> "DGFunctor":
        """``other`` after ``self``."""
        return ComposedFunctor(other, self)


class IdentityFunctor(DGFunctor):
    def __init__(self, cat):
        super().__init__(cat, cat, name="id")

    def obj(self, X):
        return X

    def map_vector(self, X, Y, k, v):
        return tuple(v)


class ComposedFunctor(DGFunctor):
    """outer . inner"""

    def __init__(self, outer: DGFunctor, inner: DGFunctor):
        super().__init__(inner.source, outer.target, name=f"{outer.name}.{inner.name}")
        self.outer, self.inner = outer, inner

    def obj(self, X):
        return self.outer.obj(self.inner.obj(X))

    def map_vector(self, X, Y, k, v):
        w = self.inner.map_vector(X, Y, k, v)
        return self.outer.map_vector(self.inner.obj(X), self.inner.obj(Y), k, w)


def validate_functor(F: DGFunctor, sample) -> CheckReport:
    """Compatibility with differentials, composition and identities on samples."""
    sample = list(sample)
    A, B = F.source, F.target
    rep = CheckReport(f"functor {F.name}", sample=[A.describe(X) for X in sample])
    for X in sample:
        rep.checked += 1
        if F(A.identity(X)) != B.identity(F.obj(X)):
            rep.fail(f"{F.name} does not preserve the identity of {A.describe(X)}")
    for X, Y in itertools.product(sample, repeat=2):
        for k, i in A.basis(X, Y):
            f = A.basis_morphism(X, Y, k, i)
            rep.checked += 1
            if F(A.d(f)) != B.d(F(f)):
                rep.fail(f"{F.name} does not commute with d on {k}:{i} of "
                         f"Hom({A.describe(X)}, {A.describe(Y)})")
    for X, Y, Z in itertools.product(sample, repeat=3):
        for (n, i), (m, j) in itertools.product(A.basis(X, Y), A.basis(Y, Z)):
            f = A.basis_morphism(X, Y, n, i)
            g = A.basis_morphism(Y, Z, m, j)
            rep.checked += 1
            if F(A.compose(g, f)) != B.compose(F(g), F(f)):
                rep.fail(f"{F.name} does not preserve composition of ({m}:{j}).({n}:{i}) "
                         f"over {A.describe(X)} -> {A.describe(Y)} -> {A.describe(Z)}")
    return rep


def functors_agree(F: DGFunctor, G: DGFunctor, sample) -> CheckReport:
    """F and G coincide on the sampled objects and hom bases."""
    sample = list(sample)
    rep = CheckReport(f"{F.name} == {G.name}")
    for X in sample:
        rep.checked += 1
        if F.obj(X) != G.obj(X):
            rep.fail(f"object images differ on {F.source.describe(X)}")
            return rep
    for X, Y in itertools.product(sample, repeat=2):
        for k in F.source.hom(X, Y).degrees():
            rep.checked += 1
            if F.hom_matrix(X, Y, k) != G.hom_matrix(X, Y, k):
                rep.fail(f"hom maps differ in degree {k} on "
                         f"({F.source.describe(X)}, {F.source.describe(Y)})")
    return rep


# --- homotopy-level questions -------------------------------------------------

@dataclass
class IsoWitness:
    inverse: DGMorphism
    homotopy_source: DGMorphism   # h with g.f - id = d h
    homotopy_target: DGMorphism   # h' with f.g - id = d h'


def _split(v, sizes):
    out, pos = [], 0
    for s in sizes:
        out.append(tuple(v[pos:pos + s]))
        pos += s
    return out


def h0_is_isomorphism(A: DGCategory, f: DGMorphism):
    """Decide whether a closed degree-0 f is invertible in H^0(A).

    Solves for (g, h, h') with dg = 0, g.f - id = dh and f.g - id = dh'.
    Returns (bool, IsoWitness | None).
    """
    if not f.is_homogeneous(0):
        raise PreconditionError("h0_is_isomorphism needs a morphism of degree 0")
    if not A.is_closed(f):
        raise PreconditionError("h0_is_isomorphism needs a closed morphism")
    F = A.field
    X, Y = f.source, f.target
    Hyx, Hxx, Hyy = A.hom(Y, X), A.hom(X, X), A.hom(Y, Y)
    ng, nh, nh2 = Hyx.dim(0), Hxx.dim(-1), Hyy.dim(-1)
    # rows: d g = 0 | g.f - d h = id_X | f.g - d h' = id_Y
    d0 = Hyx.differential(0)
    pre = A.precompose_matrix(f, X, 0)      # g |-> g.f
    post = A.postcompose_matrix(f, Y, 0)    # g |-> f.g
    dh = Hxx.differential(-1)
    dh2 = Hyy.differential(-1)
    r1, r2, r3 = Hyx.dim(1), Hxx.dim(0), Hyy.dim(0)
    Z = Matrix.zeros
    block = vstack(F, [
        hstack(F, [d0, Z(F, r1, nh), Z(F, r1, nh2)], r1),
        hstack(F, [pre, -dh, Z(F, r2, nh2)], r2),
        hstack(F, [post, Z(F, r3, nh), -dh2], r3),
    ], ng + nh + nh2)
    rhs = zero_vector(F, r1) + A.identity_vector(X) + A.identity_vector(Y)
    sol = solve_linear(block, rhs)
    if sol is None:
        return False, None
    g, h, h2 = _split(sol, [ng, nh, nh2])
    return True, IsoWitness(DGMorphism.make(Y, X, {0: g}),
                            DGMorphism.make(X, X, {-1: h}),
                            DGMorphism.make(Y, Y, {-1: h2}))


def strict_inverse(A: DGCategory, f: DGMorphism):
    """Degree-0 g with g.f = id and f.g = id exactly, or None."""
    if not f.is_homogeneous(0):
        return None
    F = A.field
    X, Y = f.source, f.target
    pre = A.precompose_matrix(f, X, 0)
    post = A.postcompose_matrix(f, Y, 0)
    M = vstack(F, [pre, post], A.hom(Y, X).dim(0))
    sol = solve_linear(M, A.identity_vector(X) + A.identity_vector(Y))
    if sol is None:
        return None
    return DGMorphism.make(Y, X, {0: sol})


@dataclass
class GradedEndRing:
    """H^*(End X): basis per degree and structure constants in cohomology."""

    obj: Any
    dims: dict
    basis: list                 # [(degree, index)]
    unit: tuple                 # class of id in H^0 coordinates (empty if H^0 = 0)
    products: dict              # ((p,i),(q,j)) -> {degree: coords}
    reps: dict

    def product(self, a, b):
        return self.products[(a, b)]

    def multiply(self, x: dict, y: dict, field):
        """Product of classes given as {degree: coords}."""
        out: dict = {}
        for p, xv in x.items():
            for q, yv in y.items():
                for i, xi in enumerate(xv):
                    if not xi:
                        continue
                    for j, yj in enumerate(yv):
                        if not yj:
                            continue
                        for k, v in self.products[((p, i), (q, j))].items():
                            c = xi * yj
                            w = vec_scale(c, v)
                            out[k] = vec_add(out[k], w) if k in out else w
        return {k: v for k, v in out.items() if not is_zero_vector(v)}


def graded_end_ring(A: DGCategory, X) -> GradedEndRing:
    E = A.hom(X, X)
    H = cohomology(E)
    basis = [(k, i) for k in sorted(H.dims) for i in range(H.dims[k])]
    unit = H.class_of(0, A.identity_vector(X)) if H.dim(0) else ()
    products = {}
    for (p, i), (q, j) in itertools.product(basis, repeat=2):
        a = DGMorphism.make(X, X, {p: H.reps[p][i]})
        b = DGMorphism.make(X, X, {q: H.reps[q][j]})
        c = A.compose(a, b)
        v = c.component(p + q)
        coords = {}
        if v is not None and H.dim(p + q):
            cv = H.class_of(p + q, v)
            if not is_zero_vector(cv):
                coords[p + q] = cv
        products[((p, i), (q, j))] = coords
    return GradedEndRing(X, dict(H.dims), basis, tuple(unit), products, H.reps)


def check_spherical(A: DGCategory, X, d: int, ring: GradedEndRing | None = None) -> bool:
    """H^*(End X) is K[s]/(s^2) with s in degree d."""
    R = ring or graded_end_ring(A, X)
    F = A.field
    expected = {0: 2} if d == 0 else {0: 1, d: 1}
    if R.dims != expected or is_zero_vector(R.unit):
        return False
    unit = {0: R.unit}
    for b in R.basis:
        e = {b[0]: unit_vector(F, R.dims[b[0]], b[1])}
        if R.multiply(unit, e, F) != e or R.multiply(e, unit, F) != e:
            return False
    if d != 0:
        s = {d: unit_vector(F, 1, 0)}
        return R.multiply(s, s, F) == {}
    # d == 0: two-dimensional unital algebra; K[s]/(s^2) iff it has a nonzero nilpotent
    u = R.unit
    t = unit_vector(F, 2, 0)
    if _parallel(u, t):
        t = unit_vector(F, 2, 1)
    sq = R.multiply({0: t}, {0: t}, F).get(0, zero_vector(F, 2))
    # write t^2 = a*1 + b*t, then (t - b/2)^2 = a + b^2/4
    a, b = _coords_in(F, u, t, sq)
    return (a + b * b / 4).is_zero()


def _parallel(u, v):
    return (u[0] * v[1] - u[1] * v[0]).is_zero()


def _coords_in(F, u, t, w):
    M = Matrix.from_columns(F, [u, t], 2)
    sol = solve_linear(M, w)
    return sol


def check_exceptional(A: DGCategory, X, ring: GradedEndRing | None = None) -> bool:
    """H^*(End X) = K in degree 0, spanned by the unit."""
    R = ring or graded_end_ring(A, X)
    return R.dims == {0: 1} and not is_zero_vector(R.unit)


def hom_h_dims(A: DGCategory, X, Y) -> dict:
    return dict(sorted(cohomology(A.hom(X, Y)).dims.items()))

