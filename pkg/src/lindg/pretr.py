"""One-sided twisted complexes: the pretriangulated hull of a DG-category.

Sign conventions. A formal shift X[r] has Hom(X[r], Y[r'])^l = Hom(X, Y)^{l+r'-r},
with differential (-1)^{r'} d and composition taken from the base category
without extra signs. (This is a DG-category, so the usual twisted-complex
construction applies on top of it.)  A twisted complex is ((C_i, r_i)_i, q)
with q_ij in Hom(C_j, C_i) of base degree 1 + r_i - r_j, q_ij = 0 for i >= j,
and the Maurer-Cartan equation

    (-1)^{r_i} d(q_ij) + sum_k q_ik q_kj = 0.

Morphisms are matrices f_ij in Hom(C_j, C'_i); the differential of a
degree-l matrix is d_sh(f) + q' f - (-1)^l f q.

Under these conventions cone(phi: C -> C') = (C' (+) C[1], [[q', phi], [0, -q]]),
and shifting by m adds m to every r_i and multiplies q by (-1)^m.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dg import (
    DGCategory,
    DGFunctor,
    DGMorphism,
    PreconditionError,
)
from .group import Linearisation, StrictAction, invariance_operator
from .complexes import CochainComplex, cohomology, validate_complex
from .linalg import (
    Matrix,
    is_zero_vector,
    kernel_basis,
    solve_linear,
    unit_vector,
    vec_add,
    vec_scale,
    zero_vector,
)


class MalformedTwistedComplexError(ValueError):
    pass


@dataclass(frozen=True)
class TwistedComplex:
    """items: ((object, shift), ...); q: sorted ((i, j), base morphism) pairs, i < j."""

    items: tuple
    q: tuple = ()

    def __hash__(self):
        try:
            return self._h
        except AttributeError:
            h = hash((self.items, self.q))
            object.__setattr__(self, "_h", h)
            return h

    @property
    def size(self):
        return len(self.items)

    def entry(self, i, j):
        for key, f in self.q:
            if key == (i, j):
                return f
        return None

    def q_dict(self):
        return dict(self.q)

    def __repr__(self):
        body = " (+) ".join(f"{X!r}[{r}]" for X, r in self.items) or "0"
        if self.q:
            body += " | q at " + ",".join(f"{i}{j}" for (i, j), _ in self.q)
        return f"Tw({body})"


def _sign(k):
    return -1 if k % 2 else 1


def make_twisted_complex(A: DGCategory, items, q=None) -> TwistedComplex:
    """Validate triangularity, degrees and Maurer-Cartan, then build the object.

    ``q`` maps (i, j) to a base morphism C_j -> C_i (0-based indices).
    """
    items = tuple((X, int(r)) for X, r in items)
    n = len(items)
    clean = {}
    for (i, j), f in (q or {}).items():
        if f is None or f.is_zero():
            continue
        if not (0 <= i < n and 0 <= j < n):
            raise MalformedTwistedComplexError(f"q entry ({i},{j}) is out of range")
        if i >= j:
            raise MalformedTwistedComplexError(
                f"q entry ({i},{j}) is on or below the diagonal")
        Ci, ri = items[i]
        Cj, rj = items[j]
        if f.source != Cj or f.target != Ci:
            raise MalformedTwistedComplexError(f"q entry ({i},{j}) has the wrong objects")
        want = 1 + ri - rj
        if not f.is_homogeneous(want):
            raise MalformedTwistedComplexError(
                f"q entry ({i},{j}) must have base degree {want}, has {f.degrees}")
        clean[(i, j)] = f
    for i in range(n):
        for j in range(i + 1, n):
            Ci, ri = items[i]
            Cj, rj = items[j]
            total = DGMorphism(Cj, Ci, ())
            if (i, j) in clean:
                total = total + A.d(clean[(i, j)]).scale(_sign(ri))
            for k in range(i + 1, j):
                if (i, k) in clean and (k, j) in clean:
                    total = total + A.compose(clean[(i, k)], clean[(k, j)])
            if not total.is_zero():
                raise MalformedTwistedComplexError(
                    f"Maurer-Cartan equation fails at entry ({i},{j})")
    return TwistedComplex(items, tuple(sorted(clean.items(), key=lambda kv: kv[0])))


class HullCategory(DGCategory):
    """A^pretr: twisted complexes over ``base`` as an intensional DG-category."""

    name = "pretr"

    def __init__(self, base: DGCategory):
        super().__init__(base.field)
        self.base = base
        self._layout_cache: dict = {}

    def describe(self, C):
        if not isinstance(C, TwistedComplex):
            return repr(C)
        body = " (+) ".join(f"{self.base.describe(X)}[{r}]" for X, r in C.items) or "0"
        return f"Tw({body})" if C.q or C.size != 1 else body

    def layout(self, C: TwistedComplex, D: TwistedComplex):
        """Per hull degree l: list of blocks (i, j, base_degree, offset, size)."""
        key = (C, D)
        hit = self._layout_cache.get(key)
        if hit is None:
            per: dict = {}
            for i, (Di, si) in enumerate(D.items):
                for j, (Cj, rj) in enumerate(C.items):
                    H = self.base.hom(Cj, Di)
                    for k in H.degrees():
                        per.setdefault(k - si + rj, []).append((i, j, k, H.dim(k)))
            out = {}
            for l, blocks in per.items():
                off, lst = 0, []
                for (i, j, k, sz) in sorted(blocks):
                    lst.append((i, j, k, off, sz))
                    off += sz
                out[l] = (lst, off)
            hit = out
            self._layout_cache[key] = hit
        return hit

    def _blocks(self, C, D, l, v):
        """Split a hull vector of degree l into {(i, j): (base_degree, vector)}."""
        lay = self.layout(C, D).get(l)
        if lay is None:
            return {}
        out = {}
        for (i, j, k, off, sz) in lay[0]:
            w = tuple(v[off:off + sz])
            if not is_zero_vector(w):
                out[(i, j)] = (k, w)
        return out

    def _assemble(self, C, D, l, blocks):
        lay = self.layout(C, D).get(l)
        if lay is None:
            if any(not is_zero_vector(w) for _, w in blocks.values()):
                raise AssertionError("nonzero block in an empty hull degree")
            return ()
        v = list(zero_vector(self.field, lay[1]))
        for (i, j, k, off, sz) in lay[0]:
            b = blocks.get((i, j))
            if b is None:
                continue
            kk, w = b
            if kk != k:
                raise AssertionError("block degree mismatch")
            v[off:off + sz] = [a + c for a, c in zip(v[off:off + sz], w)]
        return tuple(v)

    def _hom(self, C, D):
        F = self.field
        lay = self.layout(C, D)
        dims = {l: n for l, (_, n) in lay.items() if n}
        labels = {}
        for l, (blocks, _) in lay.items():
            labs = []
            for (i, j, k, off, sz) in blocks:
                Hb = self.base.hom(C.items[j][0], D.items[i][0])
                labs.extend(f"({i},{j}):{Hb.label(k, t)}" for t in range(sz))
            labels[l] = labs
        diffs = {}
        for l in dims:
            if not dims.get(l + 1):
                continue
            cols = [self.d_vector(C, D, l, unit_vector(F, dims[l], t)) for t in range(dims[l])]
            diffs[l] = Matrix.from_columns(F, cols, dims[l + 1])
        return CochainComplex(F, dims, diffs, labels)

    def d_vector(self, C, D, l, v):
        """d(f) = d_sh(f) + q' f - (-1)^l f q, on a degree-l coordinate vector."""
        A = self.base
        blocks = self._blocks(C, D, l, v)
        out: dict = {}

        def add(key, k, w):
            if key in out:
                out[key] = (k, vec_add(out[key][1], w))
            else:
                out[key] = (k, w)

        qD, qC = D.q_dict(), C.q_dict()
        for (i, j), (k, w) in blocks.items():
            Cj, Di = C.items[j][0], D.items[i][0]
            si = D.items[i][1]
            Hb = A.hom(Cj, Di)
            if Hb.dim(k + 1):
                dw = Hb.apply_d(k, w)
                if not is_zero_vector(dw):
                    add((i, j), k + 1, vec_scale(_sign(si), dw))
            for (a, b), qf in qD.items():
                if b != i:
                    continue
                qk = qf.degree
                Da = D.items[a][0]
                if A.hom(Cj, Da).dim(qk + k):
                    add((a, j), qk + k, A.compose_vectors(Cj, Di, Da, qk, qf.component(qk), k, w))
            for (a, b), qf in qC.items():
                if a != j:
                    continue
                qk = qf.degree
                Cb = C.items[b][0]
                if A.hom(Cb, Di).dim(k + qk):
                    add((i, b), k + qk,
                        vec_scale(-_sign(l), A.compose_vectors(Cb, Cj, Di, k, w, qk, qf.component(qk))))
        return self._assemble(C, D, l + 1, out)

    def compose_vectors(self, X, Y, Z, m, g, n, f):
        A = self.base
        gb = self._blocks(Y, Z, m, g)
        fb = self._blocks(X, Y, n, f)
        out: dict = {}
        for (i, k), (kg, wg) in gb.items():
            for (k2, j), (kf, wf) in fb.items():
                if k != k2:
                    continue
                Xj, Yk, Zi = X.items[j][0], Y.items[k][0], Z.items[i][0]
                if not A.hom(Xj, Zi).dim(kg + kf):
                    continue
                w = A.compose_vectors(Xj, Yk, Zi, kg, wg, kf, wf)
                if (i, j) in out:
                    out[(i, j)] = (kg + kf, vec_add(out[(i, j)][1], w))
                else:
                    out[(i, j)] = (kg + kf, w)
        return self._assemble(X, Z, m + n, out)

    def identity_vector(self, C):
        A = self.base
        blocks = {(i, i): (0, A.identity_vector(X)) for i, (X, _) in enumerate(C.items)}
        return self._assemble(C, C, 0, blocks)

    # -- direct sums and block matrices --------------------------------------------
    def direct_sum(self, objects):
        items, q, off = [], {}, 0
        for C in objects:
            items.extend(C.items)
            for (i, j), f in C.q:
                q[(i + off, j + off)] = f
            off += C.size
        return TwistedComplex(tuple(items), tuple(sorted(q.items(), key=lambda kv: kv[0])))

    def block_morphism(self, sources, targets, blocks):
        S, T = self.direct_sum(sources), self.direct_sum(targets)
        soff = [sum(C.size for C in sources[:j]) for j in range(len(sources))]
        toff = [sum(C.size for C in targets[:i]) for i in range(len(targets))]
        comps: dict = {}
        for (I, J), f in blocks.items():
            for l, v in f.components:
                sub = self._blocks(sources[J], targets[I], l, v)
                shifted = {(i + toff[I], j + soff[J]): kv for (i, j), kv in sub.items()}
                vec = self._assemble(S, T, l, shifted)
                comps[l] = vec_add(comps[l], vec) if l in comps else vec
        return DGMorphism.make(S, T, comps)

    # -- convenience ----------------------------------------------------------------
    def matrix_morphism(self, C, D, l, entries: dict) -> DGMorphism:
        """Hull morphism of degree l from base morphisms entries[(i, j)]: C_j -> D_i."""
        blocks = {}
        for (i, j), f in entries.items():
            want = l + D.items[i][1] - C.items[j][1]
            if f.is_zero():
                continue
            if not f.is_homogeneous(want):
                raise ValueError(f"entry ({i},{j}) must have base degree {want}")
            blocks[(i, j)] = (want, f.component(want))
        return DGMorphism.make(C, D, {l: self._assemble(C, D, l, blocks)})

    def entries(self, f: DGMorphism) -> dict:
        """{(degree, i, j): base morphism} for a hull morphism."""
        out = {}
        for l, v in f.components:
            for (i, j), (k, w) in self._blocks(f.source, f.target, l, v).items():
                out[(l, i, j)] = DGMorphism.make(f.source.items[j][0], f.target.items[i][0], {k: w})
        return out


def pretr_category(A: DGCategory) -> HullCategory:
    return HullCategory(A)


def embed(A: DGCategory, X, shift: int = 0) -> TwistedComplex:
    return TwistedComplex(((X, shift),), ())


def zero_object() -> TwistedComplex:
    return TwistedComplex((), ())


class EmbeddingFunctor(DGFunctor):
    """A -> A^pretr, X |-> (X, 0); hom complexes are equal on the nose."""

    def __init__(self, hull: HullCategory):
        super().__init__(hull.base, hull, name="embed")

    def obj(self, X):
        return embed(self.source, X)

    def map_vector(self, X, Y, k, v):
        return tuple(v)


def shift_twisted(C: TwistedComplex, m: int) -> TwistedComplex:
    s = _sign(m)
    return TwistedComplex(tuple((X, r + m) for X, r in C.items),
                          tuple((key, f.scale(s) if s < 0 else f) for key, f in C.q))


def cone(hull: HullCategory, phi: DGMorphism) -> TwistedComplex:
    """(C' (+) C[1], [[q', phi], [0, -q]]) for a closed degree-0 phi: C -> C'."""
    if not phi.is_homogeneous(0):
        raise PreconditionError("cone needs a morphism of degree 0")
    if not hull.is_closed(phi):
        raise PreconditionError("cone needs a closed morphism")
    C, D = phi.source, phi.target
    n = D.size
    items = list(D.items) + [(X, r + 1) for X, r in C.items]
    q = dict(D.q)
    for (i, j), f in C.q:
        q[(i + n, j + n)] = f.scale(-1)
    for (l, i, j), f in hull.entries(phi).items():
        q[(i, j + n)] = f
    return make_twisted_complex(hull.base, items, q)


def cone_inclusion(hull: HullCategory, phi: DGMorphism) -> DGMorphism:
    """Canonical closed degree-0 map C' -> cone(phi)."""
    Cn = cone(hull, phi)
    D = phi.target
    A = hull.base
    ent = {(i, i): A.identity(X) for i, (X, _) in enumerate(D.items)}
    return hull.matrix_morphism(D, Cn, 0, ent)


def cone_projection(hull: HullCategory, phi: DGMorphism) -> DGMorphism:
    """Canonical closed degree-0 map cone(phi) -> C[1]."""
    Cn = cone(hull, phi)
    C = phi.source
    n = phi.target.size
    A = hull.base
    ent = {(j, j + n): A.identity(X) for j, (X, _) in enumerate(C.items)}
    return hull.matrix_morphism(Cn, shift_twisted(C, 1), 0, ent)


# --- group actions on the hull ----------------------------------------------------

class HullFunctor(DGFunctor):
    """Entrywise extension of a base DG-functor to twisted complexes."""

    def __init__(self, base_functor: DGFunctor, source_hull: HullCategory,
                 target_hull: HullCategory | None = None):
        super().__init__(source_hull, target_hull or source_hull,
                         name=f"{base_functor.name}^pretr")
        self.base_functor = base_functor

    def obj(self, C):
        Fb = self.base_functor
        items = tuple((Fb.obj(X), r) for X, r in C.items)
        q = tuple((key, Fb(f)) for key, f in C.q)
        return TwistedComplex(items, tuple((k, f) for k, f in q if not f.is_zero()))

    def map_vector(self, C, D, l, v):
        hs, ht = self.source, self.target
        FC, FD = self.obj(C), self.obj(D)
        blocks = {}
        for (i, j), (k, w) in hs._blocks(C, D, l, v).items():
            Xj, Yi = C.items[j][0], D.items[i][0]
            blocks[(i, j)] = (k, self.base_functor.map_vector(Xj, Yi, k, w))
        return ht._assemble(FC, FD, l, blocks)


def extend_action_to_hull(act: StrictAction, hull: HullCategory | None = None) -> StrictAction:
    hull = hull or HullCategory(act.category)
    if hull.base is not act.category:
        raise ValueError("hull is not built over the acting category")
    functors = {g: HullFunctor(act.functor(g), hull) for g in act.group.elements}
    return StrictAction(act.group, hull, functors, name=f"{act.name}^pretr")


def embed_linearisation(hull: HullCategory, L: Linearisation, shift: int = 0) -> Linearisation:
    """(X[shift], lambda) as a linearised one-term twisted complex."""
    C = embed(hull.base, L.obj, shift)
    maps = []
    for lg in L.maps:
        maps.append(hull.matrix_morphism(C, embed(hull.base, lg.target, shift), 0, {(0, 0): lg}))
    return Linearisation(C, tuple(maps), f"{L.label or 'L'}[{shift}]" if shift else L.label)


def cone_linearisation(hact: StrictAction, phi: DGMorphism,
                       L: Linearisation, L2: Linearisation) -> Linearisation:
    """Block-diagonal gamma_g = diag(lambda'_g, lambda_g) on cone(phi: L -> L2)."""
    hull = hact.category
    if phi.source != L.obj or phi.target != L2.obj:
        raise PreconditionError("phi does not go from L to L2")
    T = invariance_operator(hact, L, L2, 0)
    v = phi.component(0) or zero_vector(hull.field, hull.hom(L.obj, L2.obj).dim(0))
    if not is_zero_vector(T.apply(v)):
        raise PreconditionError("phi is not invariant")
    Cn = cone(hull, phi)
    n = L2.obj.size
    maps = []
    for g in hact.group.elements:
        target = hact.obj(g, Cn)
        ent = {}
        for (l, i, j), f in hull.entries(L2.lam(g)).items():
            ent[(i, j)] = f
        for (l, i, j), f in hull.entries(L.lam(g)).items():
            ent[(i + n, j + n)] = f
        maps.append(hull.matrix_morphism(Cn, target, 0, ent))
    return Linearisation(Cn, tuple(maps), "cone")


# --- soundness checks used by tests and the CLI -------------------------------------

def contractible(hull: HullCategory, C: TwistedComplex) -> bool:
    """id_C = d(h) for some degree -1 endomorphism h."""
    E = hull.hom(C, C)
    idv = hull.identity_vector(C)
    if not E.dim(-1):
        return is_zero_vector(idv)
    return solve_linear(E.differential(-1), idv) is not None


def _remake(A, C):
    return make_twisted_complex(A, C.items, dict(C.q))


def hull_soundness(hull: HullCategory, C: TwistedComplex, hact: StrictAction | None = None,
                   rng=None) -> list:
    """Failures of the hull invariants on one twisted complex (empty = sound)."""
    A = hull.base
    out = []
    try:
        _remake(A, C)
    except MalformedTwistedComplexError as exc:
        return [f"input is malformed: {exc}"]
    rep = validate_complex(hull.hom(C, C))
    out += [f"End complex: {v}" for v in rep.violations]
    for m in (1, -1, 2):
        try:
            _remake(A, shift_twisted(C, m))
        except MalformedTwistedComplexError as exc:
            out.append(f"shift by {m} breaks Maurer-Cartan: {exc}")
    if shift_twisted(shift_twisted(C, 1), -1) != C:
        out.append("shift by +1 then -1 is not the identity")
    try:
        Cid = cone(hull, hull.identity(C))
        if cohomology(hull.hom(Cid, Cid)).dims:
            out.append("cone(id) has nonzero End cohomology")
        if not contractible(hull, Cid):
            out.append("id of cone(id) is not exact")
    except MalformedTwistedComplexError as exc:
        out.append(f"cone(id) is malformed: {exc}")
    E = hull.hom(C, C)
    if rng is not None and E.dim(0):
        closed = kernel_basis(E.differential(0)).basis
        if closed:
            v = zero_vector(hull.field, E.dim(0))
            for w in closed:
                v = vec_add(v, vec_scale(hull.field(rng.randint(-2, 2)), w))
            phi = DGMorphism.make(C, C, {0: v})
            try:
                Cn = cone(hull, phi)
                out += [f"Hom(C, cone): {x}" for x in validate_complex(hull.hom(C, Cn)).violations]
                inc, pro = cone_inclusion(hull, phi), cone_projection(hull, phi)
                if not (hull.is_closed(inc) and hull.is_closed(pro)):
                    out.append("cone inclusion/projection is not closed")
                if not hull.compose(pro, inc).is_zero():
                    out.append("projection . inclusion != 0 for a cone")
            except MalformedTwistedComplexError as exc:
                out.append(f"cone of a closed endomorphism is malformed: {exc}")
    if hact is not None:
        for g in hact.group.elements:
            try:
                _remake(A, hact.obj(g, C))
            except MalformedTwistedComplexError as exc:
                out.append(f"g = {g} breaks Maurer-Cartan: {exc}")
    return out
