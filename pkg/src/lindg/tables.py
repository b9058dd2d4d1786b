"""DG-categories given by explicit finite tables.

Objects are names; each hom complex lists basis labels per degree and an
optional differential; composition is a table (g_label, f_label) -> linear
combination of labels. Entries landing in the wrong degree are kept out of the
composition and reported by ``extra_checks``.
"""

from __future__ import annotations

from .complexes import CochainComplex
from .dg import DGCategory, DGFunctor, UnsupportedObjectError
from .linalg import Matrix, zero_vector


class TableError(ValueError):
    pass


class TableCategory(DGCategory):
    name = "inline"

    def __init__(self, field, objects, homs, identities, compose, differentials=None):
        """homs: {(X, Y): {degree: [labels]}}; differentials: {(X, Y): {degree: rows}};
        identities: {X: label}; compose: {(g_label, f_label): {label: scalar}}."""
        super().__init__(field)
        self.objects = tuple(objects)
        self._table_homs = {}
        self._where = {}                 # label -> (X, Y, degree, index)
        for (X, Y), per in homs.items():
            for Z in (X, Y):
                if Z not in self.objects:
                    raise TableError(f"hom ({X}, {Y}) uses undeclared object {Z!r}")
            clean = {}
            for k, labels in per.items():
                k = int(k)
                for i, lab in enumerate(labels):
                    if lab in self._where:
                        raise TableError(f"basis label {lab!r} is used twice")
                    self._where[lab] = (X, Y, k, i)
                if labels:
                    clean[k] = list(labels)
            self._table_homs[(X, Y)] = clean
        self._diffs = {}
        for (X, Y), per in (differentials or {}).items():
            basis = self._table_homs.get((X, Y), {})
            for k, rows in per.items():
                k = int(k)
                src, tgt = len(basis.get(k, ())), len(basis.get(k + 1, ()))
                if len(rows) != tgt or any(len(row) != src for row in rows):
                    shape = (len(rows), len(rows[0]) if rows else 0)
                    raise TableError(f"differential of ({X}, {Y}) in degree {k} "
                                     f"has shape {shape}, expected {(tgt, src)}")
                M = Matrix(field, [[field(c) for c in row] for row in rows], src)
                if M.shape != (tgt, src):
                    raise TableError(f"differential of ({X}, {Y}) in degree {k} "
                                     f"has shape {M.shape}, expected {(tgt, src)}")
                self._diffs.setdefault((X, Y), {})[k] = M
        self._ids = {}
        for X, lab in identities.items():
            where = self._where.get(lab)
            if where is None or where[:2] != (X, X):
                raise TableError(f"identity of {X!r} must be a label of Hom({X}, {X})")
            self._ids[X] = lab
        for X in self.objects:
            if X not in self._ids:
                raise TableError(f"object {X!r} has no identity")
        self._table = {}
        self._misplaced = []
        for (gl, fl), combo in compose.items():
            for lab in (gl, fl, *combo):
                if lab not in self._where:
                    raise TableError(f"composition table uses unknown label {lab!r}")
            Y, Z, m, _ = self._where[gl]
            X, Y2, n, _ = self._where[fl]
            if Y != Y2:
                raise TableError(f"{gl} . {fl} is not composable")
            out = {}
            for lab, c in combo.items():
                X3, Z3, k, _ = self._where[lab]
                if (X3, Z3) != (X, Z):
                    raise TableError(f"{gl} . {fl} = ... {lab}: wrong hom space")
                if k != m + n:
                    self._misplaced.append(f"degree: {gl} . {fl} has a term {lab} in degree {k}, "
                                           f"expected {m + n}")
                    continue
                out[lab] = field(c)
            self._table[(gl, fl)] = out

    def _check(self, X):
        if X not in self.objects:
            raise UnsupportedObjectError(f"unknown object {X!r}")

    def describe(self, X):
        return str(X)

    def label_of(self, X, Y, k, i):
        return self._table_homs[(X, Y)][k][i]

    def _hom(self, X, Y):
        self._check(X)
        self._check(Y)
        basis = self._table_homs.get((X, Y), {})
        dims = {k: len(v) for k, v in basis.items()}
        return CochainComplex(self.field, dims, dict(self._diffs.get((X, Y), {})),
                              {k: list(v) for k, v in basis.items()})

    def identity_vector(self, X):
        self._check(X)
        _, _, k, i = self._where[self._ids[X]]
        v = list(zero_vector(self.field, self.hom(X, X).dim(0)))
        v[i] = self.field.one
        return tuple(v)

    def compose_vectors(self, X, Y, Z, m, g, n, f):
        out = list(zero_vector(self.field, self.hom(X, Z).dim(m + n)))
        gl = self._table_homs.get((Y, Z), {}).get(m, [])
        fl = self._table_homs.get((X, Y), {}).get(n, [])
        for a, ga in enumerate(g):
            if not ga:
                continue
            for b, fb in enumerate(f):
                if not fb:
                    continue
                for lab, c in self._table.get((gl[a], fl[b]), {}).items():
                    i = self._where[lab][3]
                    out[i] = out[i] + ga * fb * c
        return tuple(out)

    def extra_checks(self, sample):
        return list(self._misplaced)


class LabelScalingFunctor(DGFunctor):
    """Fixes objects and multiplies each basis label by a scalar (default 1)."""

    def __init__(self, cat: TableCategory, scalars: dict, name="scale"):
        super().__init__(cat, cat, name=name)
        for lab in scalars:
            if lab not in cat._where:
                raise TableError(f"scaling uses unknown label {lab!r}")
        self.scalars = {lab: cat.field(c) for lab, c in scalars.items()}

    def obj(self, X):
        return X

    def map_vector(self, X, Y, k, v):
        labels = self.source._table_homs[(X, Y)][k]
        F = self.source.field
        return tuple(x * self.scalars.get(lab, F.one) for lab, x in zip(labels, v))


def one_object_category(field, name="X"):
    """Hom = K.id in degree 0."""
    return TableCategory(field, [name], {(name, name): {0: ["id"]}}, {name: "id"},
                         {("id", "id"): {"id": 1}})


def dual_numbers_table(field, d, corrupt=False):
    """One object with basis {id, s}, s in degree d; ``corrupt`` sets s.s = id."""
    compose = {("id", "id"): {"id": 1}, ("id", "s"): {"s": 1}, ("s", "id"): {"s": 1}}
    if corrupt:
        compose[("s", "s")] = {"id": 1}
    basis = {0: ["id", "s"]} if d == 0 else {0: ["id"], d: ["s"]}
    return TableCategory(field, ["E"], {("E", "E"): basis}, {"E": "id"}, compose)
