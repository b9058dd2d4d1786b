"""Cochain complexes of finite-dimensional vector spaces and their cohomology.

Shift convention, used everywhere in the package: C[m]^k = C^{k+m} and the
differential of C[m] is (-1)^m times that of C.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .linalg import (
    Matrix,
    Subspace,
    kernel_basis,
    left_inverse,
    quotient_data,
    rref,
    solve_linear,
)


class InvalidComplexError(ValueError):
    pass


@dataclass(frozen=True)
class GradedSpace:
    dims: dict
    labels: dict = dc_field(default_factory=dict)

    def dim(self, k: int) -> int:
        return self.dims.get(k, 0)

    def label(self, k: int, i: int) -> str:
        labs = self.labels.get(k)
        return labs[i] if labs else f"e{k}_{i}"


class CochainComplex:
    """Degreewise finite complex. ``diffs[k]`` has shape dim(k+1) x dim(k)."""

    def __init__(self, field, dims, diffs=None, labels=None):
        self.field = field
        self.dims = {int(k): int(v) for k, v in dims.items() if v}
        self.labels = {k: tuple(v) for k, v in (labels or {}).items() if k in self.dims}
        self.diffs = {}
        for k, m in (diffs or {}).items():
            if self.dim(k) and self.dim(k + 1) and not m.is_zero():
                self.diffs[k] = m

    @property
    def space(self) -> GradedSpace:
        return GradedSpace(dict(self.dims), dict(self.labels))

    def dim(self, k: int) -> int:
        return self.dims.get(k, 0)

    def degrees(self):
        return sorted(self.dims)

    def differential(self, k: int) -> Matrix:
        m = self.diffs.get(k)
        if m is None:
            return Matrix.zeros(self.field, self.dim(k + 1), self.dim(k))
        return m

    def apply_d(self, k, v):
        return self.differential(k).apply(v)

    def label(self, k, i):
        labs = self.labels.get(k)
        return labs[i] if labs else f"e{k}_{i}"

    def __eq__(self, other):
        if not isinstance(other, CochainComplex):
            return NotImplemented
        if self.field is not other.field or self.dims != other.dims:
            return False
        return all(self.differential(k) == other.differential(k) for k in self.dims)

    def __repr__(self):
        return f"CochainComplex(dims={dict(sorted(self.dims.items()))})"


@dataclass
class ComplexReport:
    ok: bool
    violations: list

    def __bool__(self):
        return self.ok


def validate_complex(C: CochainComplex) -> ComplexReport:
    """Shape compatibility and d^2 = 0, lowest offending degree first."""
    violations = []
    for k in sorted(C.diffs):
        m = C.diffs[k]
        if m.shape != (C.dim(k + 1), C.dim(k)):
            violations.append(f"degree {k}: differential has shape {m.shape}, "
                              f"expected {(C.dim(k + 1), C.dim(k))}")
    if violations:
        return ComplexReport(False, violations)
    for k in sorted(C.dims):
        if k in C.diffs and (k + 1) in C.diffs:
            if not (C.diffs[k + 1] @ C.diffs[k]).is_zero():
                violations.append(f"degree {k}: d_{k + 1} d_{k} != 0")
    return ComplexReport(not violations, violations)


@dataclass
class Cohomology:
    """H^k with cocycle representatives and a projection cocycles -> classes.

    ``projection[k]`` is a dims[k] x dim C^k matrix; it is meaningful only on
    cocycles, where it returns the coordinates of the class in ``reps[k]``.
    """

    dims: dict
    reps: dict
    projection: dict
    cocycles: dict

    def dim(self, k):
        return self.dims.get(k, 0)

    def class_of(self, k, v):
        P = self.projection.get(k)
        if P is None:
            return ()
        return P.apply(v)

    def is_zero(self):
        return not self.dims


def cohomology(C: CochainComplex) -> Cohomology:
    report = validate_complex(C)
    if not report.ok:
        raise InvalidComplexError("; ".join(report.violations))
    F = C.field
    dims, reps, proj, cocycles = {}, {}, {}, {}
    for k in C.degrees():
        n = C.dim(k)
        Z = kernel_basis(C.differential(k))
        cocycles[k] = Z.basis
        if not Z.dim:
            continue
        # coordinates of cocycles in the Z basis
        L = left_inverse(F, Z.basis, n)
        d_prev = C.differential(k - 1)
        boundary_gens = [L.apply(col) for col in d_prev.columns()]
        # independent subset of boundaries, in Z coordinates
        B = _independent(F, boundary_gens, Z.dim)
        r, P = quotient_data(Subspace(Z.dim, tuple(B)), Z.dim, F)
        if not r:
            continue
        Zmat = Matrix.from_columns(F, Z.basis, n)
        dims[k] = len(r)
        reps[k] = tuple(Zmat.apply(v) for v in r)
        proj[k] = P @ L
    return Cohomology(dims, reps, proj, cocycles)


def _independent(F, vectors, n):
    out = []
    if not vectors:
        return out
    rows, pivots = rref(Matrix(F, vectors, n))
    return [tuple(rows[i]) for i in range(len(pivots))]


def shift_complex(C: CochainComplex, m: int) -> CochainComplex:
    sign = -1 if m % 2 else 1
    dims = {k - m: v for k, v in C.dims.items()}
    diffs = {k - m: (d if sign == 1 else -d) for k, d in C.diffs.items()}
    labels = {k - m: v for k, v in C.labels.items()}
    return CochainComplex(C.field, dims, diffs, labels)


def euler_characteristic(dims: dict) -> int:
    return sum((-1) ** (k % 2) * v for k, v in dims.items())


def is_exact_cocycle(C: CochainComplex, k, v):
    """Return a primitive w with d w = v, or None."""
    return solve_linear(C.differential(k - 1), v)
