"""Polynomial systems in at most two unknowns over a cyclotomic field.

Polynomials are plain dicts {exponent tuple: FieldElement}. Root finding and
Groebner bases are delegated to sympy over the algebraic field QQ<zeta_n>,
whose defining polynomial is checked to be our Phi_n before any conversion.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from dataclasses import dataclass

import sympy
from sympy import QQ

from .field import FieldElement, cyclotomic_polynomial


class UnsupportedSystemError(ValueError):
    pass


class Poly:
    """Multivariate polynomial over a FieldElement field."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field, nvars, terms=None):
        self.field = field
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, field, nvars, c):
        return cls(field, nvars, {(0,) * nvars: field(c)})

    @classmethod
    def var(cls, field, nvars, i):
        e = tuple(1 if k == i else 0 for k in range(nvars))
        return cls(field, nvars, {e: field.one})

    def __add__(self, other):
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t[e] + c if e in t else c
        return Poly(self.field, self.nvars, t)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = self.field(c)
        return Poly(self.field, self.nvars, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t[e] + c1 * c2 if e in t else c1 * c2
        return Poly(self.field, self.nvars, t)

    def is_zero(self):
        return not self.terms

    def __call__(self, point):
        acc = self.field.zero
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                term = term * (x ** k)
            acc = acc + term
        return acc

    def substitute(self, i, value):
        """Set variable i to ``value`` (a constant); keeps nvars."""
        t: dict = {}
        for e, c in self.terms.items():
            ne = tuple(0 if k == i else a for k, a in enumerate(e))
            c = c * (value ** e[i])
            t[ne] = t[ne] + c if ne in t else c
        return Poly(self.field, self.nvars, t)

    def along_line(self, point, direction):
        """Univariate polynomial t |-> self(point + t*direction), as {deg: coeff}."""
        F = self.field
        lines = [Poly(F, 1, {(0,): p, (1,): d}) for p, d in zip(point, direction)]
        acc = Poly(F, 1)
        for e, c in self.terms.items():
            term = Poly.const(F, 1, c)
            for ln, k in zip(lines, e):
                for _ in range(k):
                    term = term * ln
            acc = acc + term
        return acc


@functools.cache
def _sympy_field(n, degree):
    if degree == 1:
        return QQ
    K = QQ.algebraic_field(sympy.exp(2 * sympy.pi * sympy.I / n))
    mod = [QQ(c.numerator, c.denominator) for c in _modulus(n)]
    if list(reversed(K.mod.to_list())) != mod:
        raise RuntimeError(f"sympy's defining polynomial for QQ<zeta_{n}> differs from Phi_{n}")
    return K


def _modulus(n):
    return cyclotomic_polynomial(n)


def _to_sympy(K, x: FieldElement):
    if K is QQ:
        c = x.coeffs[0]
        return QQ(c.numerator, c.denominator)
    coeffs = [QQ(c.numerator, c.denominator) for c in reversed(x.coeffs)]
    return K(coeffs)


def _from_sympy(F, K, a) -> FieldElement:
    if K is QQ:
        return F(Fraction(int(a.numerator), int(a.denominator)))
    lst = a.to_list()
    return F.from_coefficients(
        [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(lst)])


def _to_sympy_poly(K, p: Poly, gens):
    d = {e: _to_sympy(K, c) for e, c in p.terms.items()}
    if not d:
        d = {(0,) * len(gens): K.zero}
    return sympy.Poly.from_dict(d, *gens, domain=K)


def _roots_univariate(F, polys: list) -> list | None:
    """Common roots in F of univariate polys; None means every value is a root."""
    nonzero = [p for p in polys if not p.is_zero()]
    if not nonzero:
        return None
    K = _sympy_field(F.conductor, F.degree)
    t = sympy.Symbol("t")
    g = None
    for p in nonzero:
        sp = _to_sympy_poly(K, p, [t])
        g = sp if g is None else g.gcd(sp)
    if g.degree() <= 0:
        return []
    roots = []
    for fac, _ in g.factor_list()[1]:
        if fac.degree() == 1:
            a, b = fac.rep.to_list()
            roots.append(_from_sympy(F, K, K.quo(K.neg(b), a)))
    return _sorted_unique(roots)


def _sorted_unique(values):
    seen = {}
    for v in values:
        seen[v.coeffs] = v
    return [seen[k] for k in sorted(seen, key=lambda c: tuple(-x for x in c))]


@dataclass
class Solution:
    point: tuple
    free_directions: tuple = ()


def solve_system(F, nvars: int, equations: list) -> list:
    """All solutions in F^nvars of ``equations`` (nvars <= 2).

    Returns a list of Solution; a solution with free directions stands for the
    whole affine line point + t*direction. Solution sets that are curves not
    parallel to an axis (or the whole plane) raise UnsupportedSystemError.
    """
    if nvars > 2:
        raise UnsupportedSystemError("at most two unknowns are supported")
    eqs = [e for e in equations if not e.is_zero()]
    if nvars == 0:
        if any(e(()) for e in eqs):
            return []
        return [Solution(())]
    if nvars == 1:
        uni = [_as_univariate(F, e, 0) for e in eqs]
        roots = _roots_univariate(F, uni)
        if roots is None:
            return [Solution((F.zero,), ((F.one,),))]
        return [Solution((r,)) for r in roots]
    # two unknowns: project to each axis in turn
    if not eqs:
        raise UnsupportedSystemError("every point of the plane is a solution")
    for fixed in (1, 0):
        values = _eliminant_roots(F, eqs, fixed)
        if values is None:
            continue
        out = []
        other = 1 - fixed
        for v in values:
            sub = [e.substitute(fixed, v) for e in eqs]
            uni = [_as_univariate(F, e, other) for e in sub]
            roots = _roots_univariate(F, uni)
            if roots is None:
                pt = [F.zero, F.zero]
                pt[fixed] = v
                direction = [F.zero, F.zero]
                direction[other] = F.one
                out.append(Solution(tuple(pt), (tuple(direction),)))
                continue
            for r in roots:
                pt = [F.zero, F.zero]
                pt[fixed], pt[other] = v, r
                out.append(Solution(tuple(pt)))
        return sorted(out, key=lambda s: tuple(tuple(-c for c in x.coeffs) for x in s.point))
    raise UnsupportedSystemError("solution set contains a curve not parallel to an axis")


def _as_univariate(F, p: Poly, i) -> Poly:
    t: dict = {}
    for e, c in p.terms.items():
        if any(a for k, a in enumerate(e) if k != i):
            raise ValueError("polynomial is not univariate in the requested variable")
        t[(e[i],)] = c
    return Poly(F, 1, t)


def _eliminant_roots(F, eqs, keep):
    """Roots of the elimination ideal in variable ``keep``; None if it is zero."""
    K = _sympy_field(F.conductor, F.degree)
    x0, x1 = sympy.symbols("c0 c1")
    gens = [x0, x1]
    # lex order eliminating the other variable first
    order_gens = [gens[1 - keep], gens[keep]]
    polys = [_to_sympy_poly(K, e, gens) for e in eqs]
    G = sympy.groebner(polys, *order_gens, order="lex", domain=K)
    elim = []
    for g in G.polys:
        if g.degree(gens[1 - keep]) == 0:
            elim.append(g)
    if any(g.is_ground and not g.is_zero for g in G.polys):
        return []
    if not elim:
        return None
    t = sympy.Symbol("t")
    g0 = None
    for g in elim:
        # generators of g are ordered (eliminated, kept)
        u = sympy.Poly.from_dict({(e[1],): c for e, c in g.terms()}, t, domain=K)
        g0 = u if g0 is None else g0.gcd(u)
    if g0.degree() <= 0:
        return []
    roots = []
    for fac, _ in g0.factor_list()[1]:
        if fac.degree() == 1:
            a, b = fac.rep.to_list()
            roots.append(_from_sympy(F, K, K.quo(K.neg(b), a)))
    return _sorted_unique(roots)
