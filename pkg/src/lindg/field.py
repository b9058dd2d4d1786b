"""Exact arithmetic in Q and in cyclotomic fields Q(zeta_n).

Elements of Q(zeta_n) are stored as coefficient tuples of length phi(n) over
``fractions.Fraction``; the polynomial a_0 + a_1 z + ... + a_{k-1} z^{k-1}
corresponds to ``(a_0, ..., a_{k-1})`` and all products are reduced modulo the
n-th cyclotomic polynomial.

Textual syntax (used by scenario files and reports)::

    -1      1/2      z^2+z      3/2*z-1      -z^3+2z

Elements of different conductors are never coerced into each other.
"""

from __future__ import annotations

import functools
import re
from fractions import Fraction
from numbers import Rational as _RationalABC


class FieldMismatchError(TypeError):
    """Operands live in different cyclotomic fields."""


class ScalarSyntaxError(ValueError):
    """A scalar string could not be parsed; ``position`` is a 0-based offset or None."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


# -- polynomials over Q as coefficient lists, lowest degree first -------------

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _trim(x - y for x, y in zip(a, b))


def _poly_divmod(a, b):
    """Long division a = q*b + r over Q."""
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] / lead
        q[shift] = c
        for i, y in enumerate(b):
            r[shift + i] -= c * y
        r = _trim(r)
    return _trim(q), r


@functools.cache
def cyclotomic_polynomial(n: int) -> tuple[Fraction, ...]:
    """Coefficients of Phi_n, lowest degree first.

    Uses Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d.
    """
    if n < 1:
        raise ValueError(f"conductor must be positive, got {n}")
    num = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic_polynomial(d)))
            assert not rem
    return tuple(num)


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@functools.cache
def CyclotomicField(n: int) -> "_CyclotomicField":
    """Return the (cached, unique) field Q(zeta_n)."""
    return _CyclotomicField(n)


make_cyclotomic_field = CyclotomicField


class _CyclotomicField:
    __slots__ = ("conductor", "modulus", "degree", "_reductions", "_zero", "_one", "__weakref__")

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"conductor must be positive, got {n}")
        self.conductor = n
        self.modulus = cyclotomic_polynomial(n)
        self.degree = len(self.modulus) - 1
        # z^k mod Phi_n for k in [degree, 2*degree - 2], as coefficient tuples
        k = self.degree
        reds = {}
        cur = [-c for c in self.modulus[:-1]]  # z^k
        for e in range(k, 2 * k - 1):
            reds[e] = tuple(cur)
            # multiply by z
            top = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            if top:
                cur = [c - top * m for c, m in zip(cur, self.modulus[:-1])]
        self._reductions = reds
        self._zero = self.from_coefficients(())
        self._one = self.from_coefficients((1,))

    def __repr__(self):
        return "QQ" if self.degree == 1 else f"QQ(zeta_{self.conductor})"

    def __reduce__(self):
        return (CyclotomicField, (self.conductor,))

    # constructors
    def __call__(self, value=0) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise FieldMismatchError(f"{value!r} is not in {self!r}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (int, _RationalABC)):
            return self.from_coefficients((Fraction(value),))
        raise TypeError(f"cannot convert {type(value).__name__} to {self!r}")

    def from_coefficients(self, coeffs) -> "FieldElement":
        """Element sum coeffs[k] z^k; any length, reduced mod Phi_n."""
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > self.degree:
            coeffs = self._reduce(coeffs)
        coeffs = coeffs + [Fraction(0)] * (self.degree - len(coeffs))
        return FieldElement._raw(self, tuple(coeffs))

    def _reduce(self, coeffs):
        k = self.degree
        if len(coeffs) <= 2 * k - 1:
            out = list(coeffs[:k]) + [Fraction(0)] * (k - min(len(coeffs), k))
            for e in range(k, len(coeffs)):
                c = coeffs[e]
                if c:
                    for i, r in enumerate(self._reductions[e]):
                        out[i] += c * r
            return out
        _, r = _poly_divmod(coeffs, list(self.modulus))
        return r + [Fraction(0)] * (k - len(r))

    @property
    def zero(self) -> "FieldElement":
        return self._zero

    @property
    def one(self) -> "FieldElement":
        return self._one

    @property
    def zeta(self) -> "FieldElement":
        """The primitive root of unity z = exp(2 pi i / n)."""
        return self.from_coefficients((0, 1))

    def parse(self, text: str) -> "FieldElement":
        return parse_scalar(self, text)


class FieldElement:
    """Immutable element of a cyclotomic field."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field, coeffs):
        fe = field.from_coefficients(coeffs)
        object.__setattr__(self, "field", fe.field)
        object.__setattr__(self, "coeffs", fe.coeffs)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, field, coeffs):
        obj = object.__new__(cls)
        object.__setattr__(obj, "field", field)
        object.__setattr__(obj, "coeffs", coeffs)
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def __reduce__(self):
        return (_rebuild, (self.field.conductor, self.coeffs))

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldMismatchError(
                    f"cannot combine elements of {self.field!r} and {other.field!r}"
                )
            return other
        if isinstance(other, (int, _RationalABC)):
            return self.field.from_coefficients((Fraction(other),))
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement._raw(
            self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._raw(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement._raw(
            self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) == 1:
            return FieldElement._raw(self.field, (a[0] * b[0],))
        prod = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return FieldElement._raw(self.field, tuple(self.field._reduce(prod)))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        """Multiplicative inverse via the extended Euclidean algorithm."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        if len(self.coeffs) == 1 or self.is_rational():
            return self.field.from_coefficients((1 / self.coeffs[0],))
        # s*self + t*Phi = gcd, gcd a nonzero constant since Phi is irreducible
        r0, r1 = list(self.field.modulus), _trim(self.coeffs)
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        c = r1[0]
        return self.field.from_coefficients([x / c for x in s1])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldMismatchError(
                    f"cannot compare elements of {self.field!r} and {other.field!r}"
                )
            return self.coeffs == other.coeffs
        if isinstance(other, (int, _RationalABC)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            # rational elements hash like the equal Fraction/int
            h = hash(self.coeffs[0]) if self.is_rational() else hash(self.coeffs)
            object.__setattr__(self, "_hash", h)
        return h

    def multiplicative_order(self, bound: int = 10_000) -> int | None:
        """Smallest k >= 1 with self**k == 1, or None if none up to ``bound``."""
        if self.is_zero():
            return None
        x = self
        for k in range(1, bound + 1):
            if x == 1:
                return k
            x = x * self
        return None

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"{self.field!r}({format_scalar(self)!r})"


def _rebuild(n, coeffs):
    return FieldElement._raw(CyclotomicField(n), coeffs)


def field_arith(op: str, a: FieldElement, b: FieldElement | None = None):
    """Dispatch form of the field operations: add, mul, neg, inv, eq."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op == "eq":
        return a == b
    raise ValueError(f"unknown field operation {op!r}")


def common_field(*values) -> "_CyclotomicField":
    fields = {v.field for v in values if isinstance(v, FieldElement)}
    if len(fields) > 1:
        raise FieldMismatchError(f"values span several fields: {sorted(map(repr, fields))}")
    if not fields:
        return CyclotomicField(1)
    return fields.pop()


# -- textual syntax -----------------------------------------------------------

_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<num>\d+)(?:\s*/\s*(?P<den>\d+))?)?
        \s*(?P<star>\*)?\s*
        (?P<z>z(?:\s*\^\s*(?P<exp>\d+))?)?\s*""",
    re.VERBOSE,
)


def parse_scalar(field, text) -> FieldElement:
    """Parse ``text`` (an int, Fraction, or polynomial string in z) exactly."""
    if isinstance(text, FieldElement):
        return field(text)
    if isinstance(text, (int, _RationalABC)) and not isinstance(text, bool):
        return field(text)
    if not isinstance(text, str):
        raise ScalarSyntaxError(f"not a scalar: {text!r}")
    s = text.strip()
    lead = len(text) - len(text.lstrip())
    if not s:
        raise ScalarSyntaxError("empty scalar")
    coeffs: dict[int, Fraction] = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ScalarSyntaxError(f"unexpected character at position {pos + lead} in {text!r}",
                                    pos + lead)
        if not first and m.group("sign") is None:
            at = min(m.start(g) for g in ("num", "star", "z") if m.group(g) is not None)
            raise ScalarSyntaxError(f"missing operator at position {at + lead} in {text!r}",
                                    at + lead)
        if m.group("num") is None and m.group("z") is None:
            at = m.start("sign") if m.group("sign") else m.start("star")
            raise ScalarSyntaxError(f"dangling sign at position {at + lead} in {text!r}",
                                    at + lead)
        if m.group("star") and (m.group("num") is None or m.group("z") is None):
            at = m.start("star")
            raise ScalarSyntaxError(f"misplaced '*' at position {at + lead} in {text!r}",
                                    at + lead)
        c = Fraction(1)
        if m.group("num") is not None:
            den = int(m.group("den")) if m.group("den") else 1
            if den == 0:
                at = m.start("den")
                raise ScalarSyntaxError(f"zero denominator at position {at + lead} in {text!r}",
                                        at + lead)
            c = Fraction(int(m.group("num")), den)
        if m.group("sign") == "-":
            c = -c
        e = 0
        if m.group("z") is not None:
            e = int(m.group("exp")) if m.group("exp") else 1
        coeffs[e] = coeffs.get(e, Fraction(0)) + c
        pos = m.end()
        first = False
    top = max(coeffs)
    return field.from_coefficients([coeffs.get(k, Fraction(0)) for k in range(top + 1)])


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_scalar(x: FieldElement) -> str:
    """Canonical string, highest power of z first; never uses decimals."""
    parts = []
    for k in range(len(x.coeffs) - 1, -1, -1):
        c = x.coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = _frac_str(a)
        else:
            mono = "z" if k == 1 else f"z^{k}"
            body = mono if a == 1 else f"{_frac_str(a)}*{mono}"
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += sign + body
    return out
