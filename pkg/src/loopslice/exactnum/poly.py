"""Univariate polynomials over Q, resultants and discriminants."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import PreconditionError
from .rational import rat


class Poly:
    """Dense univariate polynomial with Fraction coefficients.

    ``coeffs[i]`` multiplies ``var**i``; the list never ends in a zero, so the
    zero polynomial has ``coeffs == ()`` and degree -1.
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "lam"):
        cs = [rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def monomial(cls, c, k: int, var: str = "lam") -> "Poly":
        return cls([0] * k + [c], var)

    @classmethod
    def from_roots(cls, roots: Iterable, var: str = "lam") -> "Poly":
        p = cls([1], var)
        for r in roots:
            p = p * cls([-rat(r), 1], var)
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        if not self.coeffs:
            raise PreconditionError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly([other], self.var)

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self.coeff(i) + other.coeff(i) for i in range(n)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return Poly([], self.var)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly([1], self.var)
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other):
        return poly_divmod(self, self._coerce(other))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:], self.var)

    def monic(self) -> "Poly":
        return self * (1 / self.lc)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]}, var={self.var!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = self.var if k == 1 else f"{self.var}^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def poly_divmod(g: Poly, f: Poly) -> tuple[Poly, Poly]:
    """Return ``(q, r)`` with ``g == q*f + r`` and ``deg r < deg f``."""
    if f.is_zero():
        raise PreconditionError("division by the zero polynomial")
    r = list(g.coeffs)
    df = f.degree
    inv = 1 / f.lc
    if len(r) - 1 < df:
        return Poly([], g.var), Poly(r, g.var)
    q = [Fraction(0)] * (len(r) - df)
    for k in range(len(r) - 1, df - 1, -1):
        c = r[k] * inv
        q[k - df] = c
        if c:
            for i, b in enumerate(f.coeffs):
                r[k - df + i] -= c * b
    return Poly(q, g.var), Poly(r[:df], g.var)


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm; ``gcd(0, 0) == 0``."""
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a if a.is_zero() else a.monic()


def sylvester_matrix(f: Poly, g: Poly) -> list[list[Fraction]]:
    """Rows of shifted ``f`` coefficients (``deg g`` of them), then of ``g``."""
    m, n = f.degree, g.degree
    size = m + n
    fc = list(reversed(f.coeffs))
    gc = list(reversed(g.coeffs))
    rows = []
    for i in range(n):
        rows.append([Fraction(0)] * i + fc + [Fraction(0)] * (size - i - len(fc)))
    for i in range(m):
        rows.append([Fraction(0)] * i + gc + [Fraction(0)] * (size - i - len(gc)))
    return rows


def resultant(f: Poly, g: Poly) -> Fraction:
    """Determinant of the Sylvester matrix; ``lc(f)**deg(g) * prod g(roots of f)``."""
    if f.is_zero() or g.is_zero():
        raise PreconditionError("resultant of the zero polynomial is undefined")
    from .linalg import det

    return det(sylvester_matrix(f, g))


def discriminant(f: Poly) -> Fraction:
    """``(-1)**(d(d-1)/2) * resultant(f, f') / lc(f)``."""
    d = f.degree
    if d < 1:
        raise PreconditionError("discriminant needs a polynomial of degree >= 1")
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.lc


def rational_roots(f: Poly) -> list[tuple[Fraction, int]]:
    """Rational roots of ``f`` with multiplicity, in increasing order."""
    if f.is_zero():
        raise PreconditionError("the zero polynomial has every root")
    from math import gcd, lcm

    den = 1
    for c in f.coeffs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in f.coeffs]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    roots: list[tuple[Fraction, int]] = []
    rest = Poly(ints, f.var)
    # strip the root at zero first so the constant term is nonzero
    mult = 0
    while rest.coeffs and rest.coeffs[0] == 0:
        rest = Poly(rest.coeffs[1:], f.var)
        mult += 1
    if mult:
        roots.append((Fraction(0), mult))
    if rest.degree >= 1:
        a0 = abs(int(rest.coeffs[0] * _den(rest)))
        an = abs(int(rest.lc * _den(rest)))
        for p in _divisors(a0):
            for q in _divisors(an):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if any(r == cand for r, _ in roots):
                        continue
                    k = 0
                    while rest.degree >= 1 and rest(cand) == 0:
                        rest = rest // Poly([-cand, 1], f.var)
                        k += 1
                    if k:
                        roots.append((cand, k))
    roots.sort()
    return roots


def _den(p: Poly) -> int:
    from math import lcm

    d = 1
    for c in p.coeffs:
        d = lcm(d, c.denominator)
    return d


def _divisors(n: int) -> list[int]:
    n = abs(n)
    if n == 0:
        return [1]
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def poly_from_list(values: Sequence, var: str = "lam") -> Poly:
    return Poly([rat(v) for v in values], var)
