"""Truncated Laurent series over Q, i.e. elements of k((t)) known modulo t^prec."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import PrecisionError, PreconditionError, SchemaError
from .rational import demote, rat, rat_str

EXACT = math.inf
DEFAULT_RELATIVE_PRECISION = 8


def _check_prec(prec):
    if prec == EXACT:
        return EXACT
    if isinstance(prec, bool) or not isinstance(prec, int):
        raise PreconditionError(f"precision must be an integer or exact, got {prec!r}")
    return prec


class TruncatedLaurent:
    """``sum coeffs[i] * t**(val + i)`` known modulo ``t**prec``.

    ``prec`` is ``math.inf`` for an exact element (a Laurent polynomial).
    Leading zeros are absorbed into ``val`` and trailing zeros dropped, so a
    nonzero value always has a nonzero coefficient at ``val``.  Anything that
    looks like zero has ``val == prec``.
    """

    __slots__ = ("val", "coeffs", "prec")

    def __init__(self, val: int, coeffs: Iterable = (), prec=EXACT):
        prec = _check_prec(prec)
        cs = [demote(rat(c)) for c in coeffs]
        start = 0
        while start < len(cs) and cs[start] == 0:
            start += 1
        val += start
        cs = cs[start:]
        if prec != EXACT:
            cs = cs[: max(prec - val, 0)]
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            val = prec
        self.val = val
        self.coeffs = tuple(cs)
        self.prec = prec

    @classmethod
    def _raw(cls, val, coeffs, prec):
        obj = cls.__new__(cls)
        obj.val, obj.coeffs, obj.prec = val, coeffs, prec
        return obj

    # constructors

    @classmethod
    def zero(cls, prec=EXACT) -> "TruncatedLaurent":
        return cls(0, (), prec)

    @classmethod
    def const(cls, c, prec=EXACT) -> "TruncatedLaurent":
        return cls(0, [c], prec)

    @classmethod
    def monomial(cls, c, k: int, prec=EXACT) -> "TruncatedLaurent":
        """``c * t**k``."""
        return cls(k, [c], prec)

    @classmethod
    def from_dict(cls, terms: dict, prec=EXACT) -> "TruncatedLaurent":
        """Build from ``{exponent: coefficient}``."""
        if not terms:
            return cls.zero(prec)
        lo, hi = min(terms), max(terms)
        return cls(lo, [terms.get(k, 0) for k in range(lo, hi + 1)], prec)

    # inspection

    def is_exact(self) -> bool:
        return self.prec == EXACT

    def is_zero(self) -> bool:
        """True when no known coefficient is nonzero (``val == prec``)."""
        return not self.coeffs

    def valuation(self):
        """Order of the leading term; ``prec`` (possibly inf) for apparent zero."""
        return self.val

    def coefficient(self, k: int) -> Fraction:
        if k >= self.prec:
            raise PrecisionError(f"coefficient of t^{k} is beyond precision {self.prec}")
        i = k - self.val
        if 0 <= i < len(self.coeffs):
            return Fraction(self.coeffs[i])
        return Fraction(0)

    def residue(self) -> Fraction:
        return self.coefficient(-1)

    def lead(self) -> Fraction:
        if not self.coeffs:
            raise PrecisionError("apparent zero has no leading coefficient")
        return Fraction(self.coeffs[0])

    def is_integral(self) -> bool:
        """Membership in O; raises when precision cannot decide it."""
        if self.coeffs:
            return self.val >= 0
        if self.prec >= 0:
            return True
        raise PrecisionError("cannot decide integrality of an element known only below t^0")

    def terms(self) -> dict[int, Fraction]:
        return {self.val + i: Fraction(c) for i, c in enumerate(self.coeffs) if c}

    # arithmetic

    @staticmethod
    def _coerce(other) -> "TruncatedLaurent":
        if isinstance(other, TruncatedLaurent):
            return other
        return TruncatedLaurent.const(other)

    def __add__(self, other):
        if not isinstance(other, TruncatedLaurent):
            other = TruncatedLaurent.const(other)
        prec = min(self.prec, other.prec)
        if not other.coeffs:
            if other.prec >= self.prec:
                return self
            return TruncatedLaurent(self.val, self.coeffs, prec)
        if not self.coeffs:
            if self.prec >= other.prec:
                return other
            return TruncatedLaurent(other.val, other.coeffs, prec)
        lo = min(self.val, other.val)
        hi = max(self.val + len(self.coeffs), other.val + len(other.coeffs))
        if prec != EXACT:
            hi = min(hi, prec)
        out = [0] * max(hi - lo, 0)
        for i, c in enumerate(self.coeffs):
            k = self.val + i - lo
            if k < len(out):
                out[k] += c
        for i, c in enumerate(other.coeffs):
            k = other.val + i - lo
            if k < len(out):
                out[k] += c
        return TruncatedLaurent(lo, out, prec)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedLaurent._raw(self.val, tuple(-c for c in self.coeffs), self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def scale(self, c) -> "TruncatedLaurent":
        c = demote(rat(c))
        if c == 0:
            return TruncatedLaurent.zero()
        return TruncatedLaurent._raw(self.val, tuple(demote(c * x) for x in self.coeffs), self.prec)

    def shift(self, k: int) -> "TruncatedLaurent":
        """Multiply by ``t**k``."""
        return TruncatedLaurent._raw(self.val + k, self.coeffs, self.prec + k)

    def __mul__(self, other):
        if not isinstance(other, TruncatedLaurent):
            return self.scale(other)
        prec = min(self.prec + other.val, other.prec + self.val)
        if not self.coeffs or not other.coeffs:
            return TruncatedLaurent.zero(prec)
        val = self.val + other.val
        length = len(self.coeffs) + len(other.coeffs) - 1
        if prec != EXACT:
            length = min(length, prec - val)
        out = [0] * max(length, 0)
        b = other.coeffs
        for i, x in enumerate(self.coeffs):
            if i >= length:
                break
            if not x:
                continue
            for j in range(min(len(b), length - i)):
                y = b[j]
                if y:
                    out[i + j] += x * y
        return TruncatedLaurent(val, out, prec)

    __rmul__ = __mul__

    def invert(self, relative_precision: int = DEFAULT_RELATIVE_PRECISION) -> "TruncatedLaurent":
        """Multiplicative inverse.

        A finite-precision input known to relative order ``p - v`` yields an
        inverse with absolute precision ``p - 2v``.  Exact monomials invert
        exactly; other exact inputs are expanded to ``relative_precision``
        terms.
        """
        if not self.coeffs:
            raise PrecisionError("cannot invert an apparent zero")
        v = self.val
        if self.prec == EXACT:
            if len(self.coeffs) == 1:
                return TruncatedLaurent._raw(-v, (demote(1 / Fraction(self.coeffs[0])),), EXACT)
            rel = relative_precision
        else:
            rel = self.prec - v
        u = self.coeffs
        inv0 = 1 / Fraction(u[0])
        out = [inv0]
        for k in range(1, rel):
            s = 0
            for j in range(1, min(k, len(u) - 1) + 1):
                s += u[j] * out[k - j]
            out.append(-s * inv0)
        return TruncatedLaurent(-v, out, -v + rel)

    def __truediv__(self, other):
        if not isinstance(other, TruncatedLaurent):
            c = rat(other)
            if c == 0:
                raise PreconditionError("division by zero")
            return self.scale(1 / c)
        return self * other.invert()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.invert()

    def __pow__(self, k: int):
        if k < 0:
            return self.invert() ** (-k)
        out = TruncatedLaurent.const(1)
        for _ in range(k):
            out = out * self
        return out

    def truncate(self, p) -> "TruncatedLaurent":
        """Forget everything from ``t**p`` on (never raises precision)."""
        p = _check_prec(p)
        return TruncatedLaurent(self.val, self.coeffs, min(p, self.prec))

    def polar_part(self) -> "TruncatedLaurent":
        """Representative of the class modulo O, as an exact element."""
        if self.prec < 0:
            raise PrecisionError("polar part is not determined at this precision")
        keep = [c for i, c in enumerate(self.coeffs) if self.val + i < 0]
        return TruncatedLaurent(self.val, keep, EXACT)

    def with_precision(self, p) -> "TruncatedLaurent":
        """Declare exact data known modulo ``t**p`` (drops terms beyond)."""
        return TruncatedLaurent(self.val, self.coeffs, min(_check_prec(p), self.prec))

    # comparison and display

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncatedLaurent.const(other)
        if not isinstance(other, TruncatedLaurent):
            return NotImplemented
        return (self.val, self.coeffs, self.prec) == (other.val, other.coeffs, other.prec)

    def agrees_with(self, other) -> bool:
        """Equality modulo the weaker of the two precisions."""
        other = self._coerce(other)
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.val, self.coeffs, self.prec))

    def __repr__(self):
        return f"TruncatedLaurent({self})"

    def __str__(self):
        parts = []
        for k, c in sorted(self.terms().items()):
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        if self.prec != EXACT:
            body += f" + O(t^{self.prec})"
        return body

    # JSON

    def to_json(self) -> dict:
        return {
            "val": None if self.val == EXACT else self.val,
            "coeffs": [rat_str(c) for c in self.coeffs],
            "prec": None if self.prec == EXACT else self.prec,
        }

    @classmethod
    def from_json(cls, data) -> "TruncatedLaurent":
        if isinstance(data, (int, str)) and not isinstance(data, bool):
            return cls.const(rat(data))
        if not isinstance(data, dict) or "coeffs" not in data:
            raise SchemaError(f"not a Laurent series object: {data!r}")
        val = data.get("val", 0)
        prec = data.get("prec")
        coeffs = data["coeffs"]
        if not isinstance(coeffs, list):
            raise SchemaError("coeffs must be a list")
        if prec is None:
            prec = EXACT
        if val is None:
            val = 0 if not coeffs else None
        for name, x in (("val", val), ("prec", prec)):
            if x is not EXACT and (isinstance(x, bool) or not isinstance(x, int)):
                raise SchemaError(f"{name} must be an integer")
        return cls(val, [rat(c) for c in coeffs], prec)


def laurent_from_poly_coeffs(coeffs: Sequence, val: int = 0, prec=EXACT) -> TruncatedLaurent:
    return TruncatedLaurent(val, coeffs, prec)


def t_power(k: int, c=1) -> TruncatedLaurent:
    return TruncatedLaurent.monomial(c, k)
