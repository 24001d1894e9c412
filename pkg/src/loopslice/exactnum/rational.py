"""Helpers around :class:`fractions.Fraction`, the ground field of the package."""

from fractions import Fraction
from numbers import Rational

from ..errors import SchemaError


def rat(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise SchemaError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        return parse_rational(value)
    raise SchemaError(f"not a rational: {value!r}")


def parse_rational(text: str) -> Fraction:
    s = text.strip()
    if not s or any(ch in s for ch in ".eE_ "):
        raise SchemaError(f"rationals must be written as p/q, got {text!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational {text!r}") from exc


def rat_str(value) -> str:
    value = rat(value)
    return f"{value.numerator}/{value.denominator}"


def demote(value):
    """Return an int when ``value`` is integral; keeps inner loops on ints."""
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value
