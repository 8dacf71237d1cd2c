"""Parsing and formatting of exact rationals as "p/q" strings."""

from fractions import Fraction

from .exceptions import ParseError


def parse_ratio(value) -> Fraction:
    """Read an exact rational from an int, Fraction, or "p/q" string.

    Floats are rejected: the exact core never ingests binary approximations.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational literal {value!r}") from exc
    raise ParseError(f"cannot read a rational from {type(value).__name__}")


def fmt_ratio(value) -> str:
    return str(Fraction(value))
