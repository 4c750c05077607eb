"""Exact rational parsing and wire formatting.

Rationals travel as "p/q" strings so JSON transport preserves exactness.
Formatting always includes the denominator ("0/1", "1/1") so round-trips are
unambiguous; parsing additionally accepts bare integers.
"""

from fractions import Fraction

from .errors import ParseError


def parse_fraction(text) -> Fraction:
    """Parse "p/q" (or a bare integer string / int) into a Fraction."""
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"expected rational string, got {type(text).__name__}")
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num.strip()), int(den.strip()))
        return Fraction(int(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational: {text!r}") from exc


def format_fraction(value: Fraction) -> str:
    """Render a Fraction as "p/q", keeping the denominator even when 1."""
    return f"{value.numerator}/{value.denominator}"
