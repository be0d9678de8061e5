"""Parsing and rendering of exact rationals.

Rationals are written ``p/q`` (or a bare integer) in text and CSV, and as
``{"num": p, "den": q}`` in JSON. Decimal notation is refused everywhere.
"""

from __future__ import annotations

import re
from fractions import Fraction

from parhiggs.errors import ValidationError

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ValidationError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    match = _RATIONAL_RE.match(str(text))
    if match is None:
        raise ValidationError(f"malformed rational {text!r}; expected 'p/q' or an integer")
    num = int(match.group(1))
    den = int(match.group(2)) if match.group(2) is not None else 1
    if den == 0:
        raise ValidationError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rational_to_json(value: Fraction | int) -> dict[str, int]:
    value = Fraction(value)
    return {"num": value.numerator, "den": value.denominator}


def rational_from_json(obj: object) -> Fraction:
    if not isinstance(obj, dict) or set(obj) - {"num", "den"} or "num" not in obj:
        raise ValidationError(f"expected {{'num', 'den'}} object, got {obj!r}")
    num, den = obj["num"], obj.get("den", 1)
    if not isinstance(num, int) or not isinstance(den, int) or isinstance(num, bool) or isinstance(den, bool):
        raise ValidationError(f"rational fields must be integers: {obj!r}")
    if den <= 0:
        raise ValidationError(f"denominator must be positive: {obj!r}")
    return Fraction(num, den)
