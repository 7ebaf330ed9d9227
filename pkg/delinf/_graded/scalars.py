from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

Scalar = Fraction
ScalarLike = Union[Fraction, int, str]

_RATIONAL = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")


def parse_scalar(text: str) -> Fraction:
    """
    Parses an exact rational written as an integer or `p/q`.

    Decimal and exponent notation are rejected so that no value silently
    passes through a float.
    """
    if not _RATIONAL.match(text):
        raise ValueError(f"{text!r} is not an exact rational of the form p/q")
    value = Fraction(text.replace(" ", ""))
    return value


def as_scalar(value: ScalarLike) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_scalar(value)
    raise TypeError(f"Cannot interpret {value!r} as an exact rational")


def format_scalar(value: Fraction) -> str:
    return str(value)


__all__ = ["Scalar", "ScalarLike", "as_scalar", "format_scalar", "parse_scalar"]
