"""Exact truth values in [0, 1] and the connective algebra on them.

Values are :class:`fractions.Fraction`; floats never enter this module.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Union

from .syntax.ast import DyadicNumeral

Value = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def as_value(x: Union[int, str, Fraction]) -> Fraction:
    v = Fraction(x)
    if not 0 <= v <= 1:
        raise ValueError(f"truth value {v} outside [0, 1]")
    return v


def neg(v: Fraction) -> Fraction:
    return 1 - v


def half(v: Fraction) -> Fraction:
    return v / 2


def truncsub(v: Fraction, w: Fraction) -> Fraction:
    return v - w if v > w else ZERO


def truncadd(v: Fraction, w: Fraction) -> Fraction:
    s = v + w
    return s if s < 1 else ONE


def scalar(m: int, v: Fraction) -> Fraction:
    s = m * v
    return s if s < 1 else ONE


_UNARY = {"neg": neg, "half": half}
_BINARY = {"truncsub": truncsub, "truncadd": truncadd}


def apply_connective(op, *args: Fraction) -> Fraction:
    """Apply ``neg``, ``half``, ``truncsub``, ``truncadd`` or ``("scalar", m)``."""
    if isinstance(op, tuple) and op[0] == "scalar":
        (v,) = args
        return scalar(op[1], v)
    if op in _UNARY:
        (v,) = args
        return _UNARY[op](v)
    if op in _BINARY:
        v, w = args
        return _BINARY[op](v, w)
    raise KeyError(f"unknown connective {op!r}")


def dyadic_value(p: Union[DyadicNumeral, tuple]) -> Fraction:
    if isinstance(p, tuple):
        p = DyadicNumeral(*p)
    return Fraction(p.numer, 1 << p.exp)


def fmt(v: Fraction) -> str:
    """Serialize as N/D in lowest terms."""
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def parse_value(text: str) -> Fraction:
    return Fraction(text.strip())
