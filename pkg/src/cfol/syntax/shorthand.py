"""Expansion of the sugared connectives into the core {¬, ½, ∸, sup, inf}.

    φ ∨ ψ   ->  ¬((¬ψ) ∸ (φ ∸ ψ))          value max(φ, ψ); only ψ is repeated
    φ ∧ ψ   ->  φ ∸ (φ ∸ ψ)
    φ ↔ ψ   ->  (φ ∸ ψ) ∨ (ψ ∸ φ)
    0       ->  sup_x0 d(x0, x0)
    1       ->  ¬0
    φ ∔ ψ   ->  ¬((1 ∸ φ) ∸ ψ)
    mφ      ->  (...(φ ∔ φ) ∔ ...) ∔ φ        m copies; 0φ is 0
    2^-k    ->  ½ ... ½ 1                     k halvings
    l/2^k   ->  (...(2^-k ∔ 2^-k) ∔ ...)      l copies; 0/2^k is 0
"""
from __future__ import annotations

from functools import lru_cache

from .ast import (
    And, Atomic, DyadicNumeral, Half, Iff, Inf, Neg, Or, Plus, Sub, Sup, Times, Var, Wff,
)
from .signature import METRIC

ZERO: Wff = Sup(0, Atomic(METRIC, (Var(0), Var(0))))
ONE: Wff = Neg(ZERO)


def disj(a: Wff, b: Wff) -> Wff:
    # the left operand occurs once, so left-nested joins grow linearly
    return Neg(Sub(Neg(b), Sub(a, b)))


def conj(a: Wff, b: Wff) -> Wff:
    return Sub(a, Sub(a, b))


def plus(a: Wff, b: Wff) -> Wff:
    return Neg(Sub(Sub(ONE, a), b))


def times(m: int, a: Wff) -> Wff:
    if m == 0:
        return ZERO
    out = a
    for _ in range(m - 1):
        out = plus(out, a)
    return out


def power_of_half(k: int) -> Wff:
    out = ONE
    for _ in range(k):
        out = Half(out)
    return out


@lru_cache(maxsize=None)
def numeral(numer: int, exp: int) -> Wff:
    """Core expansion of the numeral numer/2^exp."""
    DyadicNumeral(numer, exp)  # range check
    return times(numer, power_of_half(exp))


@lru_cache(maxsize=1 << 18)
def expand_shorthand(w: Wff) -> Wff:
    if isinstance(w, Atomic):
        return w
    if isinstance(w, Neg):
        b = expand_shorthand(w.body)
        return w if b is w.body else Neg(b)
    if isinstance(w, Half):
        b = expand_shorthand(w.body)
        return w if b is w.body else Half(b)
    if isinstance(w, Sub):
        l, r = expand_shorthand(w.left), expand_shorthand(w.right)
        return w if (l is w.left and r is w.right) else Sub(l, r)
    if isinstance(w, (Sup, Inf)):
        b = expand_shorthand(w.body)
        return w if b is w.body else type(w)(w.var, b)
    if isinstance(w, Or):
        return disj(expand_shorthand(w.left), expand_shorthand(w.right))
    if isinstance(w, And):
        return conj(expand_shorthand(w.left), expand_shorthand(w.right))
    if isinstance(w, Iff):
        l, r = expand_shorthand(w.left), expand_shorthand(w.right)
        return disj(Sub(l, r), Sub(r, l))
    if isinstance(w, Plus):
        return plus(expand_shorthand(w.left), expand_shorthand(w.right))
    if isinstance(w, Times):
        return times(w.m, expand_shorthand(w.body))
    if isinstance(w, DyadicNumeral):
        return numeral(w.numer, w.exp)
    # template metavariables and other leaves pass through untouched
    return w


def is_core(w: Wff) -> bool:
    stack = [w]
    while stack:
        w = stack.pop()
        if isinstance(w, (Or, And, Iff, Plus, Times, DyadicNumeral)):
            return False
        if isinstance(w, (Neg, Half, Sup, Inf)):
            stack.append(w.body)
        elif isinstance(w, Sub):
            stack.extend((w.left, w.right))
    return True


def numeral_exponent(w: Wff):
    """If ``w`` is the core expansion of 2^-n, return n; otherwise None."""
    n = 0
    while isinstance(w, Half):
        w = w.body
        n += 1
    return n if w == ONE else None
