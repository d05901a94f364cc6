"""Free variables, substitution and constant replacement."""
from __future__ import annotations

from typing import Dict, Set, Tuple

from .ast import (
    And, App, Atomic, Const, Half, Iff, Inf, Neg, Or, Plus, Sub, Sup, Term,
    Times, Var, Wff,
)


def free_vars(w) -> frozenset:
    return w.fv


def variables_in(w) -> Set[int]:
    """Every variable index occurring in ``w``, free or bound."""
    out: Set[int] = set()
    stack = [w]
    while stack:
        o = stack.pop()
        if isinstance(o, Var):
            out.add(o.index)
        elif isinstance(o, (App, Atomic)):
            stack.extend(o.args)
        elif isinstance(o, (Sup, Inf)):
            out.add(o.var)
            stack.append(o.body)
        elif isinstance(o, (Neg, Half, Times)):
            stack.append(o.body)
        elif isinstance(o, (Sub, Or, And, Iff, Plus)):
            stack.extend((o.left, o.right))
    return out


def subst_term(t: Term, x: int, s: Term) -> Term:
    if isinstance(t, Var):
        return s if t.index == x else t
    if isinstance(t, App) and x in t.fv:
        return App(t.fn, tuple(subst_term(a, x, s) for a in t.args))
    return t


def substitute(w: Wff, t: Term, x: int) -> Tuple[Wff, bool]:
    """Replace the free occurrences of x in w by t.

    Returns the replaced wff and whether the substitution is correct, i.e.
    no variable of t lands inside the scope of a quantifier binding it.
    """
    ok = [True]
    tv = t.fv

    def go(w: Wff, bound: frozenset) -> Wff:
        if x not in w.fv:
            return w
        if isinstance(w, Atomic):
            if bound & tv:
                ok[0] = False
            return Atomic(w.pred, tuple(subst_term(a, x, t) for a in w.args))
        if isinstance(w, (Neg, Half)):
            return type(w)(go(w.body, bound))
        if isinstance(w, Times):
            return Times(w.m, go(w.body, bound))
        if isinstance(w, (Sub, Or, And, Iff, Plus)):
            return type(w)(go(w.left, bound), go(w.right, bound))
        if isinstance(w, (Sup, Inf)):
            # x in w.fv already guarantees w.var != x
            return type(w)(w.var, go(w.body, bound | {w.var}))
        return w

    out = go(w, frozenset())
    return out, ok[0]


def replace_constants(w, mapping: Dict[object, Term]):
    """Replace constant symbols (keys of ``mapping``) by terms, everywhere.

    Subtrees without a replaced constant are returned unchanged (same object).
    """
    if not mapping:
        return w
    memo: Dict[int, object] = {}

    def term(t: Term) -> Term:
        if isinstance(t, Const):
            return mapping.get(t.symbol, t)
        if isinstance(t, App):
            args = tuple(term(a) for a in t.args)
            if all(a is b for a, b in zip(args, t.args)):
                return t
            return App(t.fn, args)
        return t

    def go(w):
        hit = memo.get(id(w))
        if hit is not None:
            return hit
        if isinstance(w, Term):
            out = term(w)
        elif isinstance(w, Atomic):
            args = tuple(term(a) for a in w.args)
            out = w if all(a is b for a, b in zip(args, w.args)) else Atomic(w.pred, args)
        elif isinstance(w, (Neg, Half)):
            b = go(w.body)
            out = w if b is w.body else type(w)(b)
        elif isinstance(w, Times):
            b = go(w.body)
            out = w if b is w.body else Times(w.m, b)
        elif isinstance(w, (Sup, Inf)):
            b = go(w.body)
            out = w if b is w.body else type(w)(w.var, b)
        elif isinstance(w, (Sub, Or, And, Iff, Plus)):
            l, r = go(w.left), go(w.right)
            out = w if (l is w.left and r is w.right) else type(w)(l, r)
        else:
            out = w
        memo[id(w)] = out
        return out

    return go(w)


def size(w) -> int:
    n = 0
    stack = [w]
    while stack:
        o = stack.pop()
        n += 1
        if isinstance(o, (App, Atomic)):
            stack.extend(o.args)
        elif isinstance(o, (Neg, Half, Times, Sup, Inf)):
            stack.append(o.body)
        elif isinstance(o, (Sub, Or, And, Iff, Plus)):
            stack.extend((o.left, o.right))
    return n
