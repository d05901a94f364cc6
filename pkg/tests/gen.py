"""Seeded random generators for wffs, terms and valid finite structures.

Plain ``random.Random`` based so the acceptance runner and the hypothesis
properties (through ``st.randoms()``) share one generator.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from cfol.semantics import Assignment, FiniteStructure, validate_structure
from cfol.syntax import (
    And, App, Atomic, Const, DyadicNumeral, Half, HenkinConstant, Iff, Inf, Neg, Or, Plus,
    Signature, Sub, Sup, Times, Var,
)

RICH_SIG = Signature.parse("""
pred Q 1 id
pred R 2 shift 1
fun f 1 id
const c_a
const c_b
""")

QUARTERS = [Fraction(i, 4) for i in range(5)]
NVARS = 3


def term(rng: random.Random, sig=RICH_SIG, depth=2, henkin=()):
    r = rng.random()
    if depth > 0 and sig.functions and r < 0.2:
        fn = rng.choice(sig.functions)
        return App(fn.name, tuple(term(rng, sig, depth - 1, henkin) for _ in range(fn.arity)))
    if henkin and r < 0.35:
        return Const(rng.choice(henkin))
    if sig.constants and r < 0.6:
        return Const(rng.choice(sig.constants))
    return Var(rng.randrange(NVARS))


def atom(rng, sig=RICH_SIG, henkin=()):
    p = rng.choice(sig.predicates)
    return Atomic(p.name, tuple(term(rng, sig, henkin=henkin) for _ in range(p.arity)))


def wff(rng: random.Random, sig=RICH_SIG, depth=3, sugar=True, henkin=()):
    if depth == 0 or rng.random() < 0.25:
        if sugar and rng.random() < 0.1:
            k = rng.randrange(3)
            return DyadicNumeral(rng.randrange((1 << k) + 1), k)
        return atom(rng, sig, henkin)
    ops = ["neg", "half", "sub", "sup", "inf"] + (["or", "and", "iff", "plus", "times"] if sugar else [])
    op = rng.choice(ops)
    sub = lambda: wff(rng, sig, depth - 1, sugar, henkin)
    if op == "neg":
        return Neg(sub())
    if op == "half":
        return Half(sub())
    if op in ("sup", "inf"):
        return (Sup if op == "sup" else Inf)(rng.randrange(NVARS), sub())
    if op == "times":
        return Times(rng.randrange(4), sub())
    cls = {"sub": Sub, "or": Or, "and": And, "iff": Iff, "plus": Plus}[op]
    return cls(sub(), sub())


def henkin_constant(rng, sig=RICH_SIG):
    k = rng.randrange(3)
    lo = DyadicNumeral.reduced(rng.randrange((1 << k) + 1), k)
    hi = DyadicNumeral.reduced(rng.randrange((1 << k) + 1), k)
    return HenkinConstant(wff(rng, sig, depth=1, sugar=False), rng.randrange(NVARS), lo, hi)


def _clamp(v):
    return min(max(v, Fraction(0)), Fraction(1))


def structure(rng: random.Random, sig=RICH_SIG) -> FiniteStructure:
    """A random valid finite structure for ``sig``.

    Either points on [0, 1] with 1-Lipschitz tables, or a discrete metric
    (all distances 1) where any tables are continuous.
    """
    n = rng.randrange(1, 4)
    U = [f"e{i}" for i in range(n)]
    discrete = rng.random() < 0.3
    pos = {a: rng.choice(QUARTERS) for a in U}
    if discrete:
        dist = {(a, b): Fraction(int(a != b)) for a, b in product(U, repeat=2)}
    else:
        dist = {(a, b): abs(pos[a] - pos[b]) for a, b in product(U, repeat=2)}
    preds = {"d": dist}
    for p in sig.predicates:
        if p.name == "d":
            continue
        if discrete:
            preds[p.name] = {k: rng.choice(QUARTERS) for k in product(U, repeat=p.arity)}
        else:
            base = rng.choice(QUARTERS)
            slopes = [rng.choice([-1, Fraction(-1, 2), 0, Fraction(1, 2), 1]) for _ in range(p.arity)]
            preds[p.name] = {k: _clamp(base + sum(s * pos[a] for s, a in zip(slopes, k)))
                             for k in product(U, repeat=p.arity)}
    funs = {}
    for f in sig.functions:
        funs[f.name] = {k: rng.choice(U) for k in product(U, repeat=f.arity)}
    consts = {c: rng.choice(U) for c in sig.constants}
    M = FiniteStructure(sig, U, preds, funs, consts)
    if validate_structure(M):
        # fall back to maps that are always 1-Lipschitz per coordinate
        for f in sig.functions:
            funs[f.name] = {k: k[0] for k in product(U, repeat=f.arity)}
        M = FiniteStructure(sig, U, preds, funs, consts)
    assert not validate_structure(M)
    return M


def assignment(rng: random.Random, M: FiniteStructure) -> Assignment:
    return Assignment(rng.choice(M.universe), {x: rng.choice(M.universe) for x in range(NVARS)})


def schema_parts(rng: random.Random, schema: str, sig=RICH_SIG) -> dict:
    """Random parameters for ``instantiate_schema`` meeting its side conditions."""
    from cfol.proof import PARTS

    parts: dict = {}
    for key in PARTS[schema]:
        if key in ("phi", "psi", "theta"):
            parts[key] = wff(rng, sig, depth=2)
        elif key in ("x", "y", "z"):
            parts[key] = rng.randrange(NVARS)
        elif key == "t":
            parts[key] = term(rng, sig, depth=1)
        elif key == "n":
            parts[key] = rng.randrange(4)
    if schema == "VII":
        free = parts["phi"].fv
        parts["x"] = next(x for x in [rng.randrange(NVARS)] + list(range(NVARS + 1)) if x not in free)
    if schema == "VI":
        from cfol.syntax import substitute

        while not substitute(parts["phi"], parts["t"], parts["x"])[1]:
            parts["t"] = term(rng, sig, depth=1)
    if schema in ("XIV", "XV"):
        pool = sig.functions if schema == "XIV" else [p for p in sig.predicates]
        sym = rng.choice(pool)
        parts["f" if schema == "XIV" else "P"] = sym.name
        pos = rng.randrange(sym.arity)
        parts["t0"] = tuple(term(rng, sig, 1) for _ in range(pos))
        parts["t1"] = tuple(term(rng, sig, 1) for _ in range(sym.arity - 1 - pos))
    return parts


def named_structure(rng: random.Random, sig=RICH_SIG) -> FiniteStructure:
    """A random valid structure in which the constants name every element."""
    while True:
        M = structure(rng, sig)
        if M.size > len(sig.constants):
            continue
        order = list(M.universe) + [rng.choice(M.universe) for _ in range(len(sig.constants) - M.size)]
        rng.shuffle(order)
        consts = dict(zip(sig.constants, order))
        M = FiniteStructure(sig, M.universe, M.predicates, M.functions, consts)
        if M.names_every_element():
            return M


def doubled(M: FiniteStructure) -> FiniteStructure:
    """M with its first element duplicated at distance 0: same theory, more elements."""
    a, twin = M.universe[0], M.universe[0] + "'"
    U = list(M.universe) + [twin]
    back = lambda e: a if e == twin else e
    preds = {p: {k: tab[tuple(map(back, k))] for k in product(U, repeat=len(next(iter(tab))))}
             for p, tab in M.predicates.items()}
    funs = {f: {k: tab[tuple(map(back, k))] for k in product(U, repeat=len(next(iter(tab))))}
            for f, tab in M.functions.items()}
    return FiniteStructure(M.sig, U, preds, funs, M.constants)
