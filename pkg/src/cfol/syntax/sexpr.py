"""Concrete s-expression syntax.

    term  := (var N) | (const NAME) | (app NAME term...) | (henkin N wff num num)
    wff   := (pred NAME term...) | (neg wff) | (half wff) | (sub wff wff)
           | (sup N wff) | (inf N wff)
    sugar := (or wff wff) | (and wff wff) | (iff wff wff) | (plus wff wff)
           | (times M wff) | (num L K)

``(henkin N W P Q)`` names the witness constant for (W, x_N, P, Q); it is
only accepted against a Henkin signature.  Printing emits single spaces and
no line breaks; that is the normal form.
"""
from __future__ import annotations

from typing import List, Tuple, Union

from .ast import (
    And, App, Atomic, Const, DyadicNumeral, Half, HenkinConstant, Iff, Inf, Neg, Or, Plus,
    Sub, Sup, Term, Times, Var, Wff,
)
from .signature import HenkinSignature


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.message = message


Token = Tuple[str, int, int]  # (text, line, col)


def tokenize(text: str) -> List[Token]:
    toks: List[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c in "()":
            toks.append((c, line, col))
            i += 1
            col += 1
            continue
        start, scol = i, col
        while i < n and text[i] not in " \t\r\n();":
            if not text[i].isprintable():
                raise ParseError(f"illegal character {text[i]!r}", line, col)
            i += 1
            col += 1
        toks.append((text[start:i], line, scol))
    return toks


# nested lists of tokens
Tree = Union[Token, list]


def _read(tokens: List[Token]) -> List[Tree]:
    stack: List[Tuple[list, Token]] = []
    top: List[Tree] = []
    for tok in tokens:
        if tok[0] == "(":
            stack.append((top, tok))
            top = [tok]
        elif tok[0] == ")":
            if not stack:
                raise ParseError("unbalanced parenthesis: unexpected ')'", tok[1], tok[2])
            parent, _ = stack.pop()
            parent.append(top)
            top = parent
        else:
            top.append(tok)
    if stack:
        _, opener = stack[-1]
        raise ParseError("unbalanced parenthesis: unclosed '('", opener[1], opener[2])
    return top


def _pos(tree: Tree) -> Tuple[int, int]:
    tok = tree[0] if isinstance(tree, list) else tree
    if isinstance(tok, list):
        return _pos(tok)
    return tok[1], tok[2]


def _head(tree: Tree) -> Tuple[str, list]:
    if not isinstance(tree, list):
        raise ParseError(f"expected a parenthesised form, got {tree[0]!r}", tree[1], tree[2])
    if len(tree) < 2 or isinstance(tree[1], list):
        raise ParseError("expected an operator name after '('", *_pos(tree))
    return tree[1][0], tree[2:]


def _nat(tree: Tree) -> int:
    if isinstance(tree, list) or not tree[0].isdigit():
        raise ParseError("expected a natural number", *_pos(tree))
    return int(tree[0])


def _name(tree: Tree) -> str:
    if isinstance(tree, list):
        raise ParseError("expected a symbol name", *_pos(tree))
    return tree[0]


def _arity(args: list, n: int, op: str, tree: Tree):
    if len(args) != n:
        raise ParseError(f"{op} takes {n} operand(s), got {len(args)}", *_pos(tree))


class _Parser:
    def __init__(self, sig):
        self.sig = sig

    def term(self, tree: Tree) -> Term:
        op, args = _head(tree)
        if op == "var":
            _arity(args, 1, op, tree)
            return Var(_nat(args[0]))
        if op == "const":
            _arity(args, 1, op, tree)
            name = _name(args[0])
            if self.sig is not None and not self.sig.has_constant(name):
                raise ParseError(f"unknown constant {name!r}", *_pos(args[0]))
            return Const(name)
        if op == "app":
            if not args:
                raise ParseError("app needs a function name", *_pos(tree))
            name = _name(args[0])
            terms = tuple(self.term(a) for a in args[1:])
            if self.sig is not None:
                if not self.sig.has_function(name):
                    raise ParseError(f"unknown function {name!r}", *_pos(args[0]))
                ar = self.sig.function(name).arity
                if ar != len(terms):
                    raise ParseError(f"arity mismatch: {name} expects {ar} arguments, got {len(terms)}",
                                     *_pos(tree))
            elif not terms:
                raise ParseError("app needs at least one argument", *_pos(tree))
            return App(name, terms)
        if op == "henkin":
            _arity(args, 4, op, tree)
            if self.sig is not None and not isinstance(self.sig, HenkinSignature):
                raise ParseError("Henkin constants need the Henkin signature", *_pos(tree))
            lower, upper = self.wff(args[2]), self.wff(args[3])
            if not isinstance(lower, DyadicNumeral) or not isinstance(upper, DyadicNumeral):
                raise ParseError("henkin bounds must be (num L K) numerals", *_pos(tree))
            from .shorthand import expand_shorthand

            return Const(HenkinConstant(expand_shorthand(self.wff(args[1])), _nat(args[0]), lower, upper))
        raise ParseError(f"unknown term form {op!r}", *_pos(tree))

    def wff(self, tree: Tree) -> Wff:
        op, args = _head(tree)
        if op == "pred":
            if not args:
                raise ParseError("pred needs a predicate name", *_pos(tree))
            name = _name(args[0])
            terms = tuple(self.term(a) for a in args[1:])
            if self.sig is not None:
                if not self.sig.has_predicate(name):
                    raise ParseError(f"unknown predicate {name!r}", *_pos(args[0]))
                ar = self.sig.predicate(name).arity
                if ar != len(terms):
                    raise ParseError(f"arity mismatch: {name} expects {ar} arguments, got {len(terms)}",
                                     *_pos(tree))
            elif not terms:
                raise ParseError("pred needs at least one argument", *_pos(tree))
            return Atomic(name, terms)
        if op in ("neg", "half"):
            _arity(args, 1, op, tree)
            return (Neg if op == "neg" else Half)(self.wff(args[0]))
        if op in ("sub", "or", "and", "iff", "plus"):
            _arity(args, 2, op, tree)
            cls = {"sub": Sub, "or": Or, "and": And, "iff": Iff, "plus": Plus}[op]
            return cls(self.wff(args[0]), self.wff(args[1]))
        if op in ("sup", "inf"):
            _arity(args, 2, op, tree)
            return (Sup if op == "sup" else Inf)(_nat(args[0]), self.wff(args[1]))
        if op == "times":
            _arity(args, 2, op, tree)
            return Times(_nat(args[0]), self.wff(args[1]))
        if op == "num":
            _arity(args, 2, op, tree)
            try:
                return DyadicNumeral(_nat(args[0]), _nat(args[1]))
            except ValueError as exc:
                if isinstance(exc, ParseError):
                    raise
                raise ParseError(str(exc), *_pos(tree)) from None
        raise ParseError(f"unknown wff form {op!r}", *_pos(tree))


def _single(text: str) -> Tree:
    trees = _read(tokenize(text))
    if not trees:
        raise ParseError("empty input", 1, 1)
    if len(trees) > 1:
        raise ParseError("trailing input after expression", *_pos(trees[1]))
    return trees[0]


def parse_wff(text: str, sig=None) -> Wff:
    """Parse one wff; with ``sig`` symbols and arities are checked."""
    return _Parser(sig).wff(_single(text))


def parse_term(text: str, sig=None) -> Term:
    return _Parser(sig).term(_single(text))


def parse_many(text: str, sig=None) -> List[Wff]:
    p = _Parser(sig)
    return [p.wff(t) for t in _read(tokenize(text))]


# -- printing ------------------------------------------------------------------


def to_sexpr(obj) -> str:
    out: List[str] = []
    _emit(obj, out)
    return "".join(out)


def _emit(o, out: List[str]) -> None:
    if isinstance(o, Var):
        out.append(f"(var {o.index})")
    elif isinstance(o, Const):
        s = o.symbol
        if isinstance(s, HenkinConstant):
            _emit(s, out)
        else:
            out.append(f"(const {s})")
    elif isinstance(o, HenkinConstant):
        out.append(f"(henkin {o.var} ")
        _emit(o.formula, out)
        out.append(" ")
        _emit(o.lower, out)
        out.append(" ")
        _emit(o.upper, out)
        out.append(")")
    elif isinstance(o, (App, Atomic)):
        head = "app" if isinstance(o, App) else "pred"
        out.append(f"({head} {o.fn if isinstance(o, App) else o.pred}")
        for a in o.args:
            out.append(" ")
            _emit(a, out)
        out.append(")")
    elif isinstance(o, (Neg, Half)):
        out.append("(neg " if isinstance(o, Neg) else "(half ")
        _emit(o.body, out)
        out.append(")")
    elif isinstance(o, (Sub, Or, And, Iff, Plus)):
        out.append(f"({type(o).__name__.lower()} ")
        _emit(o.left, out)
        out.append(" ")
        _emit(o.right, out)
        out.append(")")
    elif isinstance(o, (Sup, Inf)):
        out.append(f"({type(o).__name__.lower()} {o.var} ")
        _emit(o.body, out)
        out.append(")")
    elif isinstance(o, Times):
        out.append(f"(times {o.m} ")
        _emit(o.body, out)
        out.append(")")
    elif isinstance(o, DyadicNumeral):
        out.append(f"(num {o.numer} {o.exp})")
    elif hasattr(o, "sexpr"):
        out.append(o.sexpr())
    else:
        raise TypeError(f"cannot print {type(o).__name__}")
