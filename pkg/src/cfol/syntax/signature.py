"""Signatures, moduli of continuity and the Henkin extension."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .ast import (
    App, Atomic, Const, DyadicNumeral, HenkinConstant, Inf, Neg, Half, Sub, Sup,
    Term, Var, Wff, Or, And, Iff, Plus, Times,
)

METRIC = "d"


class SignatureError(ValueError):
    pass


@dataclass(frozen=True)
class Modulus:
    """A total map N -> N given as ``id``, ``shift J`` or a finite table with a tail rule.

    The tail of a table is applied to ``n`` itself, not to ``n - len(table)``.
    """

    kind: str = "id"
    shift: int = 0
    table: Tuple[int, ...] = ()
    tail: Optional["Modulus"] = None

    def __post_init__(self):
        if self.kind not in ("id", "shift", "table"):
            raise SignatureError(f"unknown modulus kind {self.kind!r}")
        if self.kind == "table" and (self.tail is None or self.tail.kind == "table"):
            raise SignatureError("table modulus needs an id or shift tail rule")
        if any(v < 0 for v in self.table) or self.shift < 0:
            raise SignatureError("modulus values must be natural numbers")

    def __call__(self, n: int) -> int:
        if self.kind == "id":
            return n
        if self.kind == "shift":
            return n + self.shift
        if n < len(self.table):
            return self.table[n]
        return self.tail(n)

    def eventually_at_least(self, v: int) -> int:
        """Least n0 such that self(n) >= v for every n >= n0."""
        if self.kind == "id":
            return max(v, 0)
        if self.kind == "shift":
            return max(v - self.shift, 0)
        n0 = max(self.tail.eventually_at_least(v), len(self.table))
        while n0 > 0 and n0 - 1 < len(self.table) and self.table[n0 - 1] >= v:
            n0 -= 1
        return n0

    def __str__(self):
        if self.kind == "id":
            return "id"
        if self.kind == "shift":
            return f"shift {self.shift}"
        return "table " + ",".join(map(str, self.table)) + " tail " + str(self.tail)

    @classmethod
    def parse(cls, tokens: Sequence[str]) -> "Modulus":
        toks = list(tokens)
        if toks == ["id"]:
            return cls()
        if len(toks) == 2 and toks[0] == "shift":
            return cls("shift", shift=int(toks[1]))
        if len(toks) >= 4 and toks[0] == "table" and toks[2] == "tail":
            values = tuple(int(v) for v in toks[1].split(",") if v)
            return cls("table", table=values, tail=cls.parse(toks[3:]))
        raise SignatureError(f"cannot parse modulus {' '.join(toks)!r}")


IDENTITY = Modulus()


@dataclass(frozen=True)
class Symbol:
    name: str
    arity: int
    modulus: Modulus = IDENTITY


_LOGICAL = {"(", ")", "var", "const", "app", "pred", "neg", "half", "sub", "sup",
            "inf", "or", "and", "iff", "plus", "times", "num", "henkin"}


class Signature:
    """Predicate, function and constant symbols of a base signature L.

    Codes: predicates first (``d`` is always code 0), then functions, then
    constants, each in declaration order.
    """

    def __init__(self, predicates: Iterable[Symbol] = (), functions: Iterable[Symbol] = (),
                 constants: Iterable[str] = ()):
        preds = list(predicates)
        metric = [p for p in preds if p.name == METRIC]
        if metric:
            if metric[0].arity != 2 or metric[0].modulus != IDENTITY:
                raise SignatureError("d must be binary with the identity modulus")
            preds.remove(metric[0])
        self.predicates: Tuple[Symbol, ...] = (Symbol(METRIC, 2, IDENTITY),) + tuple(preds)
        self.functions: Tuple[Symbol, ...] = tuple(functions)
        self.constants: Tuple[str, ...] = tuple(constants)
        names = [s.name for s in self.predicates + self.functions] + list(self.constants)
        if len(set(names)) != len(names):
            raise SignatureError("symbol names must be distinct across kinds")
        for n in names:
            if n in _LOGICAL or not n or any(c in n for c in "() \t\n;"):
                raise SignatureError(f"illegal symbol name {n!r}")
        for s in self.predicates + self.functions:
            if s.arity < 1:
                raise SignatureError(f"{s.name}: arity must be at least 1")
        self._pred = {s.name: s for s in self.predicates}
        self._func = {s.name: s for s in self.functions}
        self._const = {c: i for i, c in enumerate(self.constants)}

    @property
    def base(self) -> "Signature":
        return self

    def predicate(self, name: str) -> Symbol:
        try:
            return self._pred[name]
        except KeyError:
            raise SignatureError(f"unknown predicate {name!r}") from None

    def function(self, name: str) -> Symbol:
        try:
            return self._func[name]
        except KeyError:
            raise SignatureError(f"unknown function {name!r}") from None

    def has_predicate(self, name: str) -> bool:
        return name in self._pred

    def has_function(self, name: str) -> bool:
        return name in self._func

    def has_constant(self, symbol) -> bool:
        return isinstance(symbol, str) and symbol in self._const

    def constant_index(self, name: str) -> int:
        return self._const[name]

    # effective numbering of the symbol set
    def symbol_count(self) -> int:
        return len(self.predicates) + len(self.functions) + len(self.constants)

    def symbol_code(self, name: str) -> int:
        if name in self._pred:
            return self.predicates.index(self._pred[name])
        if name in self._func:
            return len(self.predicates) + self.functions.index(self._func[name])
        if name in self._const:
            return len(self.predicates) + len(self.functions) + self._const[name]
        raise SignatureError(f"unknown symbol {name!r}")

    def decode_symbol(self, code: int) -> Tuple[str, str, Optional[int], Optional[Modulus]]:
        """Return (kind, name, arity, modulus) for a symbol code."""
        p, f = len(self.predicates), len(self.functions)
        if 0 <= code < p:
            s = self.predicates[code]
            return ("pred", s.name, s.arity, s.modulus)
        if p <= code < p + f:
            s = self.functions[code - p]
            return ("fun", s.name, s.arity, s.modulus)
        if p + f <= code < self.symbol_count():
            return ("const", self.constants[code - p - f], None, None)
        raise SignatureError(f"no symbol with code {code}")

    # well-formedness
    def check_term(self, t: Term) -> None:
        if isinstance(t, Var):
            if t.index < 0:
                raise SignatureError("negative variable index")
        elif isinstance(t, Const):
            if not self.has_constant(t.symbol):
                raise SignatureError(f"unknown constant {t.symbol!s}")
        elif isinstance(t, App):
            sym = self.function(t.fn)
            if len(t.args) != sym.arity:
                raise SignatureError(f"{t.fn} expects {sym.arity} arguments, got {len(t.args)}")
            for a in t.args:
                self.check_term(a)
        else:
            raise SignatureError(f"not a term: {t!r}")

    def check_wff(self, w: Wff) -> None:
        stack = [w]
        while stack:
            w = stack.pop()
            if isinstance(w, Atomic):
                sym = self.predicate(w.pred)
                if len(w.args) != sym.arity:
                    raise SignatureError(f"{w.pred} expects {sym.arity} arguments, got {len(w.args)}")
                for a in w.args:
                    self.check_term(a)
            elif isinstance(w, (Neg, Half)):
                stack.append(w.body)
            elif isinstance(w, (Sub, Or, And, Iff, Plus)):
                stack.extend((w.left, w.right))
            elif isinstance(w, (Sup, Inf, Times)):
                stack.append(w.body)
            elif isinstance(w, DyadicNumeral):
                pass
            else:
                raise SignatureError(f"not a wff: {w!r}")

    def __repr__(self):
        return (f"Signature(preds={[s.name for s in self.predicates]}, "
                f"funs={[s.name for s in self.functions]}, consts={list(self.constants)})")

    # file format
    @classmethod
    def parse(cls, text: str) -> "Signature":
        preds, funs, consts = [], [], []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            toks = line.split()
            try:
                if toks[0] in ("pred", "fun"):
                    sym = Symbol(toks[1], int(toks[2]), Modulus.parse(toks[3:]))
                    (preds if toks[0] == "pred" else funs).append(sym)
                elif toks[0] == "const" and len(toks) == 2:
                    consts.append(toks[1])
                else:
                    raise SignatureError(f"unrecognised declaration {line!r}")
            except (IndexError, ValueError) as exc:
                raise SignatureError(f"line {lineno}: {exc}") from None
        return cls(preds, funs, consts)

    def dumps(self) -> str:
        out = []
        for s in self.predicates:
            out.append(f"pred {s.name} {s.arity} {s.modulus}")
        for s in self.functions:
            out.append(f"fun {s.name} {s.arity} {s.modulus}")
        out.extend(f"const {c}" for c in self.constants)
        return "\n".join(out) + "\n"


class HenkinSignature:
    """The stratified Henkin extension L+ of a base signature.

    Layer 0 holds the base constants; a witness constant for (phi, x, p, q)
    sits one layer above the highest-layer constant occurring in phi.
    """

    def __init__(self, base: Signature):
        self.base = base
        self.predicates = base.predicates
        self.functions = base.functions
        self.constants = base.constants

    def predicate(self, name):
        return self.base.predicate(name)

    def function(self, name):
        return self.base.function(name)

    def has_predicate(self, name):
        return self.base.has_predicate(name)

    def has_function(self, name):
        return self.base.has_function(name)

    def has_constant(self, symbol) -> bool:
        if isinstance(symbol, HenkinConstant):
            return self._well_formed(symbol)
        return self.base.has_constant(symbol)

    def _well_formed(self, c: HenkinConstant) -> bool:
        try:
            self.check_wff(c.formula)
        except SignatureError:
            return False
        return c.var >= 0

    def henkin_constant(self, formula: Wff, var: int, lower: DyadicNumeral,
                        upper: DyadicNumeral) -> HenkinConstant:
        from .shorthand import expand_shorthand

        core = expand_shorthand(formula)
        self.check_wff(core)
        return HenkinConstant(core, var, lower, upper)

    def layer(self, obj) -> int:
        """Layer of a constant symbol, term or wff (max over its constants)."""
        if isinstance(obj, str):
            return 0
        if isinstance(obj, HenkinConstant):
            return 1 + self.layer(obj.formula)
        return max((self.layer(c) for c in constants_of(obj)), default=0)

    check_term = Signature.check_term
    check_wff = Signature.check_wff

    def __repr__(self):
        return f"HenkinSignature({self.base!r})"


AnySignature = Union[Signature, HenkinSignature]


def constants_of(obj) -> List:
    """Constant symbols of a term or wff in first-occurrence (left-to-right) order."""
    seen: Dict = {}

    def walk_term(t):
        if isinstance(t, Const):
            seen.setdefault(t.symbol, None)
        elif isinstance(t, App):
            for a in t.args:
                walk_term(a)

    def walk(w):
        if isinstance(w, Term):
            walk_term(w)
        elif isinstance(w, Atomic):
            for a in w.args:
                walk_term(a)
        elif isinstance(w, (Neg, Half, Sup, Inf, Times)):
            walk(w.body)
        elif isinstance(w, (Sub, Or, And, Iff, Plus)):
            walk(w.left)
            walk(w.right)

    walk(obj)
    return list(seen)


def henkin_constants_of(obj) -> List[HenkinConstant]:
    return [c for c in constants_of(obj) if isinstance(c, HenkinConstant)]


def closed_atoms(sig: AnySignature) -> Iterator[Atomic]:
    """All atoms P(c1..cn) over base constants, in signature order."""
    from itertools import product

    consts = [Const(c) for c in sig.constants]
    for p in sig.predicates:
        for args in product(consts, repeat=p.arity):
            yield Atomic(p.name, args)
