"""Finite continuous pre-structures and exact evaluation."""
from __future__ import annotations

from contextvars import ContextVar
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .syntax.ast import (
    App, Atomic, Const, Half, Inf, Neg, Sub, Sup, Term, Var, Wff,
)
from .syntax.shorthand import expand_shorthand
from .syntax.signature import METRIC, AnySignature, Modulus, Signature, SignatureError, Symbol
from .values import ZERO, fmt

# Who is reading a structure; the name oracles set this to "name".
reader: ContextVar[str] = ContextVar("structure_reader", default="direct")

DEBUG_SENTENCE_CHECK = False


class StructureError(ValueError):
    pass


class EvaluationError(ValueError):
    pass


class FiniteStructure:
    """A finite interpretation of a signature with exact predicate tables.

    ``predicates`` maps each predicate name (including ``d``) to a table from
    element tuples to Fractions; ``functions`` maps function names to tables
    from element tuples to elements; ``constants`` maps constant symbols
    (names or Henkin constants) to elements.
    """

    def __init__(self, sig: AnySignature, universe: Sequence[str],
                 predicates: Mapping[str, Mapping[tuple, Fraction]],
                 functions: Mapping[str, Mapping[tuple, str]] = None,
                 constants: Mapping[object, str] = None):
        self.sig = sig
        self.universe: Tuple[str, ...] = tuple(universe)
        if not self.universe:
            raise StructureError("universe must be non-empty")
        if len(set(self.universe)) != len(self.universe):
            raise StructureError("duplicate element names")
        self._ix = {a: i for i, a in enumerate(self.universe)}
        self.predicates = {p: dict(t) for p, t in predicates.items()}
        self.functions = {f: dict(t) for f, t in (functions or {}).items()}
        self.constants = dict(constants or {})
        for tab in self.predicates.values():
            for k, v in tab.items():
                tab[k] = Fraction(v)
        self._compile()
        self.reads: List[str] = []
        self.audit = False
        self._closed: Dict[Wff, Fraction] = {}

    def _compile(self):
        ix = self._ix
        try:
            self._p = {p: {tuple(ix[a] for a in k): v for k, v in tab.items()}
                       for p, tab in self.predicates.items()}
            self._f = {f: {tuple(ix[a] for a in k): ix[v] for k, v in tab.items()}
                       for f, tab in self.functions.items()}
            self._c = {c: ix[a] for c, a in self.constants.items()}
        except KeyError as exc:
            raise StructureError(f"unknown element {exc.args[0]!r}") from None

    @property
    def size(self) -> int:
        return len(self.universe)

    def element(self, i: int) -> str:
        return self.universe[i]

    def index(self, a: str) -> int:
        return self._ix[a]

    def dist(self, a: str, b: str) -> Fraction:
        return self.predicates[METRIC][(a, b)]

    def with_constants(self, extra: Mapping[object, str]) -> "FiniteStructure":
        """Expansion interpreting additional constant symbols (e.g. Henkin constants)."""
        consts = dict(self.constants)
        consts.update(extra)
        out = FiniteStructure.__new__(FiniteStructure)
        out.__dict__.update(self.__dict__)
        out.constants = consts
        out._c = {c: self._ix[a] for c, a in consts.items()}
        out._closed = {}
        out.reads = []
        return out

    def names_every_element(self) -> bool:
        named = set(self.constants[c] for c in self.sig.base.constants if c in self.constants)
        return named == set(self.universe)

    def _touch(self):
        if self.audit:
            self.reads.append(reader.get())

    def __repr__(self):
        return f"FiniteStructure({list(self.universe)})"

    # -- file format ----------------------------------------------------------

    @classmethod
    def parse(cls, text: str, sig: Optional[Signature] = None) -> "FiniteStructure":
        decls, body = [], []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            (decls if line.split()[0] in ("pred", "fun", "const") else body).append((lineno, line))
        if decls:
            declared = Signature.parse("\n".join(l for _, l in decls))
            if sig is not None and declared.dumps() != sig.dumps():
                raise StructureError("structure file declarations disagree with the signature")
            sig = declared
        if sig is None:
            sig = Signature()
        universe: List[str] = []
        dist: Dict[tuple, Fraction] = {}
        preds: Dict[str, Dict[tuple, Fraction]] = {p.name: {} for p in sig.predicates}
        funs: Dict[str, Dict[tuple, str]] = {f.name: {} for f in sig.functions}
        consts: Dict[str, str] = {}
        for lineno, line in body:
            toks = line.split()
            kw = toks[0]
            try:
                if kw == "elem" and len(toks) == 2:
                    universe.append(toks[1])
                elif kw == "dist" and len(toks) == 4:
                    dist[(toks[1], toks[2])] = Fraction(toks[3])
                elif kw == "predval":
                    p = sig.predicate(toks[1])
                    if len(toks) != p.arity + 3:
                        raise StructureError(f"{p.name} takes {p.arity} elements")
                    if p.name == METRIC:
                        dist[tuple(toks[2:-1])] = Fraction(toks[-1])
                    else:
                        preds[p.name][tuple(toks[2:-1])] = Fraction(toks[-1])
                elif kw == "funval":
                    f = sig.function(toks[1])
                    if len(toks) != f.arity + 3:
                        raise StructureError(f"{f.name} takes {f.arity} elements")
                    funs[f.name][tuple(toks[2:-1])] = toks[-1]
                elif kw == "constval" and len(toks) == 3:
                    if not sig.has_constant(toks[1]):
                        raise StructureError(f"unknown constant {toks[1]!r}")
                    consts[toks[1]] = toks[2]
                else:
                    raise StructureError(f"unrecognised line {line!r}")
            except (SignatureError, ValueError, ZeroDivisionError) as exc:
                raise StructureError(f"line {lineno}: {exc}") from None
        elems = set(universe)
        for k in list(dist):
            if not set(k) <= elems:
                raise StructureError(f"dist mentions unknown element in {k}")
            dist.setdefault((k[1], k[0]), dist[k])
        for a in universe:
            dist.setdefault((a, a), ZERO)
        missing = [k for k in product(universe, repeat=2) if k not in dist]
        if missing:
            raise StructureError(f"missing distance for {missing[0]}")
        preds[METRIC] = dist
        for p in sig.predicates:
            for k in product(universe, repeat=p.arity):
                if k not in preds[p.name]:
                    raise StructureError(f"missing value for {p.name}{k}")
        for f in sig.functions:
            for k in product(universe, repeat=f.arity):
                if k not in funs[f.name]:
                    raise StructureError(f"missing value for {f.name}{k}")
        for c in sig.constants:
            if c not in consts:
                raise StructureError(f"missing interpretation for constant {c}")
        return cls(sig, universe, preds, funs, consts)

    def dumps(self) -> str:
        out = [self.sig.base.dumps().rstrip("\n")]
        out += [f"elem {a}" for a in self.universe]
        d = self.predicates[METRIC]
        for i, a in enumerate(self.universe):
            for b in self.universe[i:]:
                out.append(f"dist {a} {b} {fmt(d[(a, b)])}")
                if d[(b, a)] != d[(a, b)]:
                    out.append(f"dist {b} {a} {fmt(d[(b, a)])}")
        for p in self.sig.predicates:
            if p.name == METRIC:
                continue
            for k in product(self.universe, repeat=p.arity):
                out.append(f"predval {p.name} {' '.join(k)} {fmt(self.predicates[p.name][k])}")
        for f in self.sig.functions:
            for k in product(self.universe, repeat=f.arity):
                out.append(f"funval {f.name} {' '.join(k)} {self.functions[f.name][k]}")
        for c in self.sig.base.constants:
            out.append(f"constval {c} {self.constants[c]}")
        return "\n".join(out) + "\n"


class Assignment:
    """Map from variable indices to elements, defaulting to one element."""

    __slots__ = ("default", "_map")

    def __init__(self, default: str, mapping: Mapping[int, str] = None):
        self.default = default
        self._map = dict(mapping or {})

    def __call__(self, x: int) -> str:
        return self._map.get(x, self.default)

    def update(self, x: int, a: str) -> "Assignment":
        m = dict(self._map)
        m[x] = a
        return Assignment(self.default, m)

    def restrict(self, xs: Iterable[int]) -> Tuple[str, ...]:
        return tuple(self(x) for x in sorted(xs))

    def __repr__(self):
        return f"Assignment({self.default!r}, {self._map})"


# -- evaluation ------------------------------------------------------------------


class _Evaluator:
    def __init__(self, M: FiniteStructure):
        self.M = M
        self.closed = M._closed
        self.memo: Dict[tuple, Fraction] = {}
        self.n = M.size

    def term(self, t: Term, env: Dict[int, int], default: int) -> int:
        if isinstance(t, Var):
            return env.get(t.index, default)
        if isinstance(t, Const):
            try:
                return self.M._c[t.symbol]
            except KeyError:
                raise EvaluationError(f"constant {t.symbol!s} is not interpreted") from None
        if isinstance(t, App):
            args = tuple(self.term(a, env, default) for a in t.args)
            return self.M._f[t.fn][args]
        raise TypeError(f"not a term: {t!r}")

    def wff(self, w: Wff, env: Dict[int, int], default: int) -> Fraction:
        if not w.fv:
            v = self.closed.get(w)
            if v is None:
                v = self._wff(w, env, default)
                if len(self.closed) > 500_000:
                    self.closed.clear()
                self.closed[w] = v
            return v
        if isinstance(w, Atomic):
            return self._wff(w, env, default)
        key = (w, tuple(env.get(x, default) for x in sorted(w.fv)))
        v = self.memo.get(key)
        if v is None:
            v = self.memo[key] = self._wff(w, env, default)
        return v

    def _wff(self, w: Wff, env, default) -> Fraction:
        if isinstance(w, Atomic):
            try:
                tab = self.M._p[w.pred]
            except KeyError:
                raise EvaluationError(f"predicate {w.pred} is not interpreted") from None
            return tab[tuple(self.term(a, env, default) for a in w.args)]
        if isinstance(w, Neg):
            return 1 - self.wff(w.body, env, default)
        if isinstance(w, Half):
            return self.wff(w.body, env, default) / 2
        if isinstance(w, Sub):
            a = self.wff(w.left, env, default)
            if a == 0:
                return ZERO
            b = self.wff(w.right, env, default)
            return a - b if a > b else ZERO
        if isinstance(w, (Sup, Inf)):
            x = w.var
            if x not in w.body.fv:
                return self.wff(w.body, env, default)
            saved = env.get(x)
            best = None
            try:
                for a in range(self.n):
                    env[x] = a
                    v = self.wff(w.body, env, default)
                    if best is None or (v > best if isinstance(w, Sup) else v < best):
                        best = v
                        if isinstance(w, Sup) and best == 1 or isinstance(w, Inf) and best == 0:
                            break
            finally:
                if saved is None:
                    env.pop(x, None)
                else:
                    env[x] = saved
            return best
        raise TypeError(f"not a core wff: {w!r}")


def _env(M: FiniteStructure, sigma: Optional[Assignment]) -> Tuple[Dict[int, int], int]:
    if sigma is None:
        return {}, 0
    return {x: M.index(a) for x, a in sigma._map.items()}, M.index(sigma.default)


def eval_term(M: FiniteStructure, sigma: Optional[Assignment], t: Term) -> str:
    M._touch()
    env, default = _env(M, sigma)
    return M.element(_Evaluator(M).term(t, env, default))


def eval_wff(M: FiniteStructure, sigma: Optional[Assignment], w: Wff) -> Fraction:
    """Exact value of ``w`` (shorthand is expanded first) under ``sigma``."""
    M._touch()
    env, default = _env(M, sigma)
    return _Evaluator(M).wff(expand_shorthand(w), env, default)


def satisfies(M: FiniteStructure, sigma: Optional[Assignment], w: Wff) -> bool:
    return eval_wff(M, sigma, w) == 0


def sentence_value(M: FiniteStructure, s: Wff) -> Fraction:
    if s.fv:
        raise EvaluationError(f"not a sentence: free variables {sorted(s.fv)}")
    v = eval_wff(M, None, s)
    if DEBUG_SENTENCE_CHECK and M.size > 1:
        assert eval_wff(M, Assignment(M.universe[-1]), s) == v
    return v


def assignments(M: FiniteStructure, xs: Iterable[int]):
    xs = sorted(xs)
    for combo in product(M.universe, repeat=len(xs)):
        yield Assignment(M.universe[0], dict(zip(xs, combo)))


def max_over_assignments(M: FiniteStructure, w: Wff) -> Fraction:
    """max of w over all assignments to its free variables (brute force)."""
    return max(eval_wff(M, s, w) for s in assignments(M, w.fv))


# -- validation ------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    symbol: str
    witness: tuple
    detail: str = ""

    def __str__(self):
        w = " ".join(map(str, self.witness))
        return f"{self.kind} {self.symbol} {w}: {self.detail}".rstrip(": ")


def _pow2_neg(n: int) -> Fraction:
    return Fraction(1, 1 << n)


def validate_structure(M: FiniteStructure, sig: Optional[AnySignature] = None) -> List[Violation]:
    """Every violated pseudometric axiom or modulus instance, with a witness.

    Moduli are checked one argument position at a time.  With dmin the least
    positive distance and v the least integer with 2^-v <= dmin, only
    n < n0 = modulus.eventually_at_least(v) can have hypotheses with a
    positive distance; beyond n0 the condition reduces to "distance 0
    implies equal outputs", which is checked separately.
    """
    sig = sig or M.sig
    U = M.universe
    out: List[Violation] = []
    d = M.predicates.get(METRIC)
    if d is None:
        return [Violation("missing", METRIC, (), "no distance table")]
    for p in sig.predicates:
        tab = M.predicates.get(p.name, {})
        for k in product(U, repeat=p.arity):
            if k not in tab:
                out.append(Violation("missing", p.name, k))
    for f in sig.functions:
        tab = M.functions.get(f.name, {})
        for k in product(U, repeat=f.arity):
            if k not in tab:
                out.append(Violation("missing", f.name, k))
            elif tab[k] not in M._ix:
                out.append(Violation("range", f.name, k, f"unknown element {tab[k]}"))
    for c in sig.base.constants:
        if c not in M.constants:
            out.append(Violation("missing", c, ()))
    if out:
        return out
    for a, b in product(U, repeat=2):
        v = d[(a, b)]
        if not 0 <= v <= 1:
            out.append(Violation("diameter", METRIC, (a, b), f"distance {fmt(v)} outside [0,1]"))
        if a == b and v != 0:
            out.append(Violation("reflexivity", METRIC, (a, a), f"d(a,a) = {fmt(v)}"))
        if d[(b, a)] != v and U.index(a) < U.index(b):
            out.append(Violation("symmetry", METRIC, (a, b), f"{fmt(v)} != {fmt(d[(b, a)])}"))
    for a, b, c in product(U, repeat=3):
        if d[(a, c)] > d[(a, b)] + d[(b, c)]:
            out.append(Violation("triangle", METRIC, (a, b, c),
                                 f"d(a,c)={fmt(d[(a, c)])} > {fmt(d[(a, b)] + d[(b, c)])}"))
    for p in sig.predicates:
        if p.name == METRIC:
            continue
        for k, v in M.predicates[p.name].items():
            if not 0 <= v <= 1:
                out.append(Violation("range", p.name, k, f"value {fmt(v)} outside [0,1]"))
    positive = [v for v in d.values() if v > 0]
    for p in sig.predicates:
        tab = M.predicates[p.name]
        out += _check_modulus(p, U, d, positive,
                              lambda x, y, tab=tab: abs(tab[x] - tab[y]))
    for f in sig.functions:
        tab = M.functions[f.name]
        out += _check_modulus(f, U, d, positive,
                              lambda x, y, tab=tab: d[(tab[x], tab[y])])
    return out


def _check_modulus(sym: Symbol, U, d, positive, gap: Callable) -> List[Violation]:
    out = []
    mod: Modulus = sym.modulus
    if positive:
        dmin = min(positive)
        v = 0
        while _pow2_neg(v) > dmin:
            v += 1
        n0 = mod.eventually_at_least(v)
    else:
        n0 = 0
    for pos in range(sym.arity):
        for rest in product(U, repeat=sym.arity - 1):
            for a, b in product(U, repeat=2):
                if a == b:
                    continue
                x = rest[:pos] + (a,) + rest[pos:]
                y = rest[:pos] + (b,) + rest[pos:]
                dist, g = d[(a, b)], gap(x, y)
                if dist == 0:
                    if g != 0:
                        out.append(Violation("modulus", sym.name, (x, y),
                                             f"distance 0 but outputs differ by {fmt(g)}"))
                    continue
                for n in range(n0):
                    if dist < _pow2_neg(mod(n)) and g > _pow2_neg(n):
                        out.append(Violation("modulus", sym.name, (x, y),
                                             f"n={n}: d={fmt(dist)} < 2^-{mod(n)} but gap {fmt(g)} > 2^-{n}"))
                        break
    return out
