"""Queryable presentation of the Henkin model built from a name.

Rational points are L+-terms; the distinguished points are numbered by g,
which interleaves the L+ constants (even) with the variables (odd).  A
predicate query P(t) at precision k reads only the completion stages:

* D is the set of dyadics l/2^j with j <= k+1, as reduced numerals;
* M is the least stage index >= k+2 at which all but at most one p in D
  have exactly one of p ∸ P(t), P(t) ∸ p among the first M+1 indices;
* E is the set of p whose p ∸ P(t) is among them;
* the answer is min(D \\ E), or 1 when D \\ E is empty.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .completion import CompletionEngine, PairOrder, block_pairs, cantor_pairs
from .names import NameOracle, TheoryName
from .syntax.ast import App, Atomic, Const, DyadicNumeral, Sub, Term, Var, Wff
from .syntax.coding import CanonicalEnumeration, Codec, Enumeration, PriorityEnumeration
from .syntax.sexpr import parse_term
from .syntax.shorthand import expand_shorthand
from .syntax.signature import METRIC, HenkinSignature, SignatureError
from .values import fmt

# Stage budget for the desk-scale ground-truth queries under the test enumeration.
DESK_STAGE_BUDGET = 64


class QueryTimeout(RuntimeError):
    def __init__(self, stage: int, undecided: Sequence[Fraction]):
        shown = ", ".join(fmt(p) for p in undecided)
        super().__init__(f"stage budget {stage} exhausted; undecided dyadics: {shown}")
        self.stage, self.undecided = stage, list(undecided)


class BracketError(RuntimeError):
    """max E exceeded min (D \\ E) + 2^-(k+2): the stages are inconsistent."""


# -- points -------------------------------------------------------------------------


def g_numbering(n: int, hsig: HenkinSignature) -> Term:
    """g(2i) is the L+ constant with code i, g(2i+1) is the variable x_i."""
    i, odd = divmod(n, 2)
    if odd:
        return Var(i)
    return Const(_codec(hsig).constant_of_code(i))


def g_inverse(t: Term, hsig: HenkinSignature) -> int:
    if isinstance(t, Var):
        return 2 * t.index + 1
    if isinstance(t, Const):
        return 2 * _codec(hsig).constant_code(t.symbol)
    raise ValueError(f"{t} is not a distinguished point")


def point_leaves(t: Term) -> List[Term]:
    """The distinguished points a rational point is generated from."""
    if isinstance(t, App):
        return [leaf for a in t.args for leaf in point_leaves(a)]
    return [t]


_CODECS: Dict[int, Codec] = {}


def _codec(hsig) -> Codec:
    c = _CODECS.get(id(hsig))
    if c is None or c.sig is not hsig:
        c = _CODECS[id(hsig)] = Codec(hsig)
    return c


# -- dyadics ------------------------------------------------------------------------


def dyadic_set(k: int) -> List[DyadicNumeral]:
    """D for precision k: reduced numerals l/2^j, j <= k+1, in increasing value."""
    top = k + 1
    return [DyadicNumeral.reduced(l, top) for l in range((1 << top) + 1)]


def numeral_value(p: DyadicNumeral) -> Fraction:
    return Fraction(p.numer, 1 << p.exp)


def query_wffs(atom: Wff, k: int) -> List[Wff]:
    """The wffs a query at precision k compares: D and the atom."""
    return [*dyadic_set(k), atom]


def test_enumeration(hsig: HenkinSignature, atoms: Sequence[Wff], k_max: int
                     ) -> Tuple[PriorityEnumeration, PairOrder]:
    """Enumeration with D(k_max) and the atoms first, and the matching pair order."""
    theta = PriorityEnumeration([*dyadic_set(k_max), *atoms], CanonicalEnumeration(hsig))
    return theta, block_pairs(theta.size)


# -- handle -------------------------------------------------------------------------


@dataclass(frozen=True)
class QueryResult:
    value: Fraction
    bracket: Tuple[Optional[Fraction], Optional[Fraction]]  # (max E, min D\E)
    M: int
    oracle_calls: int
    stage: int  # engine stage after the query
    undecided: Tuple[Fraction, ...] = ()

    def __str__(self):
        lo, hi = (fmt(b) if b is not None else "-" for b in self.bracket)
        return (f"{fmt(self.value)}\nbracket {lo} {hi}\nstage M {self.M}\n"
                f"oracle calls {self.oracle_calls}")


class PresentationHandle:
    """A name, its completion engine, and the Henkin signature.

    The engine is shared by all queries and only moves forward.  Every
    name read is logged in ``name_log`` as (n, k, m).
    """

    def __init__(self, name, hsig: HenkinSignature, theta: Optional[Enumeration] = None,
                 pair_order: Optional[PairOrder] = None, base: Optional[Enumeration] = None,
                 stage_budget: int = DESK_STAGE_BUDGET, name_budget: int = 1 << 16):
        if isinstance(name, TheoryName):
            name = NameOracle(name, name_budget)
        self.oracle = name
        self.hsig = hsig
        self.stage_budget = stage_budget
        self.engine = CompletionEngine(hsig, name, theta=theta, base=base,
                                       pair_order=pair_order or cantor_pairs)
        self._added_at: Dict[int, int] = {}

    @classmethod
    def for_queries(cls, name, hsig: HenkinSignature, atoms: Sequence[Wff], k_max: int, **kw):
        theta, order = test_enumeration(hsig, atoms, k_max)
        return cls(name, hsig, theta=theta, pair_order=order, **kw)

    @property
    def name_log(self) -> List[Tuple[int, int, int]]:
        return getattr(self.oracle, "log", [])

    @property
    def oracle_calls(self) -> int:
        return self.engine.oracle_calls

    def _position(self, m: int) -> Optional[int]:
        """Number of stages after which index m belongs to Phi, if it does yet."""
        idx = self.engine.state.indices
        for s in range(len(self._added_at), len(idx)):
            self._added_at.setdefault(idx[s], s + 1)
        return self._added_at.get(m)

    def _advance(self, stage: int):
        while self.engine.stage < stage:
            self.engine.step()

    def query_predicate(self, P: str, terms: Sequence[Term], k: int) -> QueryResult:
        sym = self.hsig.predicate(P)
        terms = tuple(terms)
        if len(terms) != sym.arity:
            raise SignatureError(f"{P} expects {sym.arity} arguments, got {len(terms)}")
        atom = Atomic(P, terms)
        self.hsig.check_wff(atom)
        calls0 = self.oracle_calls
        theta = self.engine.theta
        D = dyadic_set(k)
        pairs = [(theta.index(expand_shorthand(Sub(p, atom))),
                  theta.index(expand_shorthand(Sub(atom, p)))) for p in D]
        M = k + 2
        while True:
            if M + 1 > self.stage_budget:
                self._advance(self.stage_budget)
                raise QueryTimeout(self.stage_budget, self._undecided(D, pairs, self.stage_budget))
            self._advance(M + 1)
            undecided = self._undecided(D, pairs, M + 1)
            if len(undecided) <= 1:
                break
            M += 1
        E = [numeral_value(p) for p, (lo, _) in zip(D, pairs) if self._within(lo, M + 1)]
        rest = [numeral_value(p) for p, (lo, _) in zip(D, pairs) if not self._within(lo, M + 1)]
        value = min(rest) if rest else Fraction(1)
        max_e = max(E) if E else None
        min_r = min(rest) if rest else None
        if max_e is not None and min_r is not None and max_e > min_r + Fraction(1, 1 << (k + 2)):
            raise BracketError(f"max E = {fmt(max_e)} but min D\\E = {fmt(min_r)} at k={k}")
        return QueryResult(value, (max_e, min_r), M, self.oracle_calls - calls0,
                           self.engine.stage, tuple(undecided))

    def _within(self, m: int, stages: int) -> bool:
        pos = self._position(m)
        return pos is not None and pos <= stages

    def _undecided(self, D, pairs, stages: int) -> List[Fraction]:
        return [numeral_value(p) for p, (a, b) in zip(D, pairs)
                if self._within(a, stages) == self._within(b, stages)]

    def query_distance(self, t1: Term, t2: Term, k: int) -> QueryResult:
        return self.query_predicate(METRIC, (t1, t2), k)


def query_predicate(h: PresentationHandle, P: str, terms: Sequence[Term], k: int) -> QueryResult:
    return h.query_predicate(P, terms, k)


def query_distance(h: PresentationHandle, t1: Term, t2: Term, k: int) -> QueryResult:
    return h.query_distance(t1, t2, k)


def parse_points(text: str, hsig: HenkinSignature) -> List[Term]:
    """``c_a;c_b`` or ``(app f (const c_a));(var 0)``: bare names are constants."""
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        out.append(parse_term(part, hsig) if part.startswith("(") else
                   parse_term(f"(const {part})", hsig))
    return out
