"""Staged completion Phi_s(X) of a theory given by a name X.

At stage s+1 the pairs (phi, psi) of L+-wffs are scanned in a fixed order;
the first pair with phi ∸ psi not yet in Phi_s whose approximation
q >= 2^-(s+1) has its index added.  q approximates, to within 2^-(s+2), the
degree of the L-sentence obtained from (psi ∸ phi) ∸ join(Phi_s) by
replacing Henkin constants with fresh variables and sup-binding everything.

Two pairs are skipped without consulting the name: phi == psi, and
pairs whose reverse psi ∸ phi is already in Phi_s.  In both cases
(psi ∸ phi) ∸ join is identically 0, so every sound name answers below the
threshold and the scan would reject the pair anyway.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .names import NameOracle, TheoryName
from .syntax.ast import Sub, Sup, Var, Wff
from .syntax.coding import CanonicalEnumeration, Enumeration
from .syntax.ops import replace_constants, variables_in
from .syntax.shorthand import ZERO, disj, expand_shorthand
from .syntax.signature import HenkinSignature, henkin_constants_of
from .values import fmt, parse_value

PairOrder = Callable[[], Iterator[Tuple[int, int]]]

DEFAULT_PAIR_BUDGET = 1_000_000


class CompletionTimeout(RuntimeError):
    def __init__(self, stage: int, examined: int):
        super().__init__(f"stage {stage}: no acceptable pair among the first {examined} pairs")
        self.stage, self.examined = stage, examined


# -- pair orders -----------------------------------------------------------------------


def cantor_pairs() -> Iterator[Tuple[int, int]]:
    """(x, y) in Cantor diagonal order: (0,0), (1,0), (0,1), (2,0), ..."""
    for s in count():
        for y in range(s + 1):
            yield s - y, y


def block_pairs(K: int) -> PairOrder:
    """Pairs inside [0, K)^2 first (Cantor order), then the remaining Cantor pairs."""

    def order():
        for s in range(2 * K - 1):
            for y in range(max(0, s - K + 1), min(s, K - 1) + 1):
                yield s - y, y
        for x, y in cantor_pairs():
            if x >= K or y >= K:
                yield x, y

    return order


# -- joins and closure -----------------------------------------------------------------


def join_wffs(ws: Sequence[Wff]) -> Wff:
    """Left-nested disjunction; the empty join is 0."""
    if not ws:
        return ZERO
    out = expand_shorthand(ws[0])
    for w in ws[1:]:
        out = disj(out, expand_shorthand(w))
    return out


def join_indexed(indices: Iterable[int], enumeration: Enumeration) -> Wff:
    return join_wffs([enumeration.wff(n) for n in sorted(set(indices))])


def _fresh(used, n: int) -> List[int]:
    out, v = [], 0
    while len(out) < n:
        if v not in used:
            out.append(v)
        v += 1
    return out


def _bind(body: Wff, inner: Sequence[int], outer: Iterable[int]) -> Wff:
    for z in sorted(inner, reverse=True):
        body = Sup(z, body)
    for x in sorted(outer, reverse=True):
        body = Sup(x, body)
    return body


def close_to_sentence(w: Wff) -> Wff:
    """L-sentence sup_x... sup_z... w[z/c] for the Henkin constants c of w.

    The constants are taken in first-occurrence order and mapped to the
    lowest variable indices occurring nowhere in w (neither free nor bound),
    so no new occurrence is captured.  Each group is bound in increasing
    index order, lowest outermost.
    """
    w = expand_shorthand(w)
    cs = henkin_constants_of(w)
    zs = _fresh(variables_in(w), len(cs))
    body = replace_constants(w, {c: Var(z) for c, z in zip(cs, zs)})
    return _bind(body, zs, w.fv)


# -- state -----------------------------------------------------------------------------


def _digest(n) -> str:
    if isinstance(n, str):  # already a digest read back from a trace
        return n
    if n.bit_length() <= 256:
        return hex(n)
    raw = n.to_bytes((n.bit_length() + 7) // 8, "big")
    return f"sha256:{hashlib.sha256(raw).hexdigest()[:32]}/{n.bit_length()}b"


@dataclass(frozen=True)
class StageRecord:
    stage: int  # the stage produced, s+1
    pair: Tuple[int, int]  # theta indices of (phi, psi)
    added: int  # theta index of phi ∸ psi
    code: Union[int, str]  # L-code of the closed sentence queried, or its digest when read back
    q: Fraction
    examined: int  # pairs looked at during the scan
    queries: int  # name queries during the scan
    sentence: Optional[Wff] = field(default=None, compare=False)

    def line(self) -> str:
        return (f"stage {self.stage} pair {self.pair[0]} {self.pair[1]} added {self.added} "
                f"n {_digest(self.code)} q {fmt(self.q)} examined {self.examined} "
                f"queries {self.queries} verdict accept")


@dataclass
class CompletionState:
    stage: int = 0
    indices: List[int] = field(default_factory=list)  # in order of addition
    trace: List[StageRecord] = field(default_factory=list)

    def snapshot(self) -> "CompletionState":
        return CompletionState(self.stage, list(self.indices), list(self.trace))

    def prefix(self, s: int) -> List[int]:
        """Phi_s as a sorted list."""
        return sorted(self.indices[:s])

    def dumps(self) -> str:
        out = [f"completion {self.stage}"]
        out += [f"index {n}" for n in self.indices]
        out += [r.line() for r in self.trace]
        return "\n".join(out) + "\n"

    @classmethod
    def parse(cls, text: str) -> "CompletionState":
        st = cls()
        for lineno, line in enumerate(text.splitlines(), 1):
            t = line.split()
            if not t:
                continue
            try:
                if t[0] == "completion":
                    st.stage = int(t[1])
                elif t[0] == "index":
                    st.indices.append(int(t[1]))
                elif t[0] == "stage":
                    code = t[8]
                    st.trace.append(StageRecord(
                        int(t[1]), (int(t[3]), int(t[4])), int(t[6]),
                        int(code, 16) if code.startswith("0x") else code,
                        parse_value(t[10]), int(t[12]), int(t[14])))
                else:
                    raise ValueError(f"unknown record {t[0]!r}")
            except (IndexError, ValueError) as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
        if len(st.indices) != st.stage:
            raise ValueError(f"state claims stage {st.stage} but lists {len(st.indices)} indices")
        return st


# -- engine ----------------------------------------------------------------------------


class CompletionEngine:
    """Resumable driver for the stages Phi_0 ⊆ Phi_1 ⊆ ...

    ``theta`` enumerates the L+-wffs, ``base`` the L-wffs (the indices the
    name is queried on).  ``oracle`` is any degree oracle (n, k) -> rational;
    a :class:`TheoryName` is wrapped in a :class:`NameOracle`.
    """

    def __init__(self, hsig: HenkinSignature, oracle, theta: Optional[Enumeration] = None,
                 base: Optional[Enumeration] = None, pair_order: PairOrder = cantor_pairs,
                 pair_budget: int = DEFAULT_PAIR_BUDGET, state: Optional[CompletionState] = None):
        self.hsig = hsig
        self.oracle = NameOracle(oracle) if isinstance(oracle, TheoryName) else oracle
        self.theta = theta or CanonicalEnumeration(hsig)
        self.base = base or CanonicalEnumeration(hsig.base)
        self.pair_order = pair_order
        self.pair_budget = pair_budget
        self.state = state or CompletionState()
        self.oracle_calls = 0
        self._members = set(self.state.indices)
        self._wff: Dict[int, Wff] = {}
        self._sub_index: Dict[Tuple[int, int], int] = {}
        self._facts: Dict[int, Tuple[tuple, frozenset]] = {}
        self._join_for: Optional[int] = None
        self._join: Wff = ZERO
        self._join_facts: Tuple[tuple, frozenset] = ((), frozenset())
        self._replaced: Dict[tuple, Wff] = {}

    @property
    def stage(self) -> int:
        return self.state.stage

    def wff(self, n: int) -> Wff:
        w = self._wff.get(n)
        if w is None:
            w = self._wff[n] = self.theta.wff(n)
        return w

    def sub_index(self, i: int, j: int) -> int:
        key = (i, j)
        m = self._sub_index.get(key)
        if m is None:
            m = self._sub_index[key] = self.theta.index(Sub(self.wff(i), self.wff(j)))
        return m

    def __contains__(self, w: Wff) -> bool:
        return self.theta.index(w) in self._members

    def contains_index(self, m: int) -> bool:
        return m in self._members

    # facts about wffs: Henkin constants in order, and all variables used
    def _wff_facts(self, n: int) -> Tuple[tuple, frozenset]:
        f = self._facts.get(n)
        if f is None:
            w = self.wff(n)
            f = self._facts[n] = (tuple(henkin_constants_of(w)), frozenset(variables_in(w)))
        return f

    def join(self) -> Wff:
        if self._join_for != self.state.stage:
            idx = sorted(self._members)
            self._join = join_wffs([self.wff(n) for n in idx])
            cs: Dict = {}
            used: set = set()
            for n in idx:
                c, v = self._wff_facts(n)
                for x in c:
                    cs.setdefault(x, None)
                used |= v
            if not idx:
                used = set(variables_in(ZERO))
            self._join_facts = (tuple(cs), frozenset(used))
            self._join_for = self.state.stage
            self._replaced.clear()
        return self._join

    def closed_query(self, i: int, j: int) -> Wff:
        """close_to_sentence((psi ∸ phi) ∸ join) for phi = theta_i, psi = theta_j."""
        phi, psi = self.wff(i), self.wff(j)
        J = self.join()
        jc, jv = self._join_facts
        (pc, pv), (qc, qv) = self._wff_facts(i), self._wff_facts(j)
        cs = list(dict.fromkeys(qc + pc + jc))
        if not cs:
            w = Sub(Sub(psi, phi), J)
            return _bind(w, (), w.fv)
        zs = _fresh(pv | qv | jv, len(cs))
        mapping = {c: Var(z) for c, z in zip(cs, zs)}
        key = tuple(c for c in cs if c in jc)
        key = tuple((c, mapping[c]) for c in key)
        rj = self._replaced.get(key)
        if rj is None:
            rj = self._replaced[key] = replace_constants(J, dict(key))
        body = Sub(Sub(replace_constants(psi, mapping), replace_constants(phi, mapping)), rj)
        fv = psi.fv | phi.fv | J.fv
        return _bind(body, zs, fv)

    def compute_q(self, i: int, j: int) -> Tuple[Fraction, Wff, int]:
        s = self.state.stage
        sentence = self.closed_query(i, j)
        n = self.base.index(sentence)
        self.oracle_calls += 1
        return Fraction(self.oracle(n, s + 2)), sentence, n

    def step(self) -> StageRecord:
        s = self.state.stage
        threshold = Fraction(1, 1 << (s + 1))
        examined = queries = 0
        for i, j in self.pair_order():
            if examined >= self.pair_budget:
                raise CompletionTimeout(s + 1, examined)
            examined += 1
            if i == j:
                continue
            m = self.sub_index(i, j)
            if m in self._members or self.sub_index(j, i) in self._members:
                continue
            queries += 1
            q, sentence, n = self.compute_q(i, j)
            if q >= threshold:
                rec = StageRecord(s + 1, (i, j), m, n, q, examined, queries, sentence)
                self.state.indices.append(m)
                self._members.add(m)
                self.state.stage = s + 1
                self.state.trace.append(rec)
                return rec
        raise CompletionTimeout(s + 1, examined)  # only reachable for finite orders

    def run(self, stages: int) -> CompletionState:
        while self.state.stage < stages:
            self.step()
        return self.state


def completion_stage(engine: CompletionEngine) -> CompletionState:
    engine.step()
    return engine.state


def run_completion(oracle, hsig: HenkinSignature, stages: int, **kw) -> CompletionState:
    engine = CompletionEngine(hsig, oracle, **kw)
    return engine.run(stages)


def compute_q(oracle, phi: Wff, psi: Wff, phi_s: Sequence[Wff], s: int,
              base: Enumeration) -> Fraction:
    """Direct form: q for (phi, psi) against the explicit wffs of Phi_s at stage s."""
    sentence = close_to_sentence(Sub(Sub(psi, phi), join_wffs(phi_s)))
    return Fraction(oracle(base.index(sentence), s + 2))
