from fractions import Fraction

import pytest

from cfol.completion import (
    CompletionEngine, CompletionState, CompletionTimeout, block_pairs, cantor_pairs,
    close_to_sentence, compute_q, join_indexed, join_wffs, run_completion,
)
from cfol.names import FiniteModelOracle, NameOracle, model_name
from cfol.presentation import test_enumeration as make_test_enumeration
from cfol.semantics import sentence_value
from cfol.syntax import (
    ONE, ZERO, Atomic, CanonicalEnumeration, Const, DyadicNumeral, Or, Sub, Sup, Var,
    closed_atoms, expand_shorthand, henkin_constants_of,
)

x0, x1 = Var(0), Var(1)


@pytest.fixture
def engine_factory(M2, hsig2):
    def make(**kw):
        theta, order = make_test_enumeration(hsig2, list(closed_atoms(M2.sig)), 1)
        kw.setdefault("theta", theta)
        kw.setdefault("pair_order", order)
        return CompletionEngine(hsig2, NameOracle(model_name(M2)), **kw)
    return make


def test_pair_orders():
    it = cantor_pairs()
    assert [next(it) for _ in range(6)] == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    order = block_pairs(2)
    first = [p for _, p in zip(range(8), order())]
    assert sorted(first[:4]) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert all(max(p) >= 2 for p in first[4:])
    seen = [p for _, p in zip(range(200), block_pairs(5)())]
    assert len(set(seen)) == 200


def test_join_conventions(hsig2):
    enum = CanonicalEnumeration(hsig2)
    assert join_wffs([]) == ZERO
    a, b = Atomic("Q", (x0,)), Atomic("Q", (Const("c_a"),))
    assert join_wffs([a]) == a
    na, nb = enum.index(a), enum.index(b)
    lo, hi = sorted([(na, a), (nb, b)])
    assert join_indexed([nb, na], enum) == expand_shorthand(Or(lo[1], hi[1]))


def test_close_to_sentence_examples(hsig2):
    s = Sub(ONE, ZERO)
    assert close_to_sentence(s) == expand_shorthand(s)
    assert close_to_sentence(Atomic("Q", (x0,))) == Sup(0, Atomic("Q", (x0,)))
    c = hsig2.henkin_constant(Atomic("Q", (x0,)), 0, DyadicNumeral(1, 1), DyadicNumeral(1, 0))
    closed = close_to_sentence(Atomic("Q", (Const(c),)))
    assert closed == Sup(0, Atomic("Q", (x0,)))
    # the fresh variable avoids x0, which occurs (bound) via the expanded 0
    closed = close_to_sentence(Sub(Atomic("Q", (Const(c),)), ZERO))
    assert closed == Sup(1, Sub(Atomic("Q", (x1,)), ZERO))
    assert not henkin_constants_of(closed)


def test_compute_q_examples(M2, sig2):
    o = FiniteModelOracle(M2)
    base = CanonicalEnumeration(sig2)
    q = lambda phi, psi: compute_q(o, phi, psi, [], 0, base)
    assert q(ONE, ONE) == 0
    assert q(ZERO, ONE) == 1
    assert q(Atomic("Q", (Const("c_b"),)), ONE) == Fraction(1, 4)


def test_stage_one_canonical(M2, hsig2):
    e = CompletionEngine(hsig2, NameOracle(model_name(M2)))
    rec = e.step()
    assert e.state.stage == 1 and len(e.state.indices) == 1
    assert isinstance(e.wff(rec.added), Sub)
    assert sentence_value(M2, rec.sentence) >= Fraction(1, 4)
    again = CompletionEngine(hsig2, NameOracle(model_name(M2)))
    again.step()
    assert again.state.indices == e.state.indices


def test_invariants_over_stages(M2, engine_factory):
    e = engine_factory()
    prev = set()
    for s in range(20):
        rec = e.step()
        cur = set(e.state.prefix(s + 1))
        assert len(cur) == s + 1 and prev < cur
        assert isinstance(e.wff(rec.added), Sub)
        assert rec.q >= Fraction(1, 1 << (s + 1))
        assert sentence_value(M2, rec.sentence) >= Fraction(1, 1 << (s + 2))
        prev = cur


def test_no_double_decision(M2, engine_factory):
    e = engine_factory()
    e.run(30)
    members = set(e.state.indices)
    for rec in e.state.trace:
        i, j = rec.pair
        assert e.sub_index(j, i) not in members or e.sub_index(j, i) == rec.added


def test_trace_decides_q_ca_against_dyadics(M2, hsig2, engine_factory):
    e = engine_factory()
    e.run(50)
    atom = Atomic("Q", (Const("c_a"),))
    decided = {}
    for p in (DyadicNumeral(0, 0), DyadicNumeral(1, 1), DyadicNumeral(1, 0)):
        decided[p] = (e.theta.index(Sub(p, atom)) in e.state.indices,
                      e.theta.index(Sub(atom, p)) in e.state.indices)
    # Q(c_a) is 0 in M, so Q(c_a) ∸ p (Q(c_a) <= p) is added for p = 1/2, 1.
    # Q(c_a) and 0 are provably equivalent and that comparison is never decided.
    assert decided[DyadicNumeral(1, 1)] == (False, True)
    assert decided[DyadicNumeral(1, 0)] == (False, True)
    assert decided[DyadicNumeral(0, 0)] == (False, False)


def test_run_zero_and_fold(M2, hsig2, engine_factory):
    assert run_completion(NameOracle(model_name(M2)), hsig2, 0).indices == []
    a = engine_factory()
    a.run(6)
    b = engine_factory()
    for _ in range(6):
        b.step()
    assert a.state.indices == b.state.indices


def test_resume_matches_uninterrupted(engine_factory):
    full = engine_factory()
    full.run(12)
    half = engine_factory()
    half.run(5)
    restored = CompletionState.parse(half.state.dumps())
    # trace codes above 256 bits are kept as digests, so compare serializations
    assert restored.dumps() == half.state.dumps()
    resumed = engine_factory(state=restored)
    resumed.run(12)
    assert resumed.state.indices == full.state.indices
    assert resumed.state.dumps() == full.state.dumps()


def test_state_parse_rejects_inconsistent():
    with pytest.raises(ValueError):
        CompletionState.parse("completion 2\nindex 3\n")
    with pytest.raises(ValueError):
        CompletionState.parse("completion 0\nbogus 1\n")


def test_pair_budget_timeout(engine_factory):
    e = engine_factory(pair_budget=1)
    with pytest.raises(CompletionTimeout):
        e.step()
