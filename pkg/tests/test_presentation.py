import random
from fractions import Fraction
from itertools import chain

import pytest

from cfol.names import NameOracle, model_name
from cfol.presentation import (
    DESK_STAGE_BUDGET, BracketError, PresentationHandle, QueryTimeout, dyadic_set, g_inverse,
    g_numbering, numeral_value, parse_points, point_leaves, query_distance, query_predicate,
    test_enumeration as make_test_enumeration,
)
from cfol.syntax import App, Atomic, Const, DyadicNumeral, Var

ca, cb = Const("c_a"), Const("c_b")


def handle(M, hsig, atoms, k_max=1, **kw):
    return PresentationHandle.for_queries(model_name(M), hsig, atoms, k_max, **kw)


def test_g_numbering(hsig2):
    assert g_numbering(0, hsig2) == ca
    assert g_numbering(2, hsig2) == cb
    assert g_numbering(1, hsig2) == Var(0)
    rng = random.Random(1)
    for _ in range(100):
        n = rng.randrange(10**6)
        assert g_inverse(g_numbering(n, hsig2), hsig2) == n
    assert {g_numbering(2 * i, hsig2) for i in range(2)} == {ca, cb}
    with pytest.raises(ValueError):
        g_inverse(App("f", (ca,)), hsig2)


def test_rational_points_are_generated(hsig2):
    t = App("f", (App("f", (cb,)),))
    assert point_leaves(t) == [cb]
    assert all(g_numbering(g_inverse(p, hsig2), hsig2) == p for p in point_leaves(t))


def test_dyadic_set():
    assert [numeral_value(p) for p in dyadic_set(0)] == [0, Fraction(1, 2), 1]
    assert dyadic_set(1)[1] == DyadicNumeral(1, 2)
    assert len(dyadic_set(3)) == 17


def test_query_examples(M2, hsig2):
    qa = Atomic("Q", (ca,))
    dab = Atomic("d", (ca, cb))
    h = handle(M2, hsig2, [qa, dab])
    r = query_predicate(h, "Q", (ca,), 0)
    assert abs(r.value - 0) <= Fraction(1, 2)
    r = query_distance(h, ca, cb, 1)
    assert abs(r.value - Fraction(1, 2)) <= Fraction(1, 4)
    lo, hi = r.bracket
    assert lo <= r.value == hi and hi - lo <= Fraction(1, 4) + Fraction(1, 8)


@pytest.mark.parametrize("t", [ca, App("f", (cb,)), Var(0)])
def test_distance_to_self(M2, hsig2, t):
    h = handle(M2, hsig2, [Atomic("d", (t, t))])
    for k in (0, 1):
        assert h.query_distance(t, t, k).value <= Fraction(1, 1 << (k + 1))


def test_symmetry(M2, hsig2):
    h = handle(M2, hsig2, [Atomic("d", (ca, cb)), Atomic("d", (cb, ca))])
    for k in (0, 1):
        a, b = h.query_distance(ca, cb, k).value, h.query_distance(cb, ca, k).value
        assert abs(a - b) <= Fraction(1, 1 << k)


def test_engine_only_moves_forward(M2, hsig2):
    h = handle(M2, hsig2, [Atomic("Q", (ca,)), Atomic("Q", (cb,))])
    h.query_predicate("Q", (cb,), 1)
    s = h.engine.stage
    r = h.query_predicate("Q", (ca,), 0)
    assert h.engine.stage >= s and r.stage == h.engine.stage


def test_timeout_reports_undecided(M2, hsig2):
    h = handle(M2, hsig2, [Atomic("Q", (cb,))], stage_budget=3)
    with pytest.raises(QueryTimeout) as e:
        h.query_predicate("Q", (cb,), 1)
    assert e.value.stage == 3 and len(e.value.undecided) > 1


def test_arity_checked(M2, hsig2):
    h = handle(M2, hsig2, [])
    with pytest.raises(ValueError):
        h.query_predicate("Q", (ca, cb), 0)


class Liar:
    """Claims every sentence has degree 1; not the name of any theory."""

    calls = 0

    def __call__(self, n, k):
        self.calls += 1
        return Fraction(1)


def test_inconsistent_stages_raise_bracket_error(hsig2):
    atom = Atomic("Q", (ca,))
    theta, order = make_test_enumeration(hsig2, [atom], 1)
    one, p = theta.index(DyadicNumeral(1, 0)), theta.index(atom)
    # the liar accepts the first pair it is asked about: 1 ∸ P first, later P ∸ 0
    h = PresentationHandle(Liar(), hsig2, theta=theta,
                           pair_order=lambda: chain([(one, p)], order()))
    with pytest.raises(BracketError):
        h.query_predicate("Q", (ca,), 1)


def test_parse_points(hsig2):
    assert parse_points("c_a;c_b", hsig2) == [ca, cb]
    assert parse_points("(app f (const c_a)); (var 2)", hsig2) == [App("f", (ca,)), Var(2)]


def test_desk_budget_is_documented_constant():
    assert DESK_STAGE_BUDGET == 64


def test_answers_replay_from_name_log(M2, hsig2):
    atom = Atomic("Q", (cb,))
    h = handle(M2, hsig2, [atom])
    r = h.query_predicate("Q", (cb,), 1)
    replay = PresentationHandle.for_queries(
        NameOracle(h.oracle.replay_name(), direct=False), hsig2, [atom], 1)
    r2 = replay.query_predicate("Q", (cb,), 1)
    assert (r2.value, r2.bracket, r2.M) == (r.value, r.bracket, r.M)
