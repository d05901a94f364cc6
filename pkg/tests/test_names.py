import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import degrees
import gen
from cfol.completion import close_to_sentence, join_wffs
from cfol.names import (
    FiniteModelOracle, NameOracle, NameTimeout, StreamName, decode_rational,
    encode_rational, model_name, name_from_oracle, oracle_from_name, pair, sup_closure,
    triple, unpair, untriple,
)
from cfol.semantics import max_over_assignments
from cfol.syntax import (
    ONE, Atomic, CanonicalEnumeration, Const, Sub, Var, henkin_constants_of,
)

rngs = st.randoms(use_true_random=False)
x0 = Var(0)


# -- pairing ----------------------------------------------------------------------


def test_pairing_examples():
    assert pair(0, 0) == 0
    # <1,0> = 1, then <1,2> = (3*4)/2 + 2
    assert pair(1, 0) == 1 and triple(1, 0, 2) == 8
    assert [unpair(z) for z in range(6)] == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def test_pairing_roundtrip():
    rng = random.Random(11)
    for _ in range(1000):
        x, y = rng.randrange(10**6), rng.randrange(10**6)
        assert unpair(pair(x, y)) == (x, y)
    assert all(pair(*unpair(z)) == z for z in range(5000))
    big = (10**40, 3)
    assert untriple(triple(*big, 7)) == (*big, 7)


def test_rational_code_examples():
    assert decode_rational(encode_rational(Fraction(1, 2))) == Fraction(1, 2)
    assert decode_rational(0) == 0
    assert encode_rational(0) == 0 and encode_rational(1) == pair(1, 0)


def test_rational_code_surjective_and_least():
    rng = random.Random(12)
    for _ in range(1000):
        den = rng.randrange(1, 10**6)
        q = Fraction(rng.randrange(den + 1), den)
        assert decode_rational(encode_rational(q)) == q
    # least preimage: no smaller code decodes to the same rational
    first = {}
    for m in range(3000):
        first.setdefault(decode_rational(m), m)
    for q, m in first.items():
        assert encode_rational(q) == m
    with pytest.raises(ValueError):
        encode_rational(Fraction(3, 2))


# -- oracles and names ------------------------------------------------------------


def test_oracle_examples(M2, sig2):
    o = FiniteModelOracle(M2)
    enum = CanonicalEnumeration(sig2)
    for k in range(4):
        assert o(enum.index(Atomic("Q", (Const("c_a"),))), k) == 0
    assert o(enum.index(Atomic("Q", (x0,))), 0) == Fraction(3, 4)
    assert o(enum.index(ONE), 5) == 1


def test_oracle_needs_named_elements(M2):
    M = type(M2)(M2.sig, M2.universe, M2.predicates, M2.functions, {"c_a": "a", "c_b": "a"})
    with pytest.raises(ValueError):
        FiniteModelOracle(M)


def test_roundtrip(M2):
    o = FiniteModelOracle(M2)
    back = oracle_from_name(name_from_oracle(o))
    rng = random.Random(2)
    for _ in range(300):
        n, k = rng.randrange(5000), rng.randrange(8)
        assert back(n, k) == o(n, k)


def test_values_decode_to_their_position(M2):
    X = model_name(M2)
    rng = random.Random(3)
    for _ in range(100):
        n, k = rng.randrange(10**4), rng.randrange(10)
        assert untriple(X(pair(n, k)))[:2] == (n, k)


def test_backward_lookup_by_scanning(M2, sig2):
    n = CanonicalEnumeration(sig2).index(Atomic("Q", (Const("c_b"),)))
    o = NameOracle(model_name(M2), direct=False)
    assert abs(o(n, 3) - Fraction(3, 4)) <= Fraction(1, 8)
    assert o._pos == pair(n, 3) + 1  # read exactly up to the answering position


def test_soundness_audit(M2, sig2):
    X = model_name(M2)
    enum = CanonicalEnumeration(sig2)
    rng = random.Random(4)
    for _ in range(500):
        n, k, m = untriple(X(rng.randrange(20_000)))
        truth = max_over_assignments(M2, enum.wff(n))
        assert abs(decode_rational(m) - truth) <= Fraction(1, 1 << k)


def test_name_oracle_log_and_replay(M2):
    o = NameOracle(model_name(M2))
    answers = [o(n, 2) for n in (5, 30, 5, 144)]
    assert [e[:2] for e in o.log] == [(5, 2), (30, 2), (5, 2), (144, 2)]
    replay = NameOracle(o.replay_name(), direct=False)
    assert [replay(n, 2) for n in (5, 30, 5, 144)] == answers


def test_stream_name_parse_and_timeout():
    X = StreamName.parse("# a prefix\n8\n\n0\n")
    assert X.prefix(2) == [8, 0]
    o = NameOracle(X, direct=False)
    assert o(1, 0) == decode_rational(2)  # 8 = <1, 0, 2>
    with pytest.raises(NameTimeout):
        o(7, 7)
    with pytest.raises(ValueError):
        StreamName.parse("1\nx\n")
    with pytest.raises(IndexError):
        X(5)


def test_budget_bounds_the_scan(M2):
    o = NameOracle(model_name(M2), budget=10, direct=False)
    with pytest.raises(NameTimeout):
        o(100, 0)


def test_dumps(M2):
    X = model_name(M2)
    assert StreamName.parse(X.dumps(50)).prefix(50) == X.prefix(50)


# -- degree propositions at desk scale ------------------------------------------


@settings(max_examples=60)
@given(rngs)
def test_circgeq(rng):
    M = gen.named_structure(rng)
    phi = gen.wff(rng, depth=2)
    B = [gen.wff(rng, depth=2) for _ in range(rng.randrange(1, 3))]
    o = FiniteModelOracle(M)
    rhs = o(o.enumeration.index(Sub(phi, join_wffs(B))), 0)
    assert degrees.degree(M, phi, B) <= rhs


@settings(max_examples=60)
@given(rngs)
def test_supequiv(rng):
    M = gen.named_structure(rng)
    phi = gen.wff(rng)
    o = FiniteModelOracle(M)
    a = o(o.enumeration.index(phi), 0)
    assert a == o(o.enumeration.index(sup_closure(phi)), 0) == degrees.degree(M, phi)


@settings(max_examples=60)
@given(rngs)
def test_repeq(rng):
    M = gen.named_structure(rng)
    cs = [Const(gen.henkin_constant(rng)) for _ in range(rng.randrange(1, 3))]
    theta = gen.wff(rng, henkin=[c.symbol for c in cs])
    o = FiniteModelOracle(M)
    closed = close_to_sentence(theta)
    assert not henkin_constants_of(closed) and not closed.fv
    used = henkin_constants_of(theta)
    assert o(o.enumeration.index(closed), 0) == degrees.henkin_degree(M, theta, used)
