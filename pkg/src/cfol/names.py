"""Names of theories: pairing, rational codes, degree oracles and streams.

A name is a map X: N -> N whose range contains, for every wff index n and
precision k, some triple <n, k, m> with q_m within 2^-k of the degree of
truth of the n-th L-wff.  Here <x, y> is the Cantor pairing and
<n, k, m> = <<n, k>, m>.  Wff indices are codes under an injectable
base-level enumeration (canonical by default).
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Dict, Iterable, Iterator, List, Optional, Protocol, Tuple

from .semantics import FiniteStructure, reader, sentence_value
from .syntax.ast import Sup, Wff
from .syntax.coding import CanonicalEnumeration, Enumeration


class NameTimeout(RuntimeError):
    """The step budget ran out before the name answered a request."""

    def __init__(self, n: int, k: int, steps: int):
        super().__init__(f"no triple <n, {k}, m> within {steps} stream steps")
        self.n, self.k, self.steps = n, k, steps


# -- pairing -------------------------------------------------------------------------


def pair(x: int, y: int) -> int:
    s = x + y
    return s * (s + 1) // 2 + y


def unpair(z: int) -> Tuple[int, int]:
    w = (isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


def triple(n: int, k: int, m: int) -> int:
    return pair(pair(n, k), m)


def untriple(z: int) -> Tuple[int, int, int]:
    nk, m = unpair(z)
    n, k = unpair(nk)
    return n, k, m


# -- rational codes ------------------------------------------------------------------


def decode_rational(m: int) -> Fraction:
    """q_m: with m = <a, b>, a/(a+b) when a+b > 0, else 0."""
    a, b = unpair(m)
    return Fraction(a, a + b) if a + b else Fraction(0)


def encode_rational(q) -> int:
    """Least m with q_m = q, for rational q in [0, 1]."""
    q = Fraction(q)
    if not 0 <= q <= 1:
        raise ValueError(f"{q} is outside [0, 1]")
    if q == 0:
        return 0
    # preimages are <t p, t (r - p)>, t >= 1; the pairing is monotone so t = 1 is least
    return pair(q.numerator, q.denominator - q.numerator)


# -- degree oracles --------------------------------------------------------------------


class DegreeOracle(Protocol):
    calls: int

    def __call__(self, n: int, k: int) -> Fraction: ...


def sup_closure(w: Wff) -> Wff:
    """sup over the free variables, x_min outermost."""
    for x in sorted(w.fv, reverse=True):
        w = Sup(x, w)
    return w


class FiniteModelOracle:
    """Exact degrees for Th(M): the value in M of the sup-closure of phi_n.

    Reads of M are tagged as coming from the name, which is what the
    presentation audit inspects.
    """

    def __init__(self, M: FiniteStructure, enumeration: Optional[Enumeration] = None):
        if not M.names_every_element():
            raise ValueError("the finite-model oracle needs a constant naming every element")
        self.M = M
        self.enumeration = enumeration or CanonicalEnumeration(M.sig.base)
        self.calls = 0
        self._cache: Dict[int, Fraction] = {}

    def degree(self, n: int) -> Fraction:
        v = self._cache.get(n)
        if v is None:
            token = reader.set("name")
            try:
                v = sentence_value(self.M, sup_closure(self.enumeration.wff(n)))
            finally:
                reader.reset(token)
            self._cache[n] = v
        return v

    def __call__(self, n: int, k: int) -> Fraction:
        self.calls += 1
        return self.degree(n)


# -- names ------------------------------------------------------------------------------


class TheoryName:
    """X: N -> N.  Subclasses provide ``value(j)``; ``respond`` is optional."""

    def value(self, j: int) -> Optional[int]:
        """X(j), or None past the end of a finite prefix."""
        raise NotImplementedError

    def __call__(self, j: int) -> int:
        v = self.value(j)
        if v is None:
            raise IndexError(f"name prefix ends before position {j}")
        return v

    def stream(self) -> Iterator[int]:
        j = 0
        while True:
            v = self.value(j)
            if v is None:
                return
            yield v
            j += 1

    def respond(self, n: int, k: int) -> Optional[int]:
        """Some m with <n, k, m> in the range, if this name can answer directly."""
        return None

    def prefix(self, length: int) -> List[int]:
        return [self(j) for j in range(length)]

    def dumps(self, length: int) -> str:
        return "".join(f"{v}\n" for v in self.prefix(length))


class OracleName(TheoryName):
    """X(<n, k>) = <n, k, encode(o(n, k))>; every natural codes a pair."""

    def __init__(self, oracle: DegreeOracle):
        self.oracle = oracle

    def value(self, j: int) -> int:
        n, k = unpair(j)
        return triple(n, k, encode_rational(self.oracle(n, k)))

    def respond(self, n: int, k: int) -> int:
        return encode_rational(self.oracle(n, k))


class StreamName(TheoryName):
    """A finite prefix of a name, e.g. read back from a file."""

    def __init__(self, values: Iterable[int]):
        self.values = list(values)

    def value(self, j: int) -> Optional[int]:
        return self.values[j] if j < len(self.values) else None

    @classmethod
    def parse(cls, text: str) -> "StreamName":
        vals = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if not line.isdigit():
                raise ValueError(f"line {lineno}: expected a natural number, got {line!r}")
            vals.append(int(line))
        return cls(vals)


def name_from_oracle(oracle: DegreeOracle) -> OracleName:
    return OracleName(oracle)


def model_name(M: FiniteStructure, enumeration: Optional[Enumeration] = None) -> OracleName:
    return OracleName(FiniteModelOracle(M, enumeration))


class NameOracle:
    """Degree oracle read off a name.

    Triples seen while scanning are kept, so the stream is consumed once.
    ``budget`` bounds the stream positions read per request.  Every answer
    is appended to ``log`` as (n, k, m).
    """

    def __init__(self, name: TheoryName, budget: int = 1 << 16, direct: bool = True):
        self.name = name
        self.budget = budget
        self.direct = direct
        self.calls = 0
        self.log: List[Tuple[int, int, int]] = []
        self._seen: Dict[Tuple[int, int], int] = {}
        self._pos = 0

    def code(self, n: int, k: int) -> int:
        m = self._seen.get((n, k))
        if m is None and self.direct:
            m = self.name.respond(n, k)
        steps = 0
        while m is None:
            if steps >= self.budget:
                raise NameTimeout(n, k, steps)
            v = self.name.value(self._pos)
            if v is None:
                raise NameTimeout(n, k, steps)
            self._pos += 1
            steps += 1
            key = untriple(v)
            self._seen.setdefault(key[:2], key[2])
            if key[:2] == (n, k):
                m = key[2]
        self._seen[(n, k)] = m
        return m

    def __call__(self, n: int, k: int) -> Fraction:
        self.calls += 1
        m = self.code(n, k)
        self.log.append((n, k, m))
        return decode_rational(m)

    def replay_name(self) -> StreamName:
        """The triples answered so far, as a stream."""
        return StreamName(triple(n, k, m) for n, k, m in self.log)


def oracle_from_name(name: TheoryName, budget: int = 1 << 16, direct: bool = True) -> NameOracle:
    return NameOracle(name, budget, direct)
