"""Abstract syntax for continuous first-order logic.

Terms and wffs are immutable and hash-consed only in the weak sense that each
node caches its hash and free-variable set at construction; structural
equality is still the equality relation.  Variables are natural-number
indices (``Var(0)`` is x0).

The core connectives are ``Neg``, ``Half``, ``Sub`` (truncated subtraction)
and the quantifiers ``Sup``/``Inf``.  ``Or``, ``And``, ``Iff``, ``Plus``,
``Times`` and ``DyadicNumeral`` form the sugared layer; see
:mod:`cfol.syntax.shorthand` for their expansion.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple, Union

_EMPTY: frozenset = frozenset()


class Node:
    __slots__ = ()

    def _key(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or self._hash != other._hash:
            return False
        return self._key() == other._key()

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        from .sexpr import to_sexpr

        return f"<{type(self).__name__} {to_sexpr(self)}>"

    def __str__(self):
        from .sexpr import to_sexpr

        return to_sexpr(self)


def _init(node, fv):
    object.__setattr__(node, "_hash", hash((type(node).__name__,) + node._key()))
    object.__setattr__(node, "fv", fv)


# -- terms -------------------------------------------------------------------


class Term(Node):
    __slots__ = ()


@dataclass(frozen=True, eq=False, repr=False)
class Var(Term):
    index: int
    _hash: int = field(init=False, compare=False)
    fv: frozenset = field(init=False, compare=False)

    def _key(self):
        return (self.index,)

    def __post_init__(self):
        _init(self, frozenset((self.index,)))


@dataclass(frozen=True, eq=False, repr=False)
class Const(Term):
    """A constant symbol: a base-signature name or a :class:`HenkinConstant`."""

    symbol: Union[str, "HenkinConstant"]
    _hash: int = field(init=False, compare=False)
    fv: frozenset = field(init=False, compare=False)

    def _key(self):
        return (self.symbol,)

    def __post_init__(self):
        _init(self, _EMPTY)


@dataclass(frozen=True, eq=False, repr=False)
class App(Term):
    fn: str
    args: Tuple[Term, ...]
    _hash: int = field(init=False, compare=False)
    fv: frozenset = field(init=False, compare=False)

    def _key(self):
        return (self.fn, self.args)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        _init(self, frozenset().union(*(a.fv for a in self.args)))


# -- wffs --------------------------------------------------------------------


class Wff(Node):
    __slots__ = ()


@dataclass(frozen=True, eq=False, repr=False)
class Atomic(Wff):
    pred: str
    args: Tuple[Term, ...]
    _hash: int = field(init=False, compare=False)
    fv: frozenset = field(init=False, compare=False)

    def _key(self):
        return (self.pred, self.args)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        _init(self, frozenset().union(*(a.fv for a in self.args)))


@dataclass(frozen=True, eq=False, repr=False)
class Neg(Wff):
    body: Wff
    _hash: int = field(init=False, compare=False)
    fv: frozenset = field(init=False, compare=False)

    def _key(self):
        return (self.body,)

    def __post_init__(self):
        _init(self, self.body.fv)


@dataclass(frozen=True, eq=False, repr=False)
class Half(Wff):
    body: Wff
    _hash: int = field(init=False, compare=False)
    fv: frozenset = field(init=False, compare=False)

    def _key(self):
        return (self.body,)

    def __post_init__(self):
        _init(self, self.body.fv)


class _Binary(Wff):
    __slots__ = ()

    def _key(self):
        return (self.left, self.right)

    def __post_init__(self):
        _init(self, self.left.fv | self.right.fv)


@dataclass(frozen=True, eq=False, repr=False)
class Sub(_Binary):
    """Truncated subtraction ``left ∸ right``."""

    left: Wff
    right: Wff
    _hash: int = field(init=False, compare=False)
    fv: frozenset = field(init=False, compare=False)


class _Quant(Wff):
    __slots__ = ()

    def _key(self):
        return (self.var, self.body)

    def __post_init__(self):
        _init(self, self.body.fv - {self.var})


@dataclass(frozen=True, eq=False, repr=False)
class Sup(_Quant):
    var: int
    body: Wff
    _hash: int = field(init=False, compare=False)
    fv: frozenset = field(init=False, compare=False)


@dataclass(frozen=True, eq=False, repr=False)
class Inf(_Quant):
    var: int
    body: Wff
    _hash: int = field(init=False, compare=False)
    fv: frozenset = field(init=False, compare=False)


# -- sugar -------------------------------------------------------------------


@dataclass(frozen=True, eq=False, repr=False)
class Or(_Binary):
    left: Wff
    right: Wff
    _hash: int = field(init=False, compare=False)
    fv: frozenset = field(init=False, compare=False)


@dataclass(frozen=True, eq=False, repr=False)
class And(_Binary):
    left: Wff
    right: Wff
    _hash: int = field(init=False, compare=False)
    fv: frozenset = field(init=False, compare=False)


@dataclass(frozen=True, eq=False, repr=False)
class Iff(_Binary):
    left: Wff
    right: Wff
    _hash: int = field(init=False, compare=False)
    fv: frozenset = field(init=False, compare=False)


@dataclass(frozen=True, eq=False, repr=False)
class Plus(_Binary):
    """Truncated addition ``left ∔ right``."""

    left: Wff
    right: Wff
    _hash: int = field(init=False, compare=False)
    fv: frozenset = field(init=False, compare=False)


@dataclass(frozen=True, eq=False, repr=False)
class Times(Wff):
    """``m`` copies of ``body`` joined by ∔."""

    m: int
    body: Wff
    _hash: int = field(init=False, compare=False)
    fv: frozenset = field(init=False, compare=False)

    def _key(self):
        return (self.m, self.body)

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("multiplier must be a natural number")
        _init(self, self.body.fv if self.m else _EMPTY)  # 0φ is the sentence 0


@dataclass(frozen=True, eq=False, repr=False)
class DyadicNumeral(Wff):
    """The numeral sentence for ``numer / 2**exp``; requires numer <= 2**exp."""

    numer: int
    exp: int
    _hash: int = field(init=False, compare=False)
    fv: frozenset = field(init=False, compare=False)

    def _key(self):
        return (self.numer, self.exp)

    def __post_init__(self):
        if self.numer < 0 or self.exp < 0:
            raise ValueError("dyadic numeral needs natural numerator and exponent")
        if self.numer > 1 << self.exp:
            raise ValueError(f"dyadic numeral {self.numer}/2^{self.exp} exceeds 1")
        _init(self, _EMPTY)

    @classmethod
    def reduced(cls, numer: int, exp: int) -> "DyadicNumeral":
        """Lowest-terms numeral with the same value."""
        while exp > 0 and numer % 2 == 0:
            numer //= 2
            exp -= 1
        if numer == 0:
            exp = 0
        return cls(numer, exp)


SUGAR = (Or, And, Iff, Plus, Times, DyadicNumeral)
CORE = (Atomic, Neg, Half, Sub, Sup, Inf)


@dataclass(frozen=True, eq=False, repr=False)
class HenkinConstant(Node):
    """Witness constant c_{formula, var, lower, upper} of the Henkin signature.

    ``formula`` is stored in core (expanded) form so that each quadruple has
    exactly one constant.
    """

    formula: Wff
    var: int
    lower: DyadicNumeral
    upper: DyadicNumeral
    _hash: int = field(init=False, compare=False)

    def _key(self):
        return (self.formula, self.var, self.lower, self.upper)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("HenkinConstant",) + self._key()))


def is_sentence(w: Wff) -> bool:
    return not w.fv
