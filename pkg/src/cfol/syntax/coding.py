"""Effective numbering of terms and wffs.

Every natural number decodes to exactly one core wff and vice versa.  Codes
are built bottom-up from node tags and child codes with a bijective pairing
whose output length is (roughly) the sum of its inputs' lengths, so the code
of a wff has bit length linear in the size of the wff.  (Cantor pairing would
double the length at every tree level.)

Layout of the canonical numbering:

* wff ``w``: ``code = 6 * payload + tag`` with tag 0 atomic, 1 neg, 2 half,
  3 sub, 4 sup, 5 inf.  Atomic payload is ``|P| * args + pred_index``; sub
  payload is ``pair(left, right)``; quantifier payload is ``pair(var, body)``.
* term ``t``: codes ``0 .. B-1`` are the base constants in declaration
  order.  Above that, ``code - B`` is split by residue among the infinite
  term kinds in the order variable, application (if the signature has
  function symbols), Henkin constant (Henkin level only).  Application
  payload is ``|F| * args + fn_index``; a Henkin payload is the 4-tuple
  ``(formula, var, lower, upper)`` with formula coded at the Henkin level.
* argument tuples of length ``n``: one term is its own code, longer tuples
  are ``pair(first, tuple(rest))``.
* numeral ``l/2^k`` (``l <= 2^k``): ``2^k - 1 + k + l``.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Protocol, Sequence, Tuple

from .ast import (
    App, Atomic, Const, DyadicNumeral, Half, HenkinConstant, Inf, Neg, Sub, Sup, Term, Var, Wff,
)
from .shorthand import expand_shorthand
from .signature import AnySignature, HenkinSignature, SignatureError


# -- bijective pairing -----------------------------------------------------------


def _blen(x: int) -> int:
    # length of x in bijective binary: 0 -> 0, 1..2 -> 1, 3..6 -> 2, ...
    return (x + 1).bit_length() - 1


def _offset(total: int) -> int:
    # number of pairs whose lengths sum to less than ``total``
    return (total - 1) * (1 << total) + 1


def bpair(x: int, y: int) -> int:
    """Length-additive bijection N x N -> N."""
    a, b = _blen(x), _blen(y)
    total = a + b
    rx, ry = x - ((1 << a) - 1), y - ((1 << b) - 1)
    return _offset(total) + (a << total) + (rx << b) + ry


def bunpair(n: int) -> Tuple[int, int]:
    if n < 0:
        raise ValueError("codes are natural numbers")
    total = max(n.bit_length() - 2, 0)
    while total > 0 and _offset(total) > n:
        total -= 1
    while _offset(total + 1) <= n:
        total += 1
    r = n - _offset(total)
    a = r >> total
    rem = r & ((1 << total) - 1)
    b = total - a
    rx, ry = rem >> b, rem & ((1 << b) - 1)
    return rx + (1 << a) - 1, ry + (1 << b) - 1


def encode_tuple(codes: Sequence[int]) -> int:
    if not codes:
        raise ValueError("tuples have length at least 1")
    out = codes[-1]
    for c in reversed(codes[:-1]):
        out = bpair(c, out)
    return out


def decode_tuple(n: int, length: int) -> List[int]:
    out = []
    for _ in range(length - 1):
        head, n = bunpair(n)
        out.append(head)
    out.append(n)
    return out


def encode_numeral(p: DyadicNumeral) -> int:
    return (1 << p.exp) - 1 + p.exp + p.numer


def decode_numeral(n: int) -> DyadicNumeral:
    k = 0
    while (1 << (k + 1)) - 1 + (k + 1) <= n:
        k += 1
    return DyadicNumeral(n - ((1 << k) - 1 + k), k)


# -- codecs -------------------------------------------------------------------------

_NEG, _HALF, _SUB, _SUP, _INF = 1, 2, 3, 4, 5


class Codec:
    """Canonical numbering of the core wffs over a signature.

    ``Codec(sig)`` numbers the L-wffs; ``Codec(HenkinSignature(sig))`` numbers
    the L+-wffs.  Results are memoised, so repeated coding of shared subtrees
    is cheap.
    """

    def __init__(self, sig: AnySignature):
        self.sig = sig
        self.henkin = isinstance(sig, HenkinSignature)
        base = sig.base
        self._preds = [s.name for s in base.predicates]
        self._pred_ix = {n: i for i, n in enumerate(self._preds)}
        self._pred_ar = [s.arity for s in base.predicates]
        self._funs = [s.name for s in base.functions]
        self._fun_ix = {n: i for i, n in enumerate(self._funs)}
        self._fun_ar = [s.arity for s in base.functions]
        self._consts = list(base.constants)
        self._const_ix = {c: i for i, c in enumerate(self._consts)}
        self._kinds = ["var"] + (["app"] if self._funs else []) + (["henkin"] if self.henkin else [])
        self._enc_w: Dict[Wff, int] = {}
        self._dec_w: Dict[int, Wff] = {}
        self._enc_t: Dict[Term, int] = {}
        self._dec_t: Dict[int, Term] = {}

    def clear(self):
        for memo in (self._enc_w, self._dec_w, self._enc_t, self._dec_t):
            memo.clear()

    # terms
    def encode_term(self, t: Term) -> int:
        hit = self._enc_t.get(t)
        if hit is not None:
            return hit
        m = len(self._kinds)
        b = len(self._consts)
        if isinstance(t, Var):
            code = b + m * t.index
        elif isinstance(t, Const):
            s = t.symbol
            if isinstance(s, HenkinConstant):
                if not self.henkin:
                    raise SignatureError("Henkin constant outside L+")
                code = b + m * self._encode_henkin(s) + self._kinds.index("henkin")
            elif s in self._const_ix:
                code = self._const_ix[s]
            else:
                raise SignatureError(f"unknown constant {s!r}")
        elif isinstance(t, App):
            if t.fn not in self._fun_ix:
                raise SignatureError(f"unknown function {t.fn!r}")
            fi = self._fun_ix[t.fn]
            if len(t.args) != self._fun_ar[fi]:
                raise SignatureError(f"arity mismatch for {t.fn}")
            args = encode_tuple([self.encode_term(a) for a in t.args])
            code = b + m * (len(self._funs) * args + fi) + 1
        else:
            raise TypeError(f"not a term: {t!r}")
        self._enc_t[t] = code
        self._dec_t.setdefault(code, t)
        return code

    def _encode_henkin(self, c: HenkinConstant) -> int:
        return encode_tuple([self.encode_wff(c.formula), c.var,
                             encode_numeral(c.lower), encode_numeral(c.upper)])

    def decode_term(self, n: int) -> Term:
        hit = self._dec_t.get(n)
        if hit is not None:
            return hit
        b = len(self._consts)
        if n < b:
            t: Term = Const(self._consts[n])
        else:
            payload, r = divmod(n - b, len(self._kinds))
            kind = self._kinds[r]
            if kind == "var":
                t = Var(payload)
            elif kind == "app":
                args, fi = divmod(payload, len(self._funs))
                t = App(self._funs[fi], tuple(self.decode_term(c) for c in
                                              decode_tuple(args, self._fun_ar[fi])))
            else:
                fc, var, lc, uc = decode_tuple(payload, 4)
                t = Const(HenkinConstant(self.decode_wff(fc), var, decode_numeral(lc),
                                         decode_numeral(uc)))
        self._dec_t[n] = t
        return t

    # wffs
    def encode_wff(self, w: Wff) -> int:
        """Code of ``w``; sugared input is coded by its core expansion."""
        hit = self._enc_w.get(w)
        if hit is not None:
            return hit
        core = expand_shorthand(w)
        if core is not w:
            code = self.encode_wff(core)
        elif isinstance(w, Atomic):
            if w.pred not in self._pred_ix:
                raise SignatureError(f"unknown predicate {w.pred!r}")
            pi = self._pred_ix[w.pred]
            if len(w.args) != self._pred_ar[pi]:
                raise SignatureError(f"arity mismatch for {w.pred}")
            args = encode_tuple([self.encode_term(a) for a in w.args])
            code = 6 * (len(self._preds) * args + pi)
        elif isinstance(w, Neg):
            code = 6 * self.encode_wff(w.body) + _NEG
        elif isinstance(w, Half):
            code = 6 * self.encode_wff(w.body) + _HALF
        elif isinstance(w, Sub):
            code = 6 * bpair(self.encode_wff(w.left), self.encode_wff(w.right)) + _SUB
        elif isinstance(w, Sup):
            code = 6 * bpair(w.var, self.encode_wff(w.body)) + _SUP
        elif isinstance(w, Inf):
            code = 6 * bpair(w.var, self.encode_wff(w.body)) + _INF
        else:
            raise TypeError(f"not a wff: {w!r}")
        self._enc_w[w] = code
        if core is w:
            self._dec_w.setdefault(code, w)
        return code

    def decode_wff(self, n: int) -> Wff:
        hit = self._dec_w.get(n)
        if hit is not None:
            return hit
        if n < 0:
            raise ValueError("codes are natural numbers")
        payload, tag = divmod(n, 6)
        if tag == 0:
            args, pi = divmod(payload, len(self._preds))
            w: Wff = Atomic(self._preds[pi], tuple(self.decode_term(c) for c in
                                                   decode_tuple(args, self._pred_ar[pi])))
        elif tag == _NEG:
            w = Neg(self.decode_wff(payload))
        elif tag == _HALF:
            w = Half(self.decode_wff(payload))
        elif tag == _SUB:
            l, r = bunpair(payload)
            w = Sub(self.decode_wff(l), self.decode_wff(r))
        else:
            v, body = bunpair(payload)
            w = (Sup if tag == _SUP else Inf)(v, self.decode_wff(body))
        self._dec_w[n] = w
        return w

    def constant_code(self, c) -> int:
        """Code of a constant symbol within the numbering of L+ constants."""
        if isinstance(c, HenkinConstant):
            return len(self._consts) + self._encode_henkin(c)
        return self._const_ix[c]

    def constant_of_code(self, n: int):
        if n < len(self._consts):
            return self._consts[n]
        if not self.henkin:
            raise SignatureError(f"no constant with code {n}")
        fc, var, lc, uc = decode_tuple(n - len(self._consts), 4)
        return HenkinConstant(self.decode_wff(fc), var, decode_numeral(lc), decode_numeral(uc))


# -- enumerations --------------------------------------------------------------------


class Enumeration(Protocol):
    """A bijection between N and the core wffs of some level."""

    def wff(self, n: int) -> Wff: ...

    def index(self, w: Wff) -> int: ...


class CanonicalEnumeration:
    def __init__(self, sig: AnySignature):
        self.codec = Codec(sig)
        self.sig = sig

    def wff(self, n: int) -> Wff:
        return self.codec.decode_wff(n)

    def index(self, w: Wff) -> int:
        return self.codec.encode_wff(w)

    def __repr__(self):
        return f"CanonicalEnumeration({self.sig!r})"


class PriorityEnumeration:
    """Puts a finite list of wffs at indices 0..K-1, then the canonical order.

    Canonical wffs keep their relative order; the priority wffs are removed
    from the tail so the result is still a bijection.
    """

    def __init__(self, priority: Iterable[Wff], base: CanonicalEnumeration):
        self.base = base
        self.priority: List[Wff] = []
        for w in priority:
            core = expand_shorthand(w)
            if core not in self.priority:
                self.priority.append(core)
        self._pos = {w: i for i, w in enumerate(self.priority)}
        self._skip = sorted(base.index(w) for w in self.priority)

    @property
    def size(self) -> int:
        return len(self.priority)

    def wff(self, n: int) -> Wff:
        if n < len(self.priority):
            return self.priority[n]
        c = n - len(self.priority)
        for s in self._skip:
            if s <= c:
                c += 1
            else:
                break
        return self.base.wff(c)

    def index(self, w: Wff) -> int:
        core = expand_shorthand(w)
        pos = self._pos.get(core)
        if pos is not None:
            return pos
        c = self.base.index(core)
        below = 0
        for s in self._skip:
            if s < c:
                below += 1
            else:
                break
        return len(self.priority) + c - below

    def __repr__(self):
        return f"PriorityEnumeration(size={len(self.priority)})"


def enumerate_wff(n: int, sig: AnySignature) -> Wff:
    """The n-th core wff of the canonical numbering (Henkin level for an L+ signature)."""
    return _canonical(sig).wff(n)


def code_of_wff(w: Wff, sig: AnySignature) -> int:
    return _canonical(sig).index(w)


_CANON: Dict[int, CanonicalEnumeration] = {}


def _canonical(sig) -> CanonicalEnumeration:
    key = id(sig)
    enum = _CANON.get(key)
    if enum is None or enum.sig is not sig:
        enum = _CANON[key] = CanonicalEnumeration(sig)
    return enum
