"""Axiom schemata, schema matching and Hilbert-style proof checking.

Schemata are stored as core-syntax templates whose leaves may be
metavariables: :class:`Meta` stands for a wff, and a ``Var``/quantifier whose
index is a string stands for a variable.  Matching is first-order structural
unification against the shorthand-expanded target.  VI, VII, XIV and XV carry
side conditions or parameters and get dedicated code.

``IV`` is the schema as literally stated, ``(φ∸ψ)∸(¬φ∸¬φ)``; ``IV'`` is the
usual contraposition form ``(φ∸ψ)∸(¬ψ∸¬φ)``.  Both are recognised.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .syntax.ast import App, Atomic, Half, Inf, Neg, Sub, Sup, Term, Var, Wff
from .syntax.ops import substitute
from .syntax.sexpr import ParseError, _Parser, _head, _name, _nat, _read, to_sexpr, tokenize
from .syntax.shorthand import conj, disj, expand_shorthand, numeral_exponent, power_of_half
from .syntax.signature import METRIC, AnySignature, SignatureError

_EMPTY: frozenset = frozenset()


class SchemaError(ValueError):
    pass


@dataclass(frozen=True, eq=False, repr=False)
class Meta(Wff):
    """Wff metavariable in a schema template."""

    name: str
    _hash: int = field(init=False, compare=False)
    fv: frozenset = field(init=False, compare=False)

    def _key(self):
        return (self.name,)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("Meta", self.name)))
        object.__setattr__(self, "fv", _EMPTY)

    def __repr__(self):
        return f"<Meta {self.name}>"


PHI, PSI, THETA = Meta("phi"), Meta("psi"), Meta("theta")


def _d(a: str, b: str) -> Atomic:
    return Atomic(METRIC, (Var(a), Var(b)))


def _iff(a: Wff, b: Wff) -> Wff:
    return disj(Sub(a, b), Sub(b, a))


TEMPLATES: Dict[str, Wff] = {
    "I": Sub(Sub(PHI, PSI), PHI),
    "II": Sub(Sub(Sub(THETA, PHI), Sub(THETA, PSI)), Sub(PSI, PHI)),
    "III": Sub(conj(PHI, PSI), conj(PSI, PHI)),
    "IV": Sub(Sub(PHI, PSI), Sub(Neg(PHI), Neg(PHI))),
    "IV'": Sub(Sub(PHI, PSI), Sub(Neg(PSI), Neg(PHI))),
    "V": Sub(Sub(Sup("x", PSI), Sup("x", PHI)), Sup("x", Sub(PSI, PHI))),
    "VI": Sub(Meta("phi_t"), Sup("x", PHI)),
    "VII": Sub(Sup("x", PHI), PHI),
    "VIII": _iff(Inf("x", PHI), Neg(Sup("x", Neg(PHI)))),
    "IX": Sub(Half(PHI), Sub(PHI, Half(PHI))),
    "X": Sub(Sub(PHI, Half(PHI)), Half(PHI)),
    "XI": _d("x", "x"),
    "XII": Sub(_d("x", "y"), _d("y", "x")),
    "XIII": Sub(Sub(_d("x", "z"), _d("x", "y")), _d("y", "z")),
}

SCHEMA_IDS: Tuple[str, ...] = ("I", "II", "III", "IV", "IV'", "V", "VI", "VII", "VIII", "IX",
                               "X", "XI", "XII", "XIII", "XIV", "XV")

# parameters each schema needs for instantiation
PARTS: Dict[str, Tuple[str, ...]] = {
    "I": ("phi", "psi"), "II": ("phi", "psi", "theta"), "III": ("phi", "psi"),
    "IV": ("phi", "psi"), "IV'": ("phi", "psi"), "V": ("phi", "psi", "x"),
    "VI": ("phi", "x", "t"), "VII": ("phi", "x"), "VIII": ("phi", "x"),
    "IX": ("phi",), "X": ("phi",), "XI": ("x",), "XII": ("x", "y"), "XIII": ("x", "y", "z"),
    "XIV": ("f", "n", "t0", "t1", "x", "y"), "XV": ("P", "n", "t0", "t1", "x", "y"),
}


# -- unification -------------------------------------------------------------------


def _unify_term(tpl: Term, t: Term, b: dict) -> bool:
    if isinstance(tpl, Var) and isinstance(tpl.index, str):
        if not isinstance(t, Var):
            return False
        return b.setdefault(tpl.index, t.index) == t.index
    if isinstance(tpl, App):
        return (isinstance(t, App) and t.fn == tpl.fn and len(t.args) == len(tpl.args)
                and all(_unify_term(p, q, b) for p, q in zip(tpl.args, t.args)))
    return tpl == t


def _unify(tpl: Wff, w: Wff, b: dict) -> bool:
    if isinstance(tpl, Meta):
        if tpl.name in b:
            return b[tpl.name] == w
        b[tpl.name] = w
        return True
    if type(tpl) is not type(w):
        return False
    if isinstance(tpl, Atomic):
        return (tpl.pred == w.pred and len(tpl.args) == len(w.args)
                and all(_unify_term(p, q, b) for p, q in zip(tpl.args, w.args)))
    if isinstance(tpl, (Neg, Half)):
        return _unify(tpl.body, w.body, b)
    if isinstance(tpl, Sub):
        return _unify(tpl.left, w.left, b) and _unify(tpl.right, w.right, b)
    if isinstance(tpl, (Sup, Inf)):
        if isinstance(tpl.var, str):
            if b.setdefault(tpl.var, w.var) != w.var:
                return False
        elif tpl.var != w.var:
            return False
        return _unify(tpl.body, w.body, b)
    return tpl == w


def _fill_term(t: Term, parts: dict) -> Term:
    if isinstance(t, Var) and isinstance(t.index, str):
        return Var(parts[t.index])
    if isinstance(t, App):
        return App(t.fn, tuple(_fill_term(a, parts) for a in t.args))
    return t


def _fill(tpl: Wff, parts: dict) -> Wff:
    if isinstance(tpl, Meta):
        return expand_shorthand(parts[tpl.name])
    if isinstance(tpl, Atomic):
        return Atomic(tpl.pred, tuple(_fill_term(a, parts) for a in tpl.args))
    if isinstance(tpl, (Neg, Half)):
        return type(tpl)(_fill(tpl.body, parts))
    if isinstance(tpl, Sub):
        return Sub(_fill(tpl.left, parts), _fill(tpl.right, parts))
    if isinstance(tpl, (Sup, Inf)):
        var = parts[tpl.var] if isinstance(tpl.var, str) else tpl.var
        return type(tpl)(var, _fill(tpl.body, parts))
    return tpl


# -- VI: locating the substituted term --------------------------------------------------


def _find_term(a, b, x: int):
    """First subterm of ``b`` sitting where ``a`` has a free occurrence of x."""
    if isinstance(a, Var):
        return b if a.index == x else None
    if isinstance(a, App):
        if not isinstance(b, App) or len(a.args) != len(b.args):
            return None
        for p, q in zip(a.args, b.args):
            if x in p.fv:
                return _find_term(p, q, x)
        return None
    if x not in a.fv or type(a) is not type(b):
        return None
    if isinstance(a, Atomic):
        if len(a.args) != len(b.args):
            return None
        for p, q in zip(a.args, b.args):
            if x in p.fv:
                return _find_term(p, q, x)
        return None
    if isinstance(a, (Neg, Half, Sup, Inf)):
        return _find_term(a.body, b.body, x)
    if isinstance(a, Sub):
        side = (a.left, b.left) if x in a.left.fv else (a.right, b.right)
        return _find_term(*side, x)
    return None


# -- matching --------------------------------------------------------------------------


def _match_modulus(w: Wff, sig: AnySignature, kind: str) -> List[dict]:
    # (N1 ∸ d(x,y)) ∧ (B ∸ N2), with ∧ expanded as A ∸ (A ∸ B')
    if not (isinstance(w, Sub) and isinstance(w.right, Sub) and w.left == w.right.left):
        return []
    a, b = w.left, w.right.right
    if not (isinstance(a, Sub) and isinstance(a.right, Atomic) and a.right.pred == METRIC):
        return []
    xy = a.right.args
    if not all(isinstance(v, Var) for v in xy):
        return []
    m = numeral_exponent(a.left)
    if m is None or not isinstance(b, Sub):
        return []
    n = numeral_exponent(b.right)
    if n is None:
        return []
    lhs = b.left
    if kind == "XIV":
        if not (isinstance(lhs, Atomic) and lhs.pred == METRIC
                and all(isinstance(s, App) for s in lhs.args)
                and lhs.args[0].fn == lhs.args[1].fn):
            return []
        sym, a1, a2 = lhs.args[0].fn, lhs.args[0].args, lhs.args[1].args
        if not sig.has_function(sym):
            return []
        mod, key = sig.function(sym).modulus, "f"
    else:
        if not (isinstance(lhs, Sub) and isinstance(lhs.left, Atomic)
                and isinstance(lhs.right, Atomic) and lhs.left.pred == lhs.right.pred):
            return []
        sym, a1, a2 = lhs.left.pred, lhs.left.args, lhs.right.args
        if not sig.has_predicate(sym):
            return []
        mod, key = sig.predicate(sym).modulus, "P"
    if mod(n) != m or len(a1) != len(a2):
        return []
    x, y = xy[0].index, xy[1].index
    out = []
    for i in range(len(a1)):
        if a1[i] == Var(x) and a2[i] == Var(y) and a1[:i] == a2[:i] and a1[i + 1:] == a2[i + 1:]:
            out.append({key: sym, "n": n, "t0": a1[:i], "t1": a1[i + 1:], "x": x, "y": y})
    return out


def match_axiom(w: Wff, sig: Optional[AnySignature] = None) -> List[Tuple[str, dict]]:
    """Every (schema id, witness) that ``w`` instantiates, in schema order.

    XIV and XV need ``sig`` for the moduli and are skipped without it.
    """
    w = expand_shorthand(w)
    out: List[Tuple[str, dict]] = []
    for sid in SCHEMA_IDS:
        if sid in ("XIV", "XV"):
            if sig is not None:
                out += [(sid, wit) for wit in _match_modulus(w, sig, sid)]
            continue
        b: dict = {}
        if not _unify(TEMPLATES[sid], w, b):
            continue
        if sid == "VI":
            phi, phit, x = b["phi"], b.pop("phi_t"), b["x"]
            t = _find_term(phi, phit, x) if x in phi.fv else Var(x)
            if t is None:
                continue
            res, ok = substitute(phi, t, x)
            if not ok or res != phit:
                continue
            b["t"] = t
        elif sid == "VII" and b["x"] in b["phi"].fv:
            continue
        out.append((sid, b))
    return out


def is_axiom(w: Wff, schema: str, sig: Optional[AnySignature] = None) -> bool:
    return any(sid == schema for sid, _ in match_axiom(w, sig))


def instantiate_schema(schema: str, sig: Optional[AnySignature] = None, **parts) -> Wff:
    """Core wff instance of ``schema``; side-condition violations raise SchemaError."""
    if schema not in PARTS:
        raise SchemaError(f"unknown schema {schema!r}")
    missing = [p for p in PARTS[schema] if p not in parts]
    if missing:
        raise SchemaError(f"schema {schema} needs {', '.join(missing)}")
    if schema in ("XIV", "XV"):
        return _instantiate_modulus(schema, sig, parts)
    if schema == "VI":
        phi = expand_shorthand(parts["phi"])
        phit, ok = substitute(phi, parts["t"], parts["x"])
        if not ok:
            raise SchemaError(f"VI: substituting {parts['t']} for x{parts['x']} is not correct (capture)")
        return Sub(phit, Sup(parts["x"], phi))
    if schema == "VII" and parts["x"] in parts["phi"].fv:
        raise SchemaError(f"VII: x{parts['x']} is free in the formula")
    return _fill(TEMPLATES[schema], parts)


def _instantiate_modulus(schema: str, sig, parts) -> Wff:
    if sig is None:
        raise SchemaError(f"{schema} needs the signature for its modulus")
    t0, t1 = tuple(parts["t0"]), tuple(parts["t1"])
    x, y, n = Var(parts["x"]), Var(parts["y"]), parts["n"]
    try:
        sym = sig.function(parts["f"]) if schema == "XIV" else sig.predicate(parts["P"])
    except SignatureError as exc:
        raise SchemaError(str(exc)) from None
    if len(t0) + 1 + len(t1) != sym.arity:
        raise SchemaError(f"{schema}: {sym.name} has arity {sym.arity}")
    lo = Sub(power_of_half(sym.modulus(n)), Atomic(METRIC, (x, y)))
    if schema == "XIV":
        hi = Atomic(METRIC, (App(sym.name, t0 + (x,) + t1), App(sym.name, t0 + (y,) + t1)))
    else:
        hi = Sub(Atomic(sym.name, t0 + (x,) + t1), Atomic(sym.name, t0 + (y,) + t1))
    return conj(lo, Sub(hi, power_of_half(n)))


# -- proofs ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Axiom:
    schema: str
    witness: Optional[dict] = None


@dataclass(frozen=True)
class Premise:
    index: int  # 1-based into the premise list


@dataclass(frozen=True)
class ModusPonens:
    minor: int  # line with φ
    major: int  # line with ψ ∸ φ


@dataclass(frozen=True)
class Generalization:
    line: int
    var: int


Justification = Union[Axiom, Premise, ModusPonens, Generalization]


@dataclass(frozen=True)
class ProofLine:
    wff: Wff
    why: Justification


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    line: Optional[int] = None  # 1-based; first bad line
    reason: str = ""
    conclusion: Optional[Wff] = None

    def __bool__(self):
        return self.accepted

    def __str__(self):
        if self.accepted:
            return f"accept: {to_sexpr(self.conclusion)}" if self.conclusion is not None else "accept"
        return f"reject line {self.line}: {self.reason}"


def _check_line(k: int, w: Wff, why, premises, proved, sig) -> Optional[str]:
    def ref(i):
        if not 1 <= i < k:
            raise LookupError(f"line {i} does not precede line {k}")
        return proved[i - 1]

    try:
        if isinstance(why, Axiom):
            if why.witness is not None:
                try:
                    inst = instantiate_schema(why.schema, sig, **why.witness)
                except (SchemaError, KeyError) as exc:
                    return f"bad witness for {why.schema}: {exc}"
                if inst != w:
                    return f"witness does not instantiate {why.schema} to the stated wff"
            elif not is_axiom(w, why.schema, sig):
                return f"not an instance of schema {why.schema}"
            return None
        if isinstance(why, Premise):
            if not 1 <= why.index <= len(premises):
                return f"no premise {why.index}"
            return None if premises[why.index - 1] == w else "does not restate the premise"
        if isinstance(why, ModusPonens):
            phi, major = ref(why.minor), ref(why.major)
            if not (isinstance(major, Sub) and major.right == phi):
                return f"line {why.major} is not of the form ψ ∸ (line {why.minor})"
            return None if major.left == w else "conclusion is not the ψ of the major premise"
        if isinstance(why, Generalization):
            phi = ref(why.line)
            return None if Sup(why.var, phi) == w else "conclusion is not the generalization"
    except LookupError as exc:
        return str(exc)
    return f"unknown justification {why!r}"


def check_proof(premises: Sequence[Wff], proof: Sequence[ProofLine],
                sig: Optional[AnySignature] = None) -> Verdict:
    premises = [expand_shorthand(p) for p in premises]
    proved: List[Wff] = []
    for k, line in enumerate(proof, 1):
        w = expand_shorthand(line.wff)
        reason = _check_line(k, w, line.why, premises, proved, sig)
        if reason is not None:
            return Verdict(False, k, reason)
        proved.append(w)
    if not proved:
        return Verdict(False, 1, "empty proof")
    return Verdict(True, conclusion=proved[-1])


# -- proof files -----------------------------------------------------------------------

_WFF_KEYS, _NAT_KEYS = ("phi", "psi", "theta"), ("x", "y", "z", "n")


def _parse_witness(text: str, sig) -> dict:
    p = _Parser(sig)
    out: dict = {}
    for tree in _read(tokenize(text)):
        key, args = _head(tree)
        if key in _WFF_KEYS and len(args) == 1:
            out[key] = p.wff(args[0])
        elif key in _NAT_KEYS and len(args) == 1:
            out[key] = _nat(args[0])
        elif key == "t" and len(args) == 1:
            out[key] = p.term(args[0])
        elif key in ("f", "P") and len(args) == 1:
            out[key] = _name(args[0])
        elif key in ("t0", "t1"):
            out[key] = tuple(p.term(a) for a in args)
        else:
            raise ParseError(f"bad witness entry {key!r}", 0, 0)
    return out


def dump_witness(witness: dict) -> str:
    out = []
    for key, v in witness.items():
        if key in ("t0", "t1"):
            out.append(f"({key}" + "".join(" " + to_sexpr(t) for t in v) + ")")
        elif isinstance(v, (Wff, Term)):
            out.append(f"({key} {to_sexpr(v)})")
        else:
            out.append(f"({key} {v})")
    return " ".join(out)


def parse_proof(text: str, sig=None) -> List[ProofLine]:
    """Read ``axiom ID [witness] | wff``, ``premise K | wff``, ``mp I J | wff``, ``gen I N | wff``."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        raw = raw.split("#", 1)[0].strip()
        if not raw:
            continue
        just, bar, body = raw.rpartition("|")
        if not bar:
            raise ParseError("expected '| wff' restating the line", lineno, 1)
        try:
            w = _Parser(sig).wff(_read(tokenize(body))[0])
            toks = just.split(None, 2)
            kind = toks[0] if toks else ""
            if kind == "axiom" and len(toks) >= 2:
                why = Axiom(toks[1], _parse_witness(toks[2], sig) if len(toks) == 3 else None)
            elif kind == "premise" and len(toks) == 2:
                why = Premise(int(toks[1]))
            elif kind == "mp" and len(just.split()) == 3:
                why = ModusPonens(*map(int, just.split()[1:]))
            elif kind == "gen" and len(just.split()) == 3:
                why = Generalization(*map(int, just.split()[1:]))
            else:
                raise ParseError(f"bad justification {just.strip()!r}", lineno, 1)
        except ParseError as exc:
            raise ParseError(exc.message, lineno, exc.col) from None
        except (IndexError, ValueError) as exc:
            raise ParseError(f"malformed proof line: {exc}", lineno, 1) from None
        lines.append(ProofLine(w, why))
    return lines


def dump_proof(proof: Sequence[ProofLine]) -> str:
    out = []
    for line in proof:
        why = line.why
        if isinstance(why, Axiom):
            j = f"axiom {why.schema}" + (f" {dump_witness(why.witness)}" if why.witness else "")
        elif isinstance(why, Premise):
            j = f"premise {why.index}"
        elif isinstance(why, ModusPonens):
            j = f"mp {why.minor} {why.major}"
        else:
            j = f"gen {why.line} {why.var}"
        out.append(f"{j} | {to_sexpr(line.wff)}")
    return "\n".join(out) + "\n"
