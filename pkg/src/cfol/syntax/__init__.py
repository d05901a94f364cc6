from .ast import (
    And, App, Atomic, Const, DyadicNumeral, Half, HenkinConstant, Iff, Inf, Neg, Node, Or,
    Plus, Sub, Sup, Term, Times, Var, Wff, is_sentence,
)
from .coding import (
    CanonicalEnumeration, Codec, Enumeration, PriorityEnumeration, bpair, bunpair,
    code_of_wff, enumerate_wff,
)
from .ops import free_vars, replace_constants, substitute, variables_in
from .sexpr import ParseError, parse_many, parse_term, parse_wff, to_sexpr
from .shorthand import ONE, ZERO, expand_shorthand, is_core, numeral, power_of_half
from .signature import (
    METRIC, HenkinSignature, Modulus, Signature, SignatureError, Symbol, closed_atoms,
    constants_of, henkin_constants_of,
)


def henkin_extend(sig: Signature) -> HenkinSignature:
    return HenkinSignature(sig)
