"""Command-line driver.

Exit status: 0 success, 1 domain error (bad input, invalid structure,
rejected proof), 2 usage error, 3 timeout or exhausted budget.
"""
from __future__ import annotations

import argparse
import sys
from importlib.resources import files
from pathlib import Path
from typing import List, Optional

from .completion import CompletionEngine, CompletionState, CompletionTimeout
from .names import NameOracle, NameTimeout, StreamName, model_name
from .presentation import (
    DESK_STAGE_BUDGET, PresentationHandle, QueryTimeout, parse_points, test_enumeration,
)
from .proof import check_proof, parse_proof
from .semantics import (
    Assignment, EvaluationError, FiniteStructure, StructureError, eval_wff, validate_structure,
)
from .syntax import (
    Atomic, HenkinSignature, ParseError, Signature, SignatureError, closed_atoms,
    expand_shorthand, parse_many, parse_wff, to_sexpr,
)
from .values import fmt

OK, DOMAIN, USAGE, TIMEOUT = 0, 1, 2, 3


class DomainError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None


def load_model(spec: str) -> FiniteStructure:
    """A structure file path, or the name of a bundled model such as ``twopoint``."""
    if Path(spec).exists():
        text = _read(spec)
    else:
        res = files("cfol.data").joinpath(f"{spec}.model")
        if not res.is_file():
            raise DomainError(f"no structure file or bundled model named {spec!r}")
        text = res.read_text(encoding="utf-8")
    return FiniteStructure.parse(text)


def _signature(args) -> Optional[Signature]:
    if getattr(args, "sig", None):
        return Signature.parse(_read(args.sig))
    if getattr(args, "model", None):
        return load_model(args.model).sig
    return None


def _inputs(args):
    """(signature, degree oracle, structure or None) from --model / --name."""
    if args.model:
        M = load_model(args.model)
        bad = validate_structure(M)
        if bad:
            raise DomainError(f"invalid structure: {bad[0]}")
        return M.sig, NameOracle(model_name(M), args.name_budget), M
    if not args.sig:
        raise DomainError("--name needs --sig")
    sig = Signature.parse(_read(args.sig))
    return sig, NameOracle(StreamName.parse(_read(args.name)), args.name_budget), None


# -- subcommands --------------------------------------------------------------------


def cmd_parse(args, out) -> int:
    sig = _signature(args)
    text = _read(args.file) if args.file else args.wff
    if text is None:
        raise DomainError("give a wff or --file")
    for w in parse_many(text, sig):
        print(to_sexpr(expand_shorthand(w) if args.expand else w), file=out)
    return OK


def cmd_validate(args, out) -> int:
    M = load_model(args.model)
    bad = validate_structure(M)
    for v in bad:
        print(v, file=out)
    return DOMAIN if bad else OK


def _assignment(M: FiniteStructure, spec: Optional[str]) -> Optional[Assignment]:
    if not spec:
        return None
    mapping = {}
    for item in spec.split(","):
        var, _, elem = item.partition("=")
        if not var.strip().isdigit() or elem.strip() not in M.universe:
            raise DomainError(f"bad assignment entry {item!r}")
        mapping[int(var)] = elem.strip()
    return Assignment(M.universe[0], mapping)


def cmd_eval(args, out) -> int:
    M = load_model(args.model)
    w = parse_wff(args.wff, M.sig)
    print(fmt(eval_wff(M, _assignment(M, args.assign), w)), file=out)
    return OK


def cmd_check_proof(args, out) -> int:
    sig = _signature(args)
    premises = parse_many(_read(args.premises), sig) if args.premises else []
    verdict = check_proof(premises, parse_proof(_read(args.proof), sig), sig)
    print(verdict, file=out)
    return OK if verdict else DOMAIN


def cmd_make_name(args, out) -> int:
    M = load_model(args.model)
    bad = validate_structure(M)
    if bad:
        raise DomainError(f"invalid structure: {bad[0]}")
    text = model_name(M).dumps(args.length)
    if args.out:
        Path(args.out).write_text(text)
    else:
        out.write(text)
    return OK


def _engine_enumeration(args, hsig, extra_atoms=()):
    if args.enumeration == "canonical":
        return None, None
    atoms = list(extra_atoms) or list(closed_atoms(hsig.base))
    return test_enumeration(hsig, atoms, args.prec)


def _write_name_log(args, oracle: NameOracle):
    """The triples read from the name, as a stream file that replays this run."""
    if args.name_log:
        Path(args.name_log).write_text(oracle.replay_name().dumps(len(oracle.log)))


def cmd_complete(args, out) -> int:
    sig, oracle, _ = _inputs(args)
    hsig = HenkinSignature(sig)
    theta, order = _engine_enumeration(args, hsig)
    state = CompletionState.parse(_read(args.resume)) if args.resume else None
    kw = {"pair_order": order} if order else {}
    engine = CompletionEngine(hsig, oracle, theta=theta, state=state,
                              pair_budget=args.pair_budget, **kw)
    try:
        engine.run(args.stages)
    finally:
        _write_name_log(args, oracle)
        text = engine.state.dumps()
        if args.trace:
            Path(args.trace).write_text(text)
        stats = (f"stages {engine.stage}\noracle calls {engine.oracle_calls}\n"
                 f"enumeration {args.enumeration}\n")
        if args.stats:
            Path(args.stats).write_text(stats)
    print(f"stage {engine.stage}", file=out)
    for rec in engine.state.trace:
        print(f"{rec.stage} {to_sexpr(engine.wff(rec.added))} q={fmt(rec.q)}", file=out)
    return OK


def cmd_query(args, out) -> int:
    sig, oracle, _ = _inputs(args)
    hsig = HenkinSignature(sig)
    points = parse_points(args.terms, hsig)
    atom = Atomic(args.pred, tuple(points))
    hsig.check_wff(atom)
    theta, order = _engine_enumeration(args, hsig, [atom])
    h = PresentationHandle(oracle, hsig, theta=theta, pair_order=order,
                           stage_budget=args.stage_budget)
    try:
        r = h.query_predicate(args.pred, points, args.prec)
    finally:
        _write_name_log(args, oracle)
    print(r, file=out)
    if args.stats is not None:
        stats = (f"stage {r.stage}\nM {r.M}\noracle calls {r.oracle_calls}\n"
                 f"name reads {len(h.name_log)}\nundecided {' '.join(map(fmt, r.undecided)) or '-'}\n")
        if args.stats == "-":
            out.write(stats)
        else:
            Path(args.stats).write_text(stats)
    return OK


# -- argument parsing ----------------------------------------------------------------


def _source_args(p: argparse.ArgumentParser):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--model", help="structure file or bundled model name (e.g. twopoint)")
    src.add_argument("--name", help="name stream file (one natural per line); needs --sig")
    p.add_argument("--sig", help="signature file (with --name)")
    p.add_argument("--name-budget", type=int, default=1 << 16,
                   help="stream positions read per name request (default 65536)")
    p.add_argument("--enumeration", choices=("canonical", "test"), default="test",
                   help="wff and pair enumeration (default test)")
    p.add_argument("--name-log", help="write the name triples consumed, one per line")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cfol", description="Exact continuous first-order logic.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse and print wffs in normal form")
    p.add_argument("wff", nargs="?")
    p.add_argument("--file")
    p.add_argument("--sig")
    p.add_argument("--model")
    p.add_argument("--expand", action="store_true", help="print the core expansion")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("validate", help="check a structure against its signature")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("eval", help="evaluate a wff in a finite structure")
    p.add_argument("wff")
    p.add_argument("--model", default="twopoint", help="default: the bundled twopoint model")
    p.add_argument("--assign", help="e.g. 0=a,1=b (unlisted variables take the first element)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("check-proof", help="check a proof file")
    p.add_argument("--proof", required=True)
    p.add_argument("--premises")
    p.add_argument("--sig")
    p.add_argument("--model")
    p.set_defaults(func=cmd_check_proof)

    p = sub.add_parser("make-name", help="dump a prefix of the name of Th(M)")
    p.add_argument("--model", required=True)
    p.add_argument("--length", type=int, default=100)
    p.add_argument("--out")
    p.set_defaults(func=cmd_make_name)

    p = sub.add_parser("complete", help="run the staged completion")
    _source_args(p)
    p.add_argument("--stages", type=int, required=True)
    p.add_argument("--prec", type=int, default=1, help="dyadics placed first by --enumeration test")
    p.add_argument("--trace")
    p.add_argument("--stats")
    p.add_argument("--resume", help="state file written by an earlier --trace")
    p.add_argument("--pair-budget", type=int, default=1_000_000)
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("query", help="approximate P(t1..tn) in the Henkin presentation")
    _source_args(p)
    p.add_argument("--pred", required=True)
    p.add_argument("--terms", required=True, help='points separated by ";", e.g. "c_a;c_b"')
    p.add_argument("--prec", type=int, required=True)
    p.add_argument("--stage-budget", type=int, default=DESK_STAGE_BUDGET)
    p.add_argument("--stats", nargs="?", const="-", help="print statistics, or write them to a file")
    p.set_defaults(func=cmd_query)
    return ap


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    for knob in ("stages", "prec", "length", "stage_budget", "name_budget", "pair_budget"):
        if getattr(args, knob, 0) is not None and getattr(args, knob, 0) < 0:
            ap.print_usage(sys.stderr)
            print(f"cfol: --{knob.replace('_', '-')} must be a natural number", file=sys.stderr)
            return USAGE
    try:
        return args.func(args, out)
    except (NameTimeout, CompletionTimeout, QueryTimeout) as exc:
        print(f"cfol: timeout: {exc}", file=sys.stderr)
        return TIMEOUT
    except (DomainError, ParseError, SignatureError, StructureError, EvaluationError, ValueError) as exc:
        print(f"cfol: error: {exc}", file=sys.stderr)
        return DOMAIN


if __name__ == "__main__":
    sys.exit(main())
