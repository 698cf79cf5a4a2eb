"""Command-line interface: JSON in, JSON out, one command per process.

Exit codes: 0 decision completed (either answer), 2 input error, 3 deadline
hit. Errors and timeouts still produce JSON on stdout so callers never have
to scrape stderr.
"""

from __future__ import annotations

import argparse
import sys
import threading

from . import jsonio, nfa as _nfa, solver as _solver
from .glz import canonicalize_automaton, invert_automaton, member, semigroup_subset
from .jsonio import InputError
from .mat2 import Mat2, SingularInput, smith_normal_form, inverse_unimodular
from .oracle import bfs_products
from .solver import SolverTimeout
from .words import NotInGL, matrix_to_canonical_word


def _read_payload(args) -> object:
    if args.input and args.input != "-":
        try:
            with open(args.input, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc.strerror}") from None
    else:
        text = sys.stdin.read()
    return jsonio.loads(text)


def _emit(args, obj: dict) -> None:
    text = jsonio.dumps(obj)
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_decide(args) -> dict:
    p = jsonio.instance_from_obj(_read_payload(args))
    d = _solver.decide(p, max_seconds=args.max_seconds, parallel=args.parallel)
    return {
        "member": d.member,
        "reason": d.reason,
        "witness": None if d.witness is None else list(d.witness),
    }


def _cmd_canon_word(args) -> dict:
    m = jsonio.matrix_from_obj(_read_payload(args))
    try:
        return {"word": matrix_to_canonical_word(m)}
    except NotInGL:
        raise InputError("matrix is not in GL(2,Z)") from None


def _cmd_snf(args) -> dict:
    m = jsonio.matrix_from_obj(_read_payload(args))
    try:
        s = smith_normal_form(m)
    except SingularInput:
        raise InputError("matrix is singular") from None
    return {
        "D": jsonio.matrix_to_obj(s.D),
        "E": jsonio.matrix_to_obj(s.E),
        "F": jsonio.matrix_to_obj(s.F),
    }


def _cmd_gl_member(args) -> dict:
    obj = _read_payload(args)
    p = jsonio.instance_from_obj(obj)
    bad = [i for i, g in enumerate(p.generators) if not g.is_unimodular()]
    if bad:
        raise InputError(f"instance.generators[{bad[0]}]: not in GL(2,Z)")
    if not p.target.is_unimodular():
        raise InputError("instance.target: not in GL(2,Z)")
    # group membership: close the generating set under inversion
    gens = list(p.generators)
    gens.extend(inverse_unimodular(g) for g in p.generators)
    return {"member": member(semigroup_subset(tuple(gens)), p.target)}


def _cmd_chain(args) -> dict:
    eq = jsonio.chain_from_obj(_read_payload(args))
    if args.max_seconds is None:
        return {"solvable": _solver.decide_chain(eq)}
    # decide_chain carries no deadline; a daemon worker keeps the budget
    # enforceable from outside without threading it through the recursion
    result: dict = {}
    worker = threading.Thread(
        target=lambda: result.setdefault("solvable", _solver.decide_chain(eq)),
        daemon=True,
    )
    worker.start()
    worker.join(args.max_seconds)
    if "solvable" not in result:
        raise SolverTimeout({"stage": "chain"})
    return {"solvable": result["solvable"]}


def _cmd_verify(args) -> dict:
    p = jsonio.instance_from_obj(_read_payload(args))
    d = _solver.decide(p, max_seconds=args.max_seconds, parallel=args.parallel)
    out = {
        "member": d.member,
        "reason": d.reason,
        "witness": None if d.witness is None else list(d.witness),
        "verified": None,
    }
    if not d.member:
        return out
    witness = d.witness
    if witness is None and abs(p.target.det()) <= 64 and len(p.generators) <= 6:
        witness = bfs_products(p.generators, 8).witness(p.target)
        out["witness"] = None if witness is None else list(witness)
    if witness is not None:
        prod = Mat2(1, 0, 0, 1)
        for i in witness:
            if not 0 <= i < len(p.generators):
                raise InputError(f"witness index {i} out of range")
            prod = prod * p.generators[i]
        out["verified"] = prod == p.target
    return out


def _cmd_automaton_op(args) -> dict:
    obj = _read_payload(args)
    if args.op == "intersect":
        if not isinstance(obj, dict) or "left" not in obj or "right" not in obj:
            raise InputError('intersect: expected {"left": automaton, "right": automaton}')
        left = jsonio.automaton_from_obj(obj["left"], "left")
        right = jsonio.automaton_from_obj(obj["right"], "right")
        return jsonio.automaton_to_obj(_nfa.intersect(left, right))
    a = jsonio.automaton_from_obj(obj)
    if args.op == "can":
        return jsonio.automaton_to_obj(canonicalize_automaton(a))
    if args.op == "inv":
        return jsonio.automaton_to_obj(invert_automaton(a))
    return {"empty": canonicalize_automaton(a).is_empty()}


_COMMANDS = {
    "decide": _cmd_decide,
    "canon-word": _cmd_canon_word,
    "snf": _cmd_snf,
    "gl-member": _cmd_gl_member,
    "chain": _cmd_chain,
    "verify": _cmd_verify,
    "automaton-op": _cmd_automaton_op,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matsem",
        description="Exact membership tests for semigroups of 2x2 integer matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("decide", "decide semigroup membership for a problem instance"),
        ("canon-word", "canonical word of a GL(2,Z) matrix"),
        ("snf", "Smith normal form decomposition E*D*F"),
        ("gl-member", "membership in the group generated by GL(2,Z) matrices"),
        ("chain", "solvability of a chain equation"),
        ("verify", "decide, then recheck positive answers by multiplying a witness"),
        ("automaton-op", "operations on word automata"),
    ]:
        sp = sub.add_parser(name, help=help_text)
        if name == "automaton-op":
            sp.add_argument("op", choices=["can", "inv", "intersect", "empty"])
        sp.add_argument("--input", default="-", help="input JSON path, - for stdin")
        sp.add_argument("--output", default="-", help="output JSON path, - for stdout")
        sp.add_argument("--max-seconds", type=float, default=None)
        sp.add_argument("--parallel", action="store_true")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        payload = _COMMANDS[args.command](args)
    except InputError as exc:
        _emit(args, {"error": str(exc)})
        return 2
    except (SingularInput, _solver.SingularGenerator, ValueError) as exc:
        _emit(args, {"error": str(exc)})
        return 2
    except SolverTimeout as exc:
        _emit(args, {"error": "timeout", "progress": exc.progress})
        return 3
    _emit(args, payload)
    return 0


if __name__ == "__main__":
    sys.exit(main())
