"""JSON encoding of matrices, automata and problem instances.

Matrix entries are serialized as decimal strings so arbitrarily large
integers survive readers that would overflow or silently round; parsing
accepts plain ints as well. Every structure emitted here parses back to an
equal value.
"""

from __future__ import annotations

import json
from typing import Any

from . import nfa as _nfa
from .mat2 import Mat2
from .nfa import Nfa
from .solver import ChainEquation, ProblemInstance

REGULAR_SET_SEMANTICS = "GL2Z-words"


class InputError(ValueError):
    """Malformed or out-of-contract input; the CLI maps this to exit 2."""


def _int_from(v: Any, where: str) -> int:
    if isinstance(v, bool):
        raise InputError(f"{where}: expected an integer, got a boolean")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v, 10)
        except ValueError:
            raise InputError(f"{where}: not a decimal integer: {v!r}") from None
    raise InputError(f"{where}: expected an integer or decimal string, got {type(v).__name__}")


def matrix_to_obj(m: Mat2) -> list[list[str]]:
    return [[str(m.a11), str(m.a12)], [str(m.a21), str(m.a22)]]


def matrix_from_obj(obj: Any, where: str = "matrix") -> Mat2:
    if (
        not isinstance(obj, list)
        or len(obj) != 2
        or any(not isinstance(row, list) or len(row) != 2 for row in obj)
    ):
        raise InputError(f"{where}: expected [[a11,a12],[a21,a22]]")
    return Mat2(
        _int_from(obj[0][0], where),
        _int_from(obj[0][1], where),
        _int_from(obj[1][0], where),
        _int_from(obj[1][1], where),
    )


def automaton_to_obj(a: Nfa) -> dict:
    out = _nfa.to_json(a)
    out["semantics"] = REGULAR_SET_SEMANTICS
    return out


def automaton_from_obj(obj: Any, where: str = "automaton") -> Nfa:
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object")
    sem = obj.get("semantics", REGULAR_SET_SEMANTICS)
    if sem != REGULAR_SET_SEMANTICS:
        raise InputError(f"{where}: unsupported semantics {sem!r}")
    for key in ("states", "initial", "final", "transitions"):
        if key not in obj:
            raise InputError(f"{where}: missing field {key!r}")
    n = _int_from(obj["states"], f"{where}.states")
    try:
        trans = []
        for t in obj["transitions"]:
            label = t["label"]
            if label not in ("eps", "X", "N", "S", "R"):
                raise InputError(f"{where}: bad transition label {label!r}")
            trans.append(
                (
                    _int_from(t["from"], where),
                    None if label == "eps" else label,
                    _int_from(t["to"], where),
                )
            )
        initial = [_int_from(q, where) for q in obj["initial"]]
        final = [_int_from(q, where) for q in obj["final"]]
        return _nfa.make_nfa(n, trans, initial, final)
    except InputError:
        raise
    except (TypeError, KeyError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from None


def instance_to_obj(p: ProblemInstance) -> dict:
    return {
        "generators": [matrix_to_obj(g) for g in p.generators],
        "target": matrix_to_obj(p.target),
    }


def instance_from_obj(obj: Any) -> ProblemInstance:
    if not isinstance(obj, dict) or "generators" not in obj or "target" not in obj:
        raise InputError('instance: expected {"generators": [...], "target": ...}')
    gens_obj = obj["generators"]
    if not isinstance(gens_obj, list):
        raise InputError("instance.generators: expected a list of matrices")
    gens = tuple(
        matrix_from_obj(g, f"instance.generators[{i}]") for i, g in enumerate(gens_obj)
    )
    target = matrix_from_obj(obj["target"], "instance.target")
    for i, g in enumerate(gens):
        if g.det() == 0:
            raise InputError(f"instance.generators[{i}]: singular generator")
    return ProblemInstance(generators=gens, target=target)


def chain_to_obj(eq: ChainEquation) -> dict:
    return {
        "sets": [automaton_to_obj(a) for a in eq.sets],
        "matrices": [matrix_to_obj(m) for m in eq.matrices],
        "target": matrix_to_obj(eq.target),
    }


def chain_from_obj(obj: Any) -> ChainEquation:
    if (
        not isinstance(obj, dict)
        or "sets" not in obj
        or "matrices" not in obj
        or "target" not in obj
    ):
        raise InputError('chain: expected {"sets": [...], "matrices": [...], "target": ...}')
    sets_obj, mats_obj = obj["sets"], obj["matrices"]
    if not isinstance(sets_obj, list) or not isinstance(mats_obj, list):
        raise InputError("chain: sets and matrices must be lists")
    sets = tuple(automaton_from_obj(a, f"chain.sets[{i}]") for i, a in enumerate(sets_obj))
    mats = tuple(matrix_from_obj(m, f"chain.matrices[{i}]") for i, m in enumerate(mats_obj))
    if len(sets) != len(mats) + 1:
        raise InputError("chain: need exactly one more set than matrices")
    for i, m in enumerate(mats):
        if m.det() == 0:
            raise InputError(f"chain.matrices[{i}]: singular matrix")
    return ChainEquation(sets=sets, matrices=mats, target=matrix_from_obj(obj["target"], "chain.target"))


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
