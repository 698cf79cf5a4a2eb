import random

import pytest

from matsem import jsonio, nfa as N
from matsem.jsonio import InputError
from matsem.mat2 import Mat2, diag
from matsem.solver import ChainEquation, ProblemInstance

rng = random.Random(550)


def test_matrix_round_trip_and_decimal_strings():
    m = Mat2(10**30, -7, 0, 12345678901234567890)
    obj = jsonio.matrix_to_obj(m)
    assert obj[0][0] == str(10**30)  # strings, not ints, on the wire
    assert jsonio.matrix_from_obj(obj) == m
    # readers accept plain ints too
    assert jsonio.matrix_from_obj([[1, 2], [3, 4]]) == Mat2(1, 2, 3, 4)


def test_matrix_parse_errors():
    with pytest.raises(InputError):
        jsonio.matrix_from_obj([[1, 2], [3]])
    with pytest.raises(InputError):
        jsonio.matrix_from_obj([[1, 2], [3, "x"]])
    with pytest.raises(InputError):
        jsonio.matrix_from_obj([[1, 2], [3, True]])
    with pytest.raises(InputError):
        jsonio.matrix_from_obj("nope")


def test_automaton_round_trip():
    for _ in range(30):
        n = rng.randint(1, 5)
        trans = []
        for _ in range(rng.randint(0, 8)):
            lab = None if rng.random() < 0.2 else rng.choice("XNSR")
            trans.append((rng.randrange(n), lab, rng.randrange(n)))
        a = N.make_nfa(n, trans, [0], rng.sample(range(n), rng.randint(0, n)))
        obj = jsonio.automaton_to_obj(a)
        assert obj["semantics"] == "GL2Z-words"
        assert jsonio.automaton_from_obj(obj) == a


def test_automaton_parse_errors():
    good = jsonio.automaton_to_obj(N.word_nfa("SR"))
    bad = dict(good, semantics="bits")
    with pytest.raises(InputError):
        jsonio.automaton_from_obj(bad)
    bad = {k: v for k, v in good.items() if k != "final"}
    with pytest.raises(InputError):
        jsonio.automaton_from_obj(bad)
    bad = dict(good, transitions=[{"from": 0, "label": "Q", "to": 1}])
    with pytest.raises(InputError):
        jsonio.automaton_from_obj(bad)
    with pytest.raises(InputError):
        jsonio.automaton_from_obj(dict(good, states=0))


def test_instance_round_trip_and_validation():
    p = ProblemInstance((diag(2, 1), Mat2(1, 1, 0, 1)), Mat2(2, 2, 0, 1))
    assert jsonio.instance_from_obj(jsonio.instance_to_obj(p)) == p
    with pytest.raises(InputError):
        jsonio.instance_from_obj({"generators": [[[1, 0], [0, 0]]], "target": [[1, 0], [0, 1]]})
    with pytest.raises(InputError):
        jsonio.instance_from_obj({"target": [[1, 0], [0, 1]]})


def test_chain_round_trip_and_validation():
    eq = ChainEquation((N.word_nfa(""), N.word_nfa("S")), (diag(1, 2),), diag(1, 2))
    back = jsonio.chain_from_obj(jsonio.chain_to_obj(eq))
    assert back.sets == eq.sets and back.matrices == eq.matrices and back.target == eq.target
    obj = jsonio.chain_to_obj(eq)
    obj["matrices"] = []
    with pytest.raises(InputError):
        jsonio.chain_from_obj(obj)


def test_loads_reports_malformed_json():
    with pytest.raises(InputError):
        jsonio.loads("{not json")
    assert jsonio.loads('{"a": 1}') == {"a": 1}
