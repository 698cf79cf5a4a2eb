import itertools
import random

import pytest

from matsem import nfa as N

rng = random.Random(20260813)
LETTERS = "XNSR"


def all_words(max_len):
    for k in range(max_len + 1):
        for tup in itertools.product(LETTERS, repeat=k):
            yield "".join(tup)


def lang(a, max_len):
    return {w for w in all_words(max_len) if a.accepts(w)}


def random_nfa(max_states=5, p_eps=0.15):
    n = rng.randint(1, max_states)
    trans = []
    for _ in range(rng.randint(0, 2 * n + 3)):
        lab = None if rng.random() < p_eps else rng.choice(LETTERS)
        trans.append((rng.randrange(n), lab, rng.randrange(n)))
    init = rng.sample(range(n), rng.randint(1, n))
    fin = rng.sample(range(n), rng.randint(0, n))
    return N.make_nfa(n, trans, init, fin)


def ref_close(a, rules):
    """Round-based reference for close_paths_many: matches begin and end on
    letter edges, epsilon edges allowed between pattern letters."""
    trans = set(a.transitions)
    n = a.num_states
    while True:
        eps = {q: set() for q in range(n)}
        lab = {q: {} for q in range(n)}
        for s, l, d in trans:
            if l is None:
                eps[s].add(d)
            else:
                lab[s].setdefault(l, set()).add(d)

        def eps_star(q):
            seen = {q}
            todo = [q]
            while todo:
                c = todo.pop()
                for t in eps[c]:
                    if t not in seen:
                        seen.add(t)
                        todo.append(t)
            return seen

        new = set()
        for pat, repl in rules:
            rlab = None if repl == "" else repl
            for p in range(n):
                cur = {p}
                for i, ch in enumerate(pat):
                    nxt = set()
                    src = cur if i == 0 else set().union(*(eps_star(c) for c in cur)) if cur else set()
                    for c in src:
                        nxt |= lab[c].get(ch, set())
                    cur = nxt
                    if not cur:
                        break
                for q in cur:
                    e = (p, rlab, q)
                    if e not in trans:
                        new.add(e)
        if not new:
            break
        trans |= new
    return N.make_nfa(n, trans, a.initial, a.final)


def test_make_nfa_validation():
    with pytest.raises(ValueError):
        N.make_nfa(1, [(0, "S", 1)], [0], [0])
    with pytest.raises(ValueError):
        N.make_nfa(1, [(0, "Q", 0)], [0], [0])
    with pytest.raises(ValueError):
        N.make_nfa(0, [], [0], [])


def rand_w(k):
    return "".join(rng.choice(LETTERS) for _ in range(rng.randint(0, k)))


def test_word_union_concat():
    for _ in range(120):
        w1 = rand_w(4)
        w2 = rand_w(4)
        a, b = N.word_nfa(w1), N.word_nfa(w2)
        assert lang(a, 5) == {w1}
        assert lang(N.union([a, b]), 5) == {w1, w2}
        assert lang(N.concat(a, b), 8) == {w1 + w2}


def test_star_of_words():
    st = N.star_of_words(["XS", "R"])
    want = set()
    for k in range(6):
        for tup in itertools.product(["XS", "R"], repeat=k):
            cand = "".join(tup)
            if len(cand) <= 5:
                want.add(cand)
    assert lang(st, 5) == want
    assert lang(N.star_of_words([]), 3) == {""}


def test_language_preserving_transforms_and_min_dfa():
    for _ in range(150):
        a = random_nfa()
        L = lang(a, 4)
        for op in (N.eliminate_epsilon, N.trim, N.condense_epsilon, N.merge_equivalent, N.compact):
            assert lang(op(a), 4) == L, op.__name__
        d = N.to_min_dfa(a)
        assert d is not None and lang(d, 4) == L
        # determinism: no eps edges, single successor per (state, letter)
        seen_keys = set()
        for s, l, t in d.transitions:
            assert l is not None and (s, l) not in seen_keys
            seen_keys.add((s, l))
        assert len(d.initial) <= 1
        # minimality is a fixed point of both reducers
        assert N.merge_equivalent(d).num_states == d.num_states
        assert N.to_min_dfa(d).num_states == d.num_states
        assert a.is_empty() == (not L)
        w = a.shortest_witness()
        if L:
            assert w is not None and a.accepts(w)
            assert len(w) <= min(len(x) for x in L)
        else:
            assert w is None


def test_intersect():
    for _ in range(120):
        a, b = random_nfa(), random_nfa()
        assert lang(N.intersect(a, b), 4) == lang(a, 4) & lang(b, 4)


def test_intersect_nonempty_matches_materialized_product():
    for _ in range(200):
        a, b = random_nfa(), random_nfa()
        assert N.intersect_nonempty(a, b) == (not N.intersect(a, b).is_empty())


RULESETS = [
    [("NN", "")],
    [("SS", "X"), ("XX", "")],
    [("SXS", ""), ("XX", "")],
    [("RRR", "X"), ("RXRR", ""), ("RRXR", ""), ("RXRXR", "X"), ("XX", "")],
    [("SS", "X"), ("SXS", ""), ("RRR", "X"), ("RXRR", ""), ("RRXR", ""), ("RXRXR", "X"), ("XX", "")],
]


def test_close_paths_vs_reference():
    for _ in range(100):
        a = random_nfa(max_states=5)
        rules = rng.choice(RULESETS)
        got = N.close_paths_many(a, rules)
        ref = ref_close(a, rules)
        assert set(got.transitions) == set(ref.transitions)
        assert got.initial == ref.initial and got.final == ref.final


def test_close_paths_examples():
    g = N.close_paths(N.word_nfa("NN"), "NN", "")
    assert (0, None, 2) in g.transitions and g.accepts("")
    g = N.close_paths_many(N.word_nfa("S" * 8), [("SS", "X"), ("XX", "")])
    assert g.accepts("")
    # S^80 X X multiplies out to the identity; S^83 does not
    deep = N.word_nfa("S" * 40 + "X" + "S" * 40 + "X")
    g = N.close_paths_many(deep, [("SS", "X"), ("SXS", ""), ("XX", "")])
    assert g.accepts("")
    deep2 = N.word_nfa("S" * 41 + "X" + "S" * 40)
    g2 = N.close_paths_many(deep2, [("SS", "X"), ("SXS", ""), ("XX", "")])
    assert not g2.accepts("") and not g2.accepts("X")
    assert g2.accepts("XS") and g2.accepts("SSS")


def test_sample_accepted():
    for _ in range(40):
        a = random_nfa()
        ws = N.sample_accepted(a, 6, 20, rng)
        if a.is_empty():
            assert ws == []
        for w in ws:
            assert len(w) <= 6 and a.accepts(w)


def test_json_round_trip():
    for _ in range(40):
        a = random_nfa()
        assert N.from_json(N.to_json(a)) == a
