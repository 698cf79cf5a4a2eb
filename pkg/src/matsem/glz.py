"""Automata denoting sets of invertible 2x2 integer matrices.

A word over X N S R stands for the product of the four generator matrices
(see words.PHI), so an automaton over that alphabet denotes the set of
matrices its accepted words multiply out to. This module provides the
constructions that make such sets usable as first-class values:

  canonicalize_automaton  rebuild so exactly the canonical words survive,
                          one per denoted matrix
  member                  does a given matrix belong to the denoted set
  semigroup_subset        all products of a finite list of matrices
  invert_automaton        elementwise inverse of the denoted set
  conjugate_automaton     elementwise D^-1 M D for diagonal D, keeping the
                          integer matrices only
  coset_automaton         words whose image has lower-left entry divisible
                          by n

Canonicalization runs in three stages mirroring the word-level normalize():
hoist reflection letters N to the front, shorten S/R/X power runs, hoist
sign flips X to the front. Each stage is exact on languages, so the result
accepts precisely the canonical words of the denoted matrices.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd

from . import nfa as _nfa
from .mat2 import IDENTITY, Mat2, NotUnimodular, inverse_unimodular
from .nfa import Nfa
from .words import N_CONJUGATE, PHI, SHORTENING_RULES, matrix_to_canonical_word


class InvalidDiagonal(ValueError):
    """Conjugation needs diag(d1, d2) with 0 < d1 and d1 | d2."""


_INVERSE_WORD = {"X": "X", "N": "N", "S": "SSS", "R": "RRRRR"}


def factor_avoiding_dfa(patterns) -> Nfa:
    """Complete DFA of words containing none of the given factors.

    States are the viable pattern prefixes (longest suffix of the input read
    so far that could still grow into a pattern); a letter completing some
    pattern has no transition. Every state is accepting.
    """
    patterns = tuple(patterns)
    prefixes = {p[:i] for p in patterns for i in range(len(p))} | {""}
    states = [""]
    index = {"": 0}
    trans = []
    i = 0
    while i < len(states):
        s = states[i]
        for a in _nfa.LETTERS:
            cand = s + a
            if any(cand.endswith(p) for p in patterns):
                continue
            nxt = next(cand[k:] for k in range(len(cand) + 1) if cand[k:] in prefixes)
            if nxt not in index:
                index[nxt] = len(states)
                states.append(nxt)
            trans.append((i, a, index[nxt]))
        i += 1
    return _nfa.make_nfa(len(states), trans, [0], range(len(states)))


# Words already in canonical shape: optional N, optional X, then a body over
# S and R with no SS and no RRR. Coincides with words.is_canonical.
CANONICAL_DFA = _nfa.intersect(
    factor_avoiding_dfa(("SS", "RRR")),
    factor_avoiding_dfa(("NN", "XN", "SN", "RN", "XX", "SX", "RX")),
)

_SHORTENED_DFA = factor_avoiding_dfa(tuple(pat for pat, _ in SHORTENING_RULES))


def hoist_reflections(a: Nfa) -> Nfa:
    """Rebuild so each accepted word carries its N's as one optional leading N.

    For each input word, every letter sitting after an odd number of N's
    (counted from the far end) is replaced by its N-conjugate and the N's
    themselves collapse to a single leading N when their total is odd. The
    output accepts exactly the images of the input words. Each state tracks
    the parity of N's still ahead, which must be even at the finals.
    """
    a = _nfa.trim(a)
    if a.is_empty():
        return _nfa.EMPTY
    index: dict[object, int] = {}
    trans: list[tuple[int, str | None, int]] = []

    def state(key) -> int:
        if key not in index:
            index[key] = len(index)
        return index[key]

    def path(src: int, word: str, dst: int) -> None:
        if not word:
            trans.append((src, None, dst))
            return
        cur = src
        for ch in word[:-1]:
            nxt = state(("mid", len(trans), ch))
            trans.append((cur, ch, nxt))
            cur = nxt
        trans.append((cur, word[-1], dst))

    head = state(("head",))
    initial = [head]
    initial.extend(state((q, 0)) for q in a.initial)
    for q in a.initial:
        trans.append((head, "N", state((q, 1))))
    for src, label, dst in a.transitions:
        for rem in (0, 1):
            here = state((src, rem))
            if label is None:
                trans.append((here, None, state((dst, rem))))
            elif label == "N":
                trans.append((here, None, state((dst, 1 - rem))))
            elif rem == 1:
                path(here, N_CONJUGATE[label], state((dst, 1)))
            else:
                trans.append((here, label, state((dst, 0))))
    final = [state((q, 0)) for q in a.final]
    return _nfa.compact(_nfa.make_nfa(len(index), trans, initial, final))


def reduce_powers(a: Nfa) -> Nfa:
    """Keep, for each accepted word, its descendants under the shortening
    rules, then restrict to the fully shortened ones."""
    closed = _nfa.close_paths_many(_nfa.compact(a), SHORTENING_RULES)
    return _nfa.intersect(closed, _SHORTENED_DFA)


def hoist_sign_flips(a: Nfa) -> Nfa:
    """Rebuild so the X's of each accepted word collapse onto one optional X
    right after the optional leading N.

    X commutes with everything and squares away, so the image word is the
    input with X's removed and one X up front when their count was odd. The
    input must use N only as a first letter.
    """
    a = _nfa.eliminate_epsilon(_nfa.trim(a))
    if a.is_empty():
        return _nfa.EMPTY
    entered = {dst for _, _, dst in a.transitions}
    if any(label == "N" and src in entered for src, label, _ in a.transitions):
        raise ValueError("an N edge is reachable after the first letter")

    index: dict[object, int] = {}
    trans: list[tuple[int, str | None, int]] = []

    def state(key) -> int:
        if key not in index:
            index[key] = len(index)
        return index[key]

    start = state(("start",))
    for q in a.initial:
        trans.append((start, None, state((q, 0))))
        trans.append((start, "X", state((q, 1))))
    n_edges = [(s, d) for s, label, d in a.transitions if label == "N" and s in a.initial]
    if n_edges:
        after_n = state(("after_n",))
        trans.append((start, "N", after_n))
        for _, d in n_edges:
            trans.append((after_n, None, state((d, 0))))
            trans.append((after_n, "X", state((d, 1))))
    for src, label, dst in a.transitions:
        if label == "N":
            continue
        for rem in (0, 1):
            here = state((src, rem))
            if label == "X":
                trans.append((here, None, state((dst, 1 - rem))))
            else:
                trans.append((here, label, state((dst, rem))))
    final = [state((q, 0)) for q in a.final]
    return _nfa.compact(_nfa.make_nfa(len(index), trans, initial=[start], final=final))


_RULE_STEPS = tuple((tuple(pat), rep) for pat, rep in SHORTENING_RULES)


def _shorten_word(word: str) -> str:
    """Greedy fixed point of the shortening rules on a single word."""
    stack: list[str] = []
    for ch in word:
        stack.append(ch)
        while True:
            for pat, rep in _RULE_STEPS:
                if len(stack) >= len(pat) and tuple(stack[-len(pat):]) == pat:
                    del stack[-len(pat):]
                    stack.extend(rep)
                    break
            else:
                break
    return "".join(stack)


def _shorten_segments(a: Nfa) -> Nfa:
    """Rewrite each maximal unbranched run of letter edges to the shortened
    form of its word.

    Word-for-word this changes the language, but each replacement denotes the
    same matrix, so any phi-level consumer is unaffected. Runs containing an
    N are kept verbatim, which preserves N-only-first-letter shapes. Useful
    before the closure stages: conjugation and reflection hoisting leave long
    runs full of local cancellations that are cheaper to remove on the word.
    """
    a = _nfa.eliminate_epsilon(_nfa.trim(a))
    indeg = [0] * a.num_states
    outdeg = [0] * a.num_states
    out: list[list[tuple[str, int]]] = [[] for _ in range(a.num_states)]
    for s, l, d in a.transitions:
        indeg[d] += 1
        outdeg[s] += 1
        out[s].append((l, d))
    interior = [
        indeg[q] == 1 and outdeg[q] == 1 and q not in a.initial and q not in a.final
        for q in range(a.num_states)
    ]
    edges: list[tuple[int, str | None, int]] = []
    fresh = a.num_states
    for s in range(a.num_states):
        if interior[s]:
            continue
        for label, dst in out[s]:
            run = [label]
            cur = dst
            while interior[cur]:
                nxt_label, cur = out[cur][0]
                run.append(nxt_label)
            word = "".join(run)
            if "N" not in word:
                word = _shorten_word(word)
            if not word:
                edges.append((s, None, cur))
                continue
            prev = s
            for ch in word[:-1]:
                edges.append((prev, ch, fresh))
                prev = fresh
                fresh += 1
            edges.append((prev, word[-1], cur))
    return _nfa.trim(_nfa.make_nfa(fresh, edges, a.initial, a.final))


@lru_cache(maxsize=None)
def canonicalize_automaton(a: Nfa) -> Nfa:
    """Automaton accepting exactly the canonical words of the denoted set."""
    a = _shorten_segments(_nfa.compact(a))
    h = _shorten_segments(hoist_reflections(a))
    c = _nfa.compact(hoist_sign_flips(reduce_powers(h)))
    # Canonical-word languages tend to determinize to far fewer states, and
    # every consumer of this result pays per state; keep whichever is smaller.
    d = _nfa.to_min_dfa(c, cap=4 * c.num_states + 64)
    if d is not None and d.num_states < c.num_states:
        return d
    return c


def member(a: Nfa, m: Mat2) -> bool:
    """Does the matrix belong to the set the automaton denotes?"""
    if m.det() not in (1, -1):
        return False
    return canonicalize_automaton(a).accepts(matrix_to_canonical_word(m))


def semigroup_subset(mats) -> Nfa:
    """Automaton for all finite products (including the empty one) of the
    given determinant +-1 matrices."""
    words = []
    for m in mats:
        if m.det() not in (1, -1):
            raise NotUnimodular(f"determinant {m.det()} matrix in generator list")
        words.append(matrix_to_canonical_word(m))
    return _nfa.star_of_words(words)


def invert_automaton(a: Nfa) -> Nfa:
    """Reverse the automaton, replacing each letter by its inverse word.

    Accepts exactly {invert_word(w) : w accepted}, so it denotes the
    elementwise inverses of the input's matrices.
    """
    n = a.num_states
    trans: list[tuple[int, str | None, int]] = []
    extra = n

    def path(src: int, word: str, dst: int) -> None:
        nonlocal extra
        cur = src
        for ch in word[:-1]:
            trans.append((cur, ch, extra))
            cur = extra
            extra += 1
        trans.append((cur, word[-1], dst))

    for src, label, dst in a.transitions:
        if label is None:
            trans.append((dst, None, src))
        else:
            path(dst, _INVERSE_WORD[label], src)
    return _nfa.make_nfa(extra, trans, initial=a.final, final=a.initial)


# --- cosets of the subgroup H(n) = {m : n divides m.a21} ---------------------


def _p1_classes(n: int):
    """Projective classes of primitive pairs mod n.

    Returns (reps, classof): reps lists one minimal pair per class with
    (0, 1) first, classof maps every primitive pair to its class index.
    """
    units = [u for u in range(n) if gcd(u, n) == 1]
    classof: dict[tuple[int, int], int] = {}
    reps: list[tuple[int, int]] = []
    for c in range(n):
        for d in range(n):
            if gcd(gcd(c, d), n) != 1 or (c, d) in classof:
                continue
            orbit = {((u * c) % n, (u * d) % n) for u in units}
            idx = len(reps)
            reps.append(min(orbit))
            for pair in orbit:
                classof[pair] = idx
    if n == 1:
        return [(0, 1)], {(0, 0): 0}
    assert classof[(0, 1)] == 0  # scan order puts the subgroup's own class first
    return reps, classof


def _lift_primitive(c: int, d: int, n: int) -> tuple[int, int]:
    """A coprime integer pair congruent to (c, d) mod n."""
    if c == 0 and d == 0:
        return (0, 1)
    for k in range(n + 2):
        if gcd(c, d + k * n) == 1:
            return (c, d + k * n)
    raise AssertionError("no coprime lift found")


@lru_cache(maxsize=None)
def _coset_data(n: int):
    if n < 1:
        raise ValueError("modulus must be positive")
    reps_pairs, classof = _p1_classes(n)
    mats = []
    for c, d in reps_pairs:
        c0, d0 = _lift_primitive(c, d, n)
        g, x, y = _xgcd(c0, d0)
        assert g == 1
        mats.append(Mat2(y, -x, c0, d0))
    assert mats[0] == IDENTITY
    return tuple(mats), classof


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def right_coset_reps(n: int) -> tuple[Mat2, ...]:
    """Representatives U_j of the partition into sets H(n) U_j, U_0 = I.

    A matrix lies in H(n) U_j exactly when its bottom row is a unit multiple
    of U_j's bottom row mod n.
    """
    return _coset_data(n)[0]


def left_coset_reps(n: int) -> tuple[Mat2, ...]:
    """Representatives of the partition into sets U H(n), U_0 = I."""
    return tuple(inverse_unimodular(u) for u in _coset_data(n)[0])


def coset_index(n: int, m: Mat2) -> int:
    """The j with m in H(n) U_j. Requires determinant +-1."""
    if m.det() not in (1, -1):
        raise NotUnimodular(f"determinant {m.det()}")
    if n == 1:
        return 0
    return _coset_data(n)[1][(m.a21 % n, m.a22 % n)]


@lru_cache(maxsize=None)
def coset_automaton(n: int) -> Nfa:
    """Complete DFA accepting the words whose image lies in H(n).

    State j tracks which coset H(n) U_j the prefix image lies in; state 0
    (the subgroup itself) is initial and final.
    """
    reps, _ = _coset_data(n)
    trans = []
    for j, u in enumerate(reps):
        for letter, mat in PHI.items():
            trans.append((j, letter, coset_index(n, u * mat)))
    return _nfa.make_nfa(len(reps), trans, [0], [0])


def conjugate_automaton(a: Nfa, d: Mat2) -> Nfa:
    """Automaton denoting {D^-1 M D : M denoted by a, D^-1 M D integral}.

    D must be diag(d1, d2) with 0 < d1 | d2; only n = d2/d1 matters since
    scalars cancel. Conjugation multiplies the upper-right entry by n and
    divides the lower-left by n, so the integral survivors are the matrices
    in H(n). The input automaton runs in product with the H(n) coset tracker
    and each step emits the canonical word of the conjugated step matrix:
    with P_k the prefix image and U_{j_k} its coset representative, the step
    matrix U_{j_{k-1}} phi(letter) U_{j_k}^-1 lies in H(n), its conjugate is
    integral, and the step matrices multiply back to M when the run ends in
    coset 0.
    """
    if d.a12 != 0 or d.a21 != 0 or d.a11 <= 0 or d.a22 <= 0 or d.a22 % d.a11 != 0:
        raise InvalidDiagonal(f"not a positive divisibility diagonal: {d!r}")
    n = d.a22 // d.a11
    a = _nfa.eliminate_epsilon(_nfa.trim(a))
    if a.is_empty():
        return _nfa.EMPTY
    reps, _ = _coset_data(n)
    inv_reps = [inverse_unimodular(u) for u in reps]

    index: dict[object, int] = {}
    trans: list[tuple[int, str | None, int]] = []

    def state(key) -> int:
        if key not in index:
            index[key] = len(index)
        return index[key]

    def path(src: int, word: str, dst: int) -> None:
        if not word:
            trans.append((src, None, dst))
            return
        cur = src
        for pos, ch in enumerate(word[:-1]):
            nxt = state(("mid", len(trans), pos))
            trans.append((cur, ch, nxt))
            cur = nxt
        trans.append((cur, word[-1], dst))

    for q in a.initial:
        state((q, 0))
    todo = [key for key in index]
    seen = set(todo)
    while todo:
        q, j = todo.pop()
        here = index[(q, j)]
        for label, dst in a._out[q]:
            j2 = coset_index(n, reps[j] * PHI[label])
            step = reps[j] * PHI[label] * inv_reps[j2]
            assert step.a21 % n == 0
            conj = Mat2(step.a11, step.a12 * n, step.a21 // n, step.a22)
            if (dst, j2) not in seen:
                seen.add((dst, j2))
                state((dst, j2))
                todo.append((dst, j2))
            path(here, matrix_to_canonical_word(conj), state((dst, j2)))
    initial = [index[(q, 0)] for q in a.initial]
    final = [index[(q, 0)] for q in a.final if (q, 0) in index]
    return _nfa.trim(_nfa.make_nfa(len(index), trans, initial, final))
