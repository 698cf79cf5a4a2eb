"""Membership decision for finitely generated semigroups of integer matrices.

The driver question: is the target matrix a product (possibly empty) of the
given nonsingular generators? Unimodular generators contribute a regular set
of words; each |det| >= 2 generator can appear only finitely often because
determinants multiply, so the target factors as

    A_1 G_1 A_2 G_2 ... A_t G_t A_{t+1} = target

with the G's drawn from the |det| >= 2 generators and each A_i from the
semigroup of the unimodular ones. Such chain equations are decided through
automata: the unknowns trailing a fixed matrix are eliminated one at a time
by Smith decomposition, diagonal conjugation and a finite split over cosets
of the divisibility subgroup H(n), leaving a regular language whose words
denote the inverses of the viable last factors.
"""

from __future__ import annotations

import time
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass
from functools import lru_cache

from . import nfa as _nfa
from .glz import (
    canonicalize_automaton,
    conjugate_automaton,
    coset_index,
    invert_automaton,
    left_coset_reps,
    member,
    semigroup_subset,
)
from .mat2 import IDENTITY, Mat2, inverse_unimodular, smith_normal_form
from .nfa import Nfa
from .oracle import bfs_products, meet_in_middle_witness
from .words import matrix_to_canonical_word


class SingularGenerator(ValueError):
    """Generators must be nonsingular."""


class SolverTimeout(Exception):
    """Deadline hit; .progress reports how far the search got."""

    def __init__(self, progress: dict):
        super().__init__(f"deadline exceeded after {progress.get('sequences_tried', 0)} sequences")
        self.progress = progress


@dataclass(frozen=True)
class ProblemInstance:
    generators: tuple[Mat2, ...]
    target: Mat2

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if g.det() == 0:
                raise SingularGenerator(f"singular generator {g!r}")


@dataclass(frozen=True)
class ChainEquation:
    """A_1 M_1 A_2 M_2 ... M_{t-1} A_t = target, A_i ranging over the
    matrix sets the automata in `sets` denote."""

    sets: tuple[Nfa, ...]
    matrices: tuple[Mat2, ...]
    target: Mat2

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(self.sets))
        object.__setattr__(self, "matrices", tuple(self.matrices))
        if len(self.sets) != len(self.matrices) + 1:
            raise ValueError("need exactly one more set than matrices")
        for m in self.matrices:
            if m.det() == 0:
                raise ValueError(f"singular chain matrix {m!r}")


def _word_automaton(m: Mat2) -> Nfa:
    return _nfa.word_nfa(matrix_to_canonical_word(m))


@lru_cache(maxsize=None)
def build_F_base(a1: Nfa, m1: Mat2, m2: Mat2) -> Nfa:
    """Words w such that phi(w1) m1 phi(w)^-1 = m2 for some w1 in L(a1).

    Peeling both Smith decompositions m_i = E_i D F_i turns the equation
    A1 m1 A2 = m2 into B1 D B2 = D with B1 = E2^-1 A1 E1, which forces
    B2 = (B1^-1) conjugated by D; so the answers are exactly
    F2^-1 (B1 conjugated by D) F1 for the B1 whose conjugate is integral.
    Distinct Smith forms admit no solution at all.
    """
    if m1.det() == 0 or m2.det() == 0:
        raise ValueError("chain matrices must be nonsingular")
    s1 = smith_normal_form(m1)
    s2 = smith_normal_form(m2)
    if s1.D != s2.D:
        return _nfa.EMPTY
    inner = _nfa.concat(
        _word_automaton(inverse_unimodular(s2.E)), a1, _word_automaton(s1.E)
    )
    # Conjugation expands every edge into a word-length path, so shrink the
    # input to its canonical form first; only the matrix set matters to it.
    conj = conjugate_automaton(canonicalize_automaton(inner), s1.D)
    full = _nfa.concat(
        _word_automaton(inverse_unimodular(s2.F)), conj, _word_automaton(s1.F)
    )
    return canonicalize_automaton(_nfa.trim(full))


@lru_cache(maxsize=None)
def _chain_automaton(sets: tuple[Nfa, ...], mats: tuple[Mat2, ...], target: Mat2) -> Nfa:
    if target.det() == 0:
        return _nfa.EMPTY
    if len(mats) == 1:
        return build_F_base(sets[0], mats[0], target)
    snf = smith_normal_form(mats[-1])
    n = snf.t2 // snf.t1
    parts = []
    for u in left_coset_reps(n):
        ud = u * snf.D
        inner = build_F_base(sets[-1], mats[-1], ud)
        if inner.is_empty():
            continue
        outer = _chain_automaton(sets[:-1], mats[:-2] + (mats[-2] * ud,), target)
        if outer.is_empty():
            continue
        # canonicalizing per branch keeps each pipeline run small, and the
        # union of canonical languages is already canonical
        parts.append(canonicalize_automaton(_nfa.trim(_nfa.concat(outer, inner))))
    if not parts:
        return _nfa.EMPTY
    merged = _nfa.compact(_nfa.union(parts))
    d = _nfa.to_min_dfa(merged, cap=4 * merged.num_states + 64)
    if d is not None and d.num_states < merged.num_states:
        return d
    return merged


def build_F_chain(sets, mats, target: Mat2) -> Nfa:
    """Words w with phi(w1) M_1 ... phi(w_{t-1}) M_{t-1} phi(w)^-1 = target
    for some w_i in L(sets[i]).

    Recursion over the last matrix: writing A M A' with M = E D F and
    splitting A E over the finitely many cosets U H(n) of the divisibility
    subgroup reduces the tail to a fresh base equation with target U D,
    gluing U D onto the preceding matrix; the union over representatives U
    is exhaustive.
    """
    sets = tuple(sets)
    mats = tuple(mats)
    if not (len(sets) == len(mats) >= 1):
        raise ValueError("need as many sets as matrices, at least one")
    for m in mats:
        if m.det() == 0:
            raise ValueError(f"singular chain matrix {m!r}")
    return _chain_automaton(sets, mats, target)


def decide_chain(eq: ChainEquation, coset_hints=None, deadline=None) -> bool:
    """Is the chain equation solvable with each A_i in its allowed set?

    The construction leaves the final unknown free and produces the words
    denoting its inverse, so solvability is a nonempty intersection between
    those words and the canonical words of the last set's inverses. Both
    sides are canonicalized, making equal matrices collide on equal words.

    coset_hints, when given, holds one unimodular matrix per chain matrix:
    a candidate value of the unknown standing directly left of it. Hints
    only reorder the branch exploration; the answer never depends on them.

    deadline is a time.monotonic() timestamp; past it, SolverTimeout is
    raised. The clock is polled between automaton builds, so cancellation
    lags by at most the single build in flight.
    """

    def poll():
        if deadline is not None and time.monotonic() > deadline:
            raise SolverTimeout({"stage": "chain"})

    t = len(eq.sets)
    target = eq.target
    if t == 1:
        if abs(target.det()) != 1:
            return False
        return member(eq.sets[0], target)
    if target.det() == 0:
        return False
    poll()
    inv_can = canonicalize_automaton(invert_automaton(eq.sets[-1]))
    if t == 2:
        poll()
        f = build_F_base(eq.sets[0], eq.matrices[0], target)
        poll()
        return _nfa.intersect_nonempty(f, inv_can)
    # depth-first over the coset splits of _chain_automaton, testing each
    # fully resolved branch right away: a solvable instance rarely needs the
    # whole union, and every base automaton built here is cached anyway.
    # Finished factors are folded into the inverse side (X Y meets Z exactly
    # when X meets Z Y^-1), so the leaf test intersects two automata that
    # are already canonical instead of canonicalizing one more concatenation.
    # The inverse of a factor's solution set is itself a base equation over
    # the inverted A-set, so folds never pay for automaton inversion either.
    sets_f = eq.sets[:-1]
    inv_sets: dict[int, Nfa] = {}

    def inv_set(i: int) -> Nfa:
        got = inv_sets.get(i)
        if got is None:
            got = inv_sets[i] = canonicalize_automaton(invert_automaton(sets_f[i]))
        return got

    def search(mats: tuple[Mat2, ...], racc: Nfa) -> bool:
        poll()
        if len(mats) == 1:
            f = build_F_base(sets_f[0], mats[0], target)
            return _nfa.intersect_nonempty(f, racc)
        snf = smith_normal_form(mats[-1])
        n = snf.t2 // snf.t1
        hint_u = None
        if coset_hints is not None:
            # the hinted unknown a solves the level iff a*E lands in u*H(n),
            # so that branch is worth exploring before any other
            hint_u = left_coset_reps(n)[
                coset_index(n, inverse_unimodular(coset_hints[len(mats) - 1] * snf.E))]
        branches = []
        for u in left_coset_reps(n):
            ud = u * snf.D
            fused = mats[-2] * ud
            fsnf = smith_normal_form(fused)
            # one level down the fused matrix feeds the leaf, whose automaton
            # is empty unless the Smith forms agree: prune before any build
            if len(mats) == 2 and fsnf.D != smith_normal_form(target).D:
                continue
            # hinted branch first, then small fused Smith ratios: those have
            # few cosets below, and a solvable branch often sits in one
            branches.append((u != hint_u, fsnf.t2 // fsnf.t1, ud, fused))
        branches.sort(key=lambda b: b[:2])
        for _, _, ud, fused in branches:
            poll()
            # leaf emptiness is the sharper filter but needs a real build,
            # so it runs lazily: a branch solved early spares all the rest
            if len(mats) == 2 and build_F_base(sets_f[0], fused, target).is_empty():
                continue
            inv_inner = build_F_base(inv_set(len(mats) - 1), ud, mats[-1])
            if inv_inner.is_empty():
                continue
            poll()
            folded = canonicalize_automaton(
                _nfa.trim(_nfa.concat(racc, inv_inner)))
            if search(mats[:-2] + (fused,), folded):
                return True
        return False

    return search(eq.matrices, inv_can)


@dataclass
class Decision:
    member: bool
    reason: str  # "gl-membership" | "chain" | "det-obstruction" | "none"
    witness: tuple[int, ...] | None = None
    sequences_tried: int = 0


def _det_sequences(bigs, det_target: int):
    """Ordered index tuples over |det|>=2 generators whose |det|s multiply
    to det_target. Divisibility prunes the search; order matters."""
    out = []

    def rec(prefix, remaining):
        if remaining == 1:
            if prefix:
                out.append(prefix)
            return
        for idx, g, d in bigs:
            if remaining % d == 0:
                rec(prefix + (idx,), remaining // d)

    rec((), det_target)
    return out


_FILTER_MODULI = (3, 4, 5)


def _mod_reduce(m: Mat2, n: int) -> tuple[int, int, int, int]:
    return (m.a11 % n, m.a12 % n, m.a21 % n, m.a22 % n)


def _mod_saturate(seed, gmods, n: int) -> frozenset:
    """Close a set of residue matrices under right multiplication."""
    seen = set(seed)
    frontier = list(seed)
    while frontier:
        nxt = []
        for a, b, c, d in frontier:
            for p, q, r, s in gmods:
                y = ((a * p + b * r) % n, (a * q + b * s) % n,
                     (c * p + d * r) % n, (c * q + d * s) % n)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def _viable_sequences(sequences, gens, unimods, target: Mat2):
    """Orderings not ruled out by residue arithmetic.

    Reducing the chain equation mod n and widening each unimodular block to
    the closure of the unimodular generators mod n leaves a finite necessary
    condition: an ordering whose reachable residues miss the target residue
    admits no exact solution either. Shared prefixes are evaluated once."""
    keep = sequences
    for n in _FILTER_MODULI:
        if len(keep) <= 1:
            break
        gmods = tuple({_mod_reduce(g, n) for g in unimods})
        tm = _mod_reduce(target, n)
        reach = {(): _mod_saturate((_mod_reduce(IDENTITY, n),), gmods, n)}

        def residues(prefix) -> frozenset:
            got = reach.get(prefix)
            if got is None:
                p, q, r, s = _mod_reduce(gens[prefix[-1]], n)
                stepped = {
                    ((a * p + b * r) % n, (a * q + b * s) % n,
                     (c * p + d * r) % n, (c * q + d * s) % n)
                    for a, b, c, d in residues(prefix[:-1])
                }
                got = reach[prefix] = _mod_saturate(stepped, gmods, n)
            return got

        keep = [s for s in keep if tm in residues(s)]
    return keep


def _check_deadline(deadline, progress):
    if deadline is not None and time.monotonic() > deadline:
        raise SolverTimeout(dict(progress))


def decide(p: ProblemInstance, max_seconds: float | None = None, parallel: bool = False) -> Decision:
    """Full decision with reason and best-effort witness."""
    deadline = None if max_seconds is None else time.monotonic() + max_seconds
    target = p.target
    if target.det() == 0:
        return Decision(False, "det-obstruction")
    unimods = tuple(g for g in p.generators if abs(g.det()) == 1)
    bigs = [(i, g, abs(g.det())) for i, g in enumerate(p.generators) if abs(g.det()) >= 2]
    s_pm = semigroup_subset(unimods)
    dt = abs(target.det())
    if dt == 1:
        ok = member(s_pm, target)
        if ok:
            return Decision(True, "gl-membership", _witness(p, deadline))
        return Decision(False, "none")
    sequences = _det_sequences(bigs, dt)
    if not sequences:
        return Decision(False, "det-obstruction")
    sequences = _viable_sequences(sequences, p.generators, unimods, target)
    if not sequences:
        return Decision(False, "none")
    # a cheap bounded product search often recovers an explicit witness;
    # its |det|>=2 subsequence is then the one ordering worth trying first,
    # and the chain search exits on its first solved branch
    guess = meet_in_middle_witness(p.generators, target) if sequences else None
    lead = None
    hints = None
    if guess is not None:
        # the witness factors the target along one ordering; that ordering
        # goes first, and its unimodular gaps steer the branch exploration
        big_ix = {i for i, g, d in bigs}
        lead = tuple(i for i in guess if i in big_ix)
        sequences = [lead] + [s for s in sequences if s != lead]
        hints = []
        gap = IDENTITY
        for i in guess:
            if i in big_ix:
                hints.append(gap)
                gap = IDENTITY
            else:
                gap = gap * p.generators[i]
    progress = {"sequences_tried": 0, "sequences_total": len(sequences)}

    def try_sequence(seq) -> bool:
        mats = tuple(p.generators[i] for i in seq)
        eq = ChainEquation((s_pm,) * (len(mats) + 1), mats, target)
        return decide_chain(eq, hints if seq == lead else None, deadline)

    if parallel and len(sequences) > 1:
        hit = False
        with ThreadPoolExecutor(max_workers=min(8, len(sequences))) as pool:
            pending = {pool.submit(try_sequence, seq) for seq in sequences}
            while pending:
                done, pending = wait(pending, timeout=0.1, return_when=FIRST_COMPLETED)
                try:
                    for fut in done:
                        progress["sequences_tried"] += 1
                        if fut.result():
                            hit = True
                except SolverTimeout:
                    raise SolverTimeout(dict(progress)) from None
                if hit:
                    for fut in pending:
                        fut.cancel()
                    break
                _check_deadline(deadline, progress)
        if hit:
            witness = guess if guess is not None else _witness(p, deadline)
            return Decision(True, "chain", witness, progress["sequences_tried"])
    else:
        for seq in sequences:
            _check_deadline(deadline, progress)
            try:
                solved = try_sequence(seq)
            except SolverTimeout:
                raise SolverTimeout(dict(progress)) from None
            progress["sequences_tried"] += 1
            if solved:
                witness = guess if guess is not None else _witness(p, deadline)
                return Decision(True, "chain", witness, progress["sequences_tried"])
    return Decision(False, "none", None, progress["sequences_tried"])


def decide_membership(p: ProblemInstance) -> bool:
    """True iff the target lies in the semigroup generated by the
    generators, the identity included as the empty product."""
    return decide(p).member


def _witness(p: ProblemInstance, deadline) -> tuple[int, ...] | None:
    """Small-instance product witness via the oracle; None when out of reach."""
    if abs(p.target.det()) > 64 or len(p.generators) > 6 or not p.generators:
        return None if p.target != IDENTITY else ()
    if deadline is not None and time.monotonic() > deadline:
        return None
    depth = 6 if len(p.generators) <= 3 else 4
    return bfs_products(p.generators, depth).witness(p.target)
