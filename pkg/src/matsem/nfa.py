"""Small NFA toolkit over the letters X, N, S, R plus epsilon.

States are 0..num_states-1; transitions are a sorted tuple of (src, label,
dst) triples with label None meaning epsilon. Automata are immutable and
hashable, so results of expensive constructions can be cached on the value.
Intersection builds the reachable part of the product lazily; determinization
is available but capped, since callers fall back to the NFA form when the
subset construction blows up.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

LETTERS = ("X", "N", "S", "R")
_VALID_LABELS = frozenset(LETTERS) | {None}

Transition = tuple[int, "str | None", int]


@dataclass(frozen=True)
class Nfa:
    num_states: int
    transitions: tuple[Transition, ...]
    initial: frozenset[int]
    final: frozenset[int]

    def __hash__(self) -> int:  # cached: automata get hashed a lot as memo keys
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.num_states, self.transitions, self.initial, self.final))
            self.__dict__["_hash"] = h
        return h

    @cached_property
    def _out(self) -> list[list[tuple[str | None, int]]]:
        adj: list[list[tuple[str | None, int]]] = [[] for _ in range(self.num_states)]
        for src, label, dst in self.transitions:
            adj[src].append((label, dst))
        return adj

    @cached_property
    def _eps_closure(self) -> list[frozenset[int]]:
        """Per-state epsilon closure (including the state itself)."""
        eps: list[list[int]] = [[] for _ in range(self.num_states)]
        for src, label, dst in self.transitions:
            if label is None:
                eps[src].append(dst)
        out = []
        for q in range(self.num_states):
            seen = {q}
            todo = [q]
            while todo:
                cur = todo.pop()
                for nxt in eps[cur]:
                    if nxt not in seen:
                        seen.add(nxt)
                        todo.append(nxt)
            out.append(frozenset(seen))
        return out

    def _closure_of(self, states) -> frozenset[int]:
        cl = self._eps_closure
        result: set[int] = set()
        for q in states:
            result |= cl[q]
        return frozenset(result)

    def accepts(self, word: str) -> bool:
        """Subset simulation with epsilon closure."""
        cur = self._closure_of(self.initial)
        for ch in word:
            if ch not in _VALID_LABELS:
                raise ValueError(f"bad letter {ch!r}")
            step: set[int] = set()
            out = self._out
            for q in cur:
                for label, dst in out[q]:
                    if label == ch:
                        step.add(dst)
            if not step:
                return False
            cur = self._closure_of(step)
        return bool(cur & self.final)

    def is_empty(self) -> bool:
        """True when no word at all is accepted."""
        seen = set(self.initial)
        todo = list(self.initial)
        while todo:
            q = todo.pop()
            if q in self.final:
                return False
            for _, dst in self._out[q]:
                if dst not in seen:
                    seen.add(dst)
                    todo.append(dst)
        return True

    def shortest_witness(self) -> str | None:
        """A shortest accepted word, or None when the language is empty.

        0/1 breadth-first search: epsilon edges cost 0, letters cost 1.
        """
        if not self.initial:
            return None
        INF = float("inf")
        dist = [INF] * self.num_states
        back: list[tuple[int, str | None] | None] = [None] * self.num_states
        dq = deque()
        for q in self.initial:
            dist[q] = 0
            dq.append(q)
        best = None
        while dq:
            q = dq.popleft()
            if q in self.final and (best is None or dist[q] < dist[best]):
                best = q
            for label, dst in self._out[q]:
                w = 0 if label is None else 1
                if dist[q] + w < dist[dst]:
                    dist[dst] = dist[q] + w
                    back[dst] = (q, label)
                    if w:
                        dq.append(dst)
                    else:
                        dq.appendleft(dst)
        if best is None:
            return None
        letters = []
        q = best
        while back[q] is not None:
            prev, label = back[q]
            if label is not None:
                letters.append(label)
            q = prev
        return "".join(reversed(letters))


def make_nfa(num_states, transitions, initial, final) -> Nfa:
    trans = sorted(
        set((int(s), l, int(d)) for s, l, d in transitions),
        key=lambda t: (t[0], t[1] or "", t[2]),
    )
    for s, l, d in trans:
        if not (0 <= s < num_states and 0 <= d < num_states):
            raise ValueError(f"transition ({s},{l},{d}) out of range")
        if l not in _VALID_LABELS:
            raise ValueError(f"bad label {l!r}")
    init = frozenset(int(q) for q in initial)
    fin = frozenset(int(q) for q in final)
    for q in init | fin:
        if not 0 <= q < num_states:
            raise ValueError(f"state {q} out of range")
    return Nfa(num_states, tuple(trans), init, fin)


EMPTY = make_nfa(1, [], [0], [])


def word_nfa(word: str) -> Nfa:
    """Automaton accepting exactly {word}."""
    n = len(word)
    return make_nfa(n + 1, [(i, word[i], i + 1) for i in range(n)], [0], [n])


def union(automata) -> Nfa:
    """Disjoint union."""
    automata = list(automata)
    if not automata:
        return EMPTY
    trans = []
    initial = []
    final = []
    offset = 0
    for a in automata:
        trans.extend((s + offset, l, d + offset) for s, l, d in a.transitions)
        initial.extend(q + offset for q in a.initial)
        final.extend(q + offset for q in a.final)
        offset += a.num_states
    return make_nfa(offset, trans, initial, final)


def concat(*automata: Nfa) -> Nfa:
    """Concatenation, linked with epsilon edges from finals to next initials."""
    if not automata:
        return word_nfa("")
    trans = []
    offset = 0
    prev_final: list[int] = []
    initial: list[int] = []
    for idx, a in enumerate(automata):
        trans.extend((s + offset, l, d + offset) for s, l, d in a.transitions)
        here_initial = [q + offset for q in a.initial]
        if idx == 0:
            initial = here_initial
        else:
            trans.extend((f, None, i) for f in prev_final for i in here_initial)
        prev_final = [q + offset for q in a.final]
        offset += a.num_states
    return make_nfa(offset, trans, initial, prev_final)


def star_of_words(words) -> Nfa:
    """Automaton for (w1 + ... + wk)*: a hub with one letter cycle per word."""
    trans = []
    nxt = 1
    for w in words:
        if not w:
            continue
        prev = 0
        for i, ch in enumerate(w):
            target = 0 if i == len(w) - 1 else nxt
            if target != 0:
                nxt += 1
            trans.append((prev, ch, target))
            prev = target
    return make_nfa(max(nxt, 1), trans, [0], [0])


def eliminate_epsilon(a: Nfa) -> Nfa:
    """Equivalent automaton with no epsilon transitions."""
    closures = a._eps_closure
    labeled: list[list[tuple[str, int]]] = [[] for _ in range(a.num_states)]
    for s, l, d in a.transitions:
        if l is not None:
            labeled[s].append((l, d))
    trans = set()
    final = set()
    for q in range(a.num_states):
        if closures[q] & a.final:
            final.add(q)
        for mid in closures[q]:
            for l, d in labeled[mid]:
                trans.add((q, l, d))
    return make_nfa(a.num_states, trans, a.initial, final)


def trim(a: Nfa) -> Nfa:
    """Drop states not on some path from an initial to a final state."""
    fwd = set(a.initial)
    todo = list(a.initial)
    out = a._out
    while todo:
        q = todo.pop()
        for _, d in out[q]:
            if d not in fwd:
                fwd.add(d)
                todo.append(d)
    rev: list[list[int]] = [[] for _ in range(a.num_states)]
    for s, _, d in a.transitions:
        rev[d].append(s)
    bwd = set(a.final)
    todo = list(a.final)
    while todo:
        q = todo.pop()
        for p in rev[q]:
            if p not in bwd:
                bwd.add(p)
                todo.append(p)
    keep = fwd & bwd
    if not keep:
        return EMPTY
    remap = {q: i for i, q in enumerate(sorted(keep))}
    return make_nfa(
        len(keep),
        [(remap[s], l, remap[d]) for s, l, d in a.transitions if s in keep and d in keep],
        [remap[q] for q in a.initial if q in keep],
        [remap[q] for q in a.final if q in keep],
    )


def condense_epsilon(a: Nfa) -> Nfa:
    """Merge groups of states that are mutually reachable by epsilon edges."""
    adj: list[list[int]] = [[] for _ in range(a.num_states)]
    radj: list[list[int]] = [[] for _ in range(a.num_states)]
    for s, l, d in a.transitions:
        if l is None:
            adj[s].append(d)
            radj[d].append(s)
    # Kosaraju, iterative
    order = []
    seen = [False] * a.num_states
    for start in range(a.num_states):
        if seen[start]:
            continue
        stack = [(start, 0)]
        seen[start] = True
        while stack:
            q, i = stack.pop()
            if i < len(adj[q]):
                stack.append((q, i + 1))
                nxt = adj[q][i]
                if not seen[nxt]:
                    seen[nxt] = True
                    stack.append((nxt, 0))
            else:
                order.append(q)
    comp = [-1] * a.num_states
    ncomp = 0
    for q in reversed(order):
        if comp[q] != -1:
            continue
        todo = [q]
        comp[q] = ncomp
        while todo:
            cur = todo.pop()
            for nxt in radj[cur]:
                if comp[nxt] == -1:
                    comp[nxt] = ncomp
                    todo.append(nxt)
        ncomp += 1
    trans = set()
    for s, l, d in a.transitions:
        cs, cd = comp[s], comp[d]
        if l is None and cs == cd:
            continue
        trans.add((cs, l, cd))
    return make_nfa(ncomp, trans, {comp[q] for q in a.initial}, {comp[q] for q in a.final})


def _refine_partition(n: int, rows, final) -> list[int]:
    """Coarsest partition whose classes agree on finality and, per label, on
    the set of successor classes.

    Merging along such a partition preserves the language from any state.
    Refinement re-examines only states whose successors changed class, so a
    long chain costs a constant per state rather than a pass per split.
    """
    preds: list[list[int]] = [[] for _ in range(n)]
    for q in range(n):
        for _, d in rows[q]:
            preds[d].append(q)
    cls = [1 if q in final else 0 for q in range(n)]
    block_size = {0: n - sum(cls), 1: sum(cls)}
    block_sig: dict[int, frozenset] = {}
    next_id = 2
    dirty = set(range(n))
    while dirty:
        by_block: dict[int, list[int]] = {}
        for q in sorted(dirty):
            by_block.setdefault(cls[q], []).append(q)
        dirty = set()
        moved: list[int] = []
        for b, qs in by_block.items():
            groups: dict[frozenset, list[int]] = {}
            for q in qs:
                sig = frozenset((l, cls[d]) for l, d in rows[q])
                groups.setdefault(sig, []).append(q)
            if len(qs) == block_size[b]:
                # every member re-examined: the largest group keeps the id
                keep = max(groups.values(), key=len)
                for sig, sub in groups.items():
                    if sub is keep:
                        block_sig[b] = sig
                        block_size[b] = len(sub)
                        continue
                    block_sig[next_id] = sig
                    block_size[next_id] = len(sub)
                    for q in sub:
                        cls[q] = next_id
                    moved.extend(sub)
                    next_id += 1
            else:
                # untouched members still share the block signature
                base = block_sig[b]
                for sig, sub in groups.items():
                    if sig == base:
                        continue
                    block_sig[next_id] = sig
                    block_size[next_id] = len(sub)
                    block_size[b] -= len(sub)
                    for q in sub:
                        cls[q] = next_id
                    moved.extend(sub)
                    next_id += 1
        for q in moved:
            for p in preds[q]:
                dirty.add(p)
    renumber: dict[int, int] = {}
    return [renumber.setdefault(c, len(renumber)) for c in cls]


def merge_equivalent(a: Nfa) -> Nfa:
    """Merge states that accept the same right language for a structural
    reason: same finality and, label by label, the same classes of
    successors. Shared suffix structure and parallel cycles both collapse."""
    n = a.num_states
    if n <= 1:
        return a
    rows: list[list[tuple[str | None, int]]] = [[] for _ in range(n)]
    for s, l, d in a.transitions:
        rows[s].append((l, d))
    cls = _refine_partition(n, rows, a.final)
    count = max(cls) + 1
    if count == n:
        return a
    return make_nfa(
        count,
        {(cls[s], l, cls[d]) for s, l, d in a.transitions},
        {cls[q] for q in a.initial},
        {cls[q] for q in a.final},
    )


def compact(a: Nfa) -> Nfa:
    """Cheap size reduction: trim, epsilon condensation, behavior merge."""
    return merge_equivalent(condense_epsilon(trim(a)))


def to_min_dfa(a: Nfa, cap: int = 4096) -> Nfa | None:
    """Equivalent minimal deterministic automaton, or None past the cap.

    Subset construction followed by partition refinement (missing edges act
    as one implicit dead state). Returns None as soon as the construction
    would exceed `cap` states so callers can keep the nondeterministic form
    when determinizing does not pay off.
    """
    a = eliminate_epsilon(trim(a))
    if not a.final:
        return EMPTY
    out: list[dict[str, set[int]]] = [{} for _ in range(a.num_states)]
    for s, l, d in a.transitions:
        out[s].setdefault(l, set()).add(d)

    index: dict[frozenset[int], int] = {frozenset(a.initial): 0}
    order: list[frozenset[int]] = [frozenset(a.initial)]
    rows: list[dict[str, int]] = []
    pos = 0
    while pos < len(order):
        cur = order[pos]
        pos += 1
        row: dict[str, int] = {}
        for letter in LETTERS:
            nxt: set[int] = set()
            for q in cur:
                targets = out[q].get(letter)
                if targets:
                    nxt |= targets
            if not nxt:
                continue
            key = frozenset(nxt)
            if key not in index:
                if len(index) >= cap:
                    return None
                index[key] = len(index)
                order.append(key)
            row[letter] = index[key]
        rows.append(row)

    finals = {q for q, subset in enumerate(order) if subset & a.final}
    cls = _refine_partition(len(order), [list(row.items()) for row in rows], finals)
    return trim(make_nfa(
        max(cls) + 1,
        {(cls[s], l, cls[row[l]]) for s, row in enumerate(rows) for l in row},
        {cls[0]},
        {cls[q] for q in finals},
    ))


def intersect(a: Nfa, b: Nfa) -> Nfa:
    """Product automaton for the language intersection.

    Both sides are epsilon-eliminated first; the product is grown only over
    pairs reachable from the initial pairs, then trimmed.
    """
    a = eliminate_epsilon(a)
    b = eliminate_epsilon(b)
    bout: list[dict[str, list[int]]] = [{} for _ in range(b.num_states)]
    for s, l, d in b.transitions:
        bout[s].setdefault(l, []).append(d)
    index: dict[tuple[int, int], int] = {}
    trans = []
    todo = []

    def state(p, q):
        key = (p, q)
        if key not in index:
            index[key] = len(index)
            todo.append(key)
        return index[key]

    for p in a.initial:
        for q in b.initial:
            state(p, q)
    initial = list(index.values())
    while todo:
        p, q = todo.pop()
        src = index[(p, q)]
        for l, d in a._out[p]:
            for d2 in bout[q].get(l, ()):
                trans.append((src, l, state(d, d2)))
    final = [i for (p, q), i in index.items() if p in a.final and q in b.final]
    if not index:
        return EMPTY
    return trim(make_nfa(len(index), trans, initial, final))


def intersect_nonempty(a: Nfa, b: Nfa) -> bool:
    """Would intersect(a, b) accept anything?

    Breadth-first search over reachable state pairs, epsilon moves taken one
    side at a time, stopping at the first jointly accepting pair. Nothing is
    materialized, so the quadratic product blowup costs pair bookkeeping
    only; on large operands this is the difference between a set of ints and
    an automaton with the product's full transition table.
    """
    if not a.initial or not b.initial:
        return False
    bout: list[dict[str, list[int]]] = [{} for _ in range(b.num_states)]
    beps: list[list[int]] = [[] for _ in range(b.num_states)]
    for s, l, d in b.transitions:
        if l is None:
            beps[s].append(d)
        else:
            bout[s].setdefault(l, []).append(d)
    nb = b.num_states
    afin, bfin = a.final, b.final
    seen: set[int] = set()
    todo: deque[tuple[int, int]] = deque()
    for p in a.initial:
        for q in b.initial:
            seen.add(p * nb + q)
            todo.append((p, q))
    while todo:
        p, q = todo.popleft()
        if p in afin and q in bfin:
            return True
        for l, pd in a._out[p]:
            if l is None:
                key = pd * nb + q
                if key not in seen:
                    seen.add(key)
                    todo.append((pd, q))
            else:
                for qd in bout[q].get(l, ()):
                    key = pd * nb + qd
                    if key not in seen:
                        seen.add(key)
                        todo.append((pd, qd))
        for qd in beps[q]:
            key = p * nb + qd
            if key not in seen:
                seen.add(key)
                todo.append((p, qd))
    return False


def _parse_pattern(pattern: str) -> tuple[str, ...]:
    letters = tuple(pattern)
    for ch in letters:
        if ch not in LETTERS:
            raise ValueError(f"pattern letter {ch!r} not in {LETTERS}")
    if not letters:
        raise ValueError("empty pattern")
    return letters


def close_paths(a: Nfa, pattern: str, replacement: str = "") -> Nfa:
    """Close one rewrite rule to fixpoint; see close_paths_many."""
    return close_paths_many(a, [(pattern, replacement)])


def close_paths_many(a: Nfa, rules) -> Nfa:
    """Add shortcut edges for paths spelling rule patterns, to a joint fixpoint.

    Each rule is (pattern, replacement) with pattern a nonempty word over
    X N S R and replacement empty (epsilon edge) or a single letter. Whenever
    some state pair is connected by a path whose letters spell the pattern
    (epsilon transitions may sit between the letters), the replacement edge is
    added; added edges take part in further matches, including epsilon edges
    inside later patterns, until nothing new appears. Pairs whose pattern path
    starts or ends with an epsilon edge gain nothing new language-wise and are
    left to ordinary epsilon reachability.

    Implemented as an incremental worklist over match facts rather than
    repeated whole-relation passes, so deeply nested rewrites stay cheap.
    """
    parsed = []
    for pattern, replacement in rules:
        pat = _parse_pattern(pattern)
        if replacement not in ("",) and (len(replacement) != 1 or replacement not in LETTERS):
            raise ValueError("replacement must be empty or a single letter")
        parsed.append((pat, replacement if replacement else None))

    # base facts: by_src[label][state] -> set of successors; label None is epsilon
    by_src: dict[str | None, dict[int, set[int]]] = {}
    # partial facts per (rule, matched length): starts indexed by current end
    part_by_end: dict[tuple[int, int], dict[int, set[int]]] = {}
    part_seen: dict[tuple[int, int], set[tuple[int, int]]] = {}
    queue: deque = deque()
    added: set[tuple[int, str | None, int]] = set()
    existing = set(a.transitions)

    def add_base(p, label, q):
        slot = by_src.setdefault(label, {}).setdefault(p, set())
        if q in slot:
            return
        slot.add(q)
        queue.append(("base", p, label, q))

    def add_part(r, i, p, q):
        seen = part_seen.setdefault((r, i), set())
        if (p, q) in seen:
            return
        seen.add((p, q))
        if i < len(parsed[r][0]):  # completed matches end on their last letter
            part_by_end.setdefault((r, i), {}).setdefault(q, set()).add(p)
        queue.append(("part", r, i, p, q))

    for s, l, d in a.transitions:
        add_base(s, l, d)

    guard = 0
    limit = 16 * (a.num_states + 1) * (a.num_states + 1) * max(len(p) for p, _ in parsed)
    while queue:
        guard += 1
        assert guard <= limit + 5_000_000, "close_paths fixpoint ran away"
        item = queue.popleft()
        if item[0] == "base":
            _, p, label, q = item
            if label is None:
                # absorb into any partial currently ending at p
                for (r, i), ends in list(part_by_end.items()):
                    for start in list(ends.get(p, ())):
                        add_part(r, i, start, q)
            else:
                for r, (pat, _) in enumerate(parsed):
                    if pat[0] == label:
                        add_part(r, 1, p, q)
                    for i in range(1, len(pat)):
                        if pat[i] == label:
                            for start in list(part_by_end.get((r, i), {}).get(p, ())):
                                add_part(r, i + 1, start, q)
        else:
            _, r, i, p, q = item
            pat, repl = parsed[r]
            if i == len(pat):
                edge = (p, repl, q)
                if edge not in existing and edge not in added:
                    added.add(edge)
                add_base(p, repl, q)
                continue
            for nxt in by_src.get(None, {}).get(q, ()):
                add_part(r, i, p, nxt)
            for nxt in by_src.get(pat[i], {}).get(q, ()):
                add_part(r, i + 1, p, nxt)

    if not added:
        return a
    return make_nfa(a.num_states, list(a.transitions) + list(added), a.initial, a.final)


def language_upto(a: Nfa, max_len: int, cap: int = 200_000):
    """Exact list of accepted words of length <= max_len (test helper)."""
    a = eliminate_epsilon(a)
    out_by: list[dict[str, set[int]]] = [{} for _ in range(a.num_states)]
    for s, l, d in a.transitions:
        out_by[s].setdefault(l, set()).add(d)
    words = []
    start = frozenset(a.initial)
    todo = deque([("", start)])
    while todo:
        word, states = todo.popleft()
        if states & a.final:
            words.append(word)
            if len(words) > cap:
                raise RuntimeError("language_upto cap exceeded")
        if len(word) == max_len:
            continue
        for ch in LETTERS:
            nxt: set[int] = set()
            for q in states:
                nxt |= out_by[q].get(ch, set())
            if nxt:
                todo.append((word + ch, frozenset(nxt)))
    return words


def sample_accepted(a: Nfa, max_len: int, count: int, rng: random.Random):
    """Random accepted words of length <= max_len (duplicates allowed)."""
    a = eliminate_epsilon(trim(a))
    if a.is_empty():
        return []
    # distance to nearest final state, in letters
    rev: list[list[int]] = [[] for _ in range(a.num_states)]
    for s, _, d in a.transitions:
        rev[d].append(s)
    INF = max_len + 1
    dist = [INF] * a.num_states
    dq = deque()
    for q in a.final:
        dist[q] = 0
        dq.append(q)
    while dq:
        q = dq.popleft()
        for p in rev[q]:
            if dist[p] > dist[q] + 1:
                dist[p] = dist[q] + 1
                dq.append(p)
    starts = [q for q in a.initial if dist[q] <= max_len]
    if not starts:
        return []
    words = []
    for _ in range(count):
        cur = rng.choice(starts)
        word = []
        while True:
            remaining = max_len - len(word)
            moves = [(l, d) for l, d in a._out[cur] if dist[d] <= remaining - 1]
            if cur in a.final and (not moves or rng.random() < 0.35):
                break
            l, cur = rng.choice(moves)
            word.append(l)
        words.append("".join(word))
    return words


def to_json(a: Nfa) -> dict:
    return {
        "states": a.num_states,
        "initial": sorted(a.initial),
        "final": sorted(a.final),
        "transitions": [
            {"from": s, "label": "eps" if l is None else l, "to": d}
            for s, l, d in a.transitions
        ],
    }


def from_json(data: dict) -> Nfa:
    trans = [
        (t["from"], None if t["label"] == "eps" else t["label"], t["to"])
        for t in data["transitions"]
    ]
    return make_nfa(data["states"], trans, data["initial"], data["final"])
