"""Brute-force ground truth for small instances.

Independent of the automata machinery on purpose: plain breadth-first
product enumeration and an exact bounded-power check, used to validate the
decision procedures and to dig up explicit witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass

from .mat2 import IDENTITY, Mat2


class BadDet(ValueError):
    """single_generator_member needs a generator with |det| >= 2."""


@dataclass
class OrbitFrontier:
    """Finished enumeration of products of at most max_len generators.

    products maps each reachable matrix to one shortest generator-index
    word (the identity to the empty word). exhausted is True when the last
    explored level added nothing new, i.e. the whole semigroup was seen and
    deeper products can only repeat known matrices.
    """

    products: dict[Mat2, tuple[int, ...]]
    exhausted: bool

    def member(self, m: Mat2) -> bool:
        return m in self.products

    def witness(self, m: Mat2) -> tuple[int, ...] | None:
        return self.products.get(m)


def bfs_products(gens, max_len: int) -> OrbitFrontier:
    """All products of <= max_len generators, deduplicated by value."""
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    gens = list(gens)
    products: dict[Mat2, tuple[int, ...]] = {IDENTITY: ()}
    frontier = [IDENTITY]
    for _ in range(max_len):
        nxt = []
        for m in frontier:
            word = products[m]
            for i, g in enumerate(gens):
                prod = m * g
                if prod not in products:
                    products[prod] = word + (i,)
                    nxt.append(prod)
        frontier = nxt
        if not frontier:
            break
    exhausted = not frontier or all(m * g in products for m in frontier for g in gens)
    return OrbitFrontier(products, exhausted)


def meet_in_middle_witness(gens, target: Mat2, half_len: int = 5) -> tuple[int, ...] | None:
    """Generator-index word of length <= 2*half_len multiplying to target.

    Splits target = l*r over all enumerated left halves l: the cofactor
    r = l^-1 * target is integral iff det(l) divides adj(l)*target, and a
    dictionary lookup finds it among the enumerated products. Complete up
    to the length bound, None beyond it."""
    gens = list(gens)
    if any(g.det() == 0 for g in gens):
        raise ValueError("generators must be nonsingular")
    halves = bfs_products(gens, half_len).products
    dt = target.det()
    for left, lword in halves.items():
        dl = left.det()
        if dt % dl != 0:
            continue
        # adj(left) * target, then divide by det(left) if exact
        b11 = left.a22 * target.a11 - left.a12 * target.a21
        b12 = left.a22 * target.a12 - left.a12 * target.a22
        b21 = left.a11 * target.a21 - left.a21 * target.a11
        b22 = left.a11 * target.a22 - left.a21 * target.a12
        if b11 % dl or b12 % dl or b21 % dl or b22 % dl:
            continue
        rword = halves.get(Mat2(b11 // dl, b12 // dl, b21 // dl, b22 // dl))
        if rword is not None:
            return lword + rword
    return None


def single_generator_member(a: Mat2, m: Mat2) -> bool:
    """Is m a power a^k, k >= 0? Exact: |det a| >= 2 bounds the exponent."""
    da = abs(a.det())
    if da < 2:
        raise BadDet(f"|det| = {da}, need >= 2")
    dm = abs(m.det())
    if dm == 0:
        return False
    power = IDENTITY
    while abs(power.det()) <= dm:
        if power == m:
            return True
        power = power * a
    return False
