"""Words over the four-letter alphabet X, N, S, R and their matrix images.

The letter map phi sends X to -I, N to diag(1,-1), S to the order-4 rotation
[[0,-1],[1,0]] and R to the order-6 matrix [[0,-1],[1,1]]; it extends to a
surjection from words onto the group of 2x2 integer matrices with det +-1.
Every such matrix has exactly one canonical word

    N^d X^g S^b R^(a0) S R^(a1) S ... S R^(ak)

with d, g, b in {0,1}, inner exponents in {1,2} and the last in {0,1,2}:
equivalently a word with no SS or RRR factor, N only in first position and
X only first or straight after N. normalize() rewrites any word to the
canonical word with the same image.
"""

from __future__ import annotations

from functools import lru_cache

from .mat2 import IDENTITY, Mat2

ALPHABET = "XNSR"


class NotInGL(ValueError):
    """Only determinant +-1 matrices have words."""


PHI = {
    "X": Mat2(-1, 0, 0, -1),
    "N": Mat2(1, 0, 0, -1),
    "S": Mat2(0, -1, 1, 0),
    "R": Mat2(0, -1, 1, 1),
}

# letter inverses: X and N are involutions, S^4 == I, R^6 == I
_LETTER_INVERSE = {"X": "X", "N": "N", "S": "SSS", "R": "RRRRR"}


def _check_word(w: str) -> None:
    for ch in w:
        if ch not in PHI:
            raise ValueError(f"bad letter {ch!r}, alphabet is X N S R")


def phi_eval(w: str) -> Mat2:
    """Image of a word: the product of its letter matrices."""
    _check_word(w)
    m = IDENTITY
    for ch in w:
        m = m * PHI[ch]
    return m


def invert_word(w: str) -> str:
    """A word for the inverse image: reverse and invert letterwise."""
    _check_word(w)
    return "".join(_LETTER_INVERSE[ch] for ch in reversed(w))


def is_canonical(w: str) -> bool:
    """Check the unique-normal-form shape (no rewriting, just a scan)."""
    for ch in w:
        if ch not in PHI:
            return False
    i = 0
    if i < len(w) and w[i] == "N":
        i += 1
    if i < len(w) and w[i] == "X":
        i += 1
    body = w[i:]
    return not ("N" in body or "X" in body or "SS" in body or "RRR" in body)


# Conjugating a letter by N: N X N == X, N S N == XS, N R N == SRRS.
N_CONJUGATE = {"X": "X", "S": "XS", "R": "SRRS"}


def _hoist_reflections(w: str) -> str:
    """Push every N to the front.

    Letters in segments whose preceding-N parity makes them "active" are
    replaced by their N-conjugates; all original N's then cancel in pairs,
    leaving one leading N when the total count is odd.
    """
    total = w.count("N")
    if total == 0:
        return w
    active_parity = (total + 1) % 2
    out = ["N"] if total % 2 else []
    seen = 0
    for ch in w:
        if ch == "N":
            seen += 1
        elif seen % 2 == active_parity:
            out.append(N_CONJUGATE[ch])
        else:
            out.append(ch)
    return "".join(out)


# Image-preserving shrink rules: each left side multiplies out to I or -I,
# matching the right side (empty or X).
SHORTENING_RULES = (
    ("XX", ""),
    ("SS", "X"),
    ("SXS", ""),
    ("RRR", "X"),
    ("RXRR", ""),
    ("RRXR", ""),
    ("RXRXR", "X"),
)


def _reduce_powers(w: str) -> str:
    """Apply the shrink rules until none matches. Every rule shortens the word."""
    changed = True
    while changed:
        changed = False
        for pat, rep in SHORTENING_RULES:
            i = w.find(pat)
            if i >= 0:
                w = w[:i] + rep + w[i + len(pat):]
                changed = True
    return w


def _hoist_sign_flips(w: str) -> str:
    """Move every X to the front (X is central and an involution)."""
    lead = ""
    if w.startswith("N"):
        lead, w = "N", w[1:]
    odd = w.count("X") % 2
    return lead + ("X" if odd else "") + w.replace("X", "")


def normalize(w: str) -> str:
    """Rewrite w to the canonical word with the same image."""
    _check_word(w)
    out = _hoist_sign_flips(_reduce_powers(_hoist_reflections(w)))
    assert is_canonical(out)
    return out


@lru_cache(maxsize=None)
def matrix_to_canonical_word(m: Mat2) -> str:
    """The canonical word of a determinant +-1 matrix.

    det -1 peels off a leading N; the rest is a Euclidean reduction of the
    det +1 part into S-swaps and powers of T = [[1,1],[0,1]] (T is the image
    of XSR), finished by normalize().
    """
    d = m.det()
    if d not in (1, -1):
        raise NotInGL(f"determinant is {d}, need +1 or -1")
    parts = []
    if d == -1:
        parts.append("N")
        m = PHI["N"] * m  # N is its own inverse

    # Keep m == (letters so far) * c. A T^-q step clears the quotient of
    # c11 by c21, an S^-1 step swaps rows; |c21| strictly shrinks.
    c = m
    s_inv = Mat2(0, 1, -1, 0)
    while c.a21 != 0:
        qt = c.a11 // c.a21
        if qt:
            c = Mat2(1, -qt, 0, 1) * c
            parts.append(_t_power_word(qt))
        c = s_inv * c
        parts.append("S")

    # c is upper triangular with diagonal (1,1) or (-1,-1)
    if c.a11 == 1:
        parts.append(_t_power_word(c.a12))
    else:
        parts.append("X")
        parts.append(_t_power_word(-c.a12))
    return normalize("".join(parts))


def _t_power_word(k: int) -> str:
    if k >= 0:
        return "XSR" * k
    return invert_word("XSR") * (-k)
