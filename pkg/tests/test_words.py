import random

import pytest

from matsem.mat2 import IDENTITY, Mat2, inverse_unimodular
from matsem.words import (
    PHI,
    NotInGL,
    invert_word,
    is_canonical,
    matrix_to_canonical_word,
    normalize,
    phi_eval,
)

rng = random.Random(7005)
LETTERS = "XNSR"


def rand_word(k):
    return "".join(rng.choice(LETTERS) for _ in range(k))


def test_letter_images():
    assert phi_eval("X") == Mat2(-1, 0, 0, -1)
    assert phi_eval("N") == Mat2(1, 0, 0, -1)
    assert phi_eval("S") == Mat2(0, -1, 1, 0)
    assert phi_eval("R") == Mat2(0, -1, 1, 1)
    assert phi_eval("") == IDENTITY
    # defining relations
    assert phi_eval("XX") == IDENTITY
    assert phi_eval("NN") == IDENTITY
    assert phi_eval("SS") == phi_eval("X")
    assert phi_eval("RRR") == phi_eval("X")


def test_phi_eval_rejects_bad_letters():
    with pytest.raises(ValueError):
        phi_eval("SQ")


def test_invert_word():
    for _ in range(300):
        w = rand_word(rng.randint(0, 12))
        assert phi_eval(invert_word(w)) == inverse_unimodular(phi_eval(w))


def test_normalize_fixed_points():
    # hand-checked normal forms, one per structural case
    assert normalize("") == ""
    assert normalize("NN") == ""
    assert normalize("SS") == "X"
    # each verified by exhaustive search: the sole canonical word <= 8 letters
    # sharing the input's matrix image
    assert normalize("SXNRNRSNS") == "NSRSRRS"
    assert normalize("SXNRNRSNSN") == "RRSR"
    assert normalize("NSRXSXRRX") == "NXSRSRR"


def test_normalize_preserves_phi_and_is_canonical():
    for _ in range(500):
        w = rand_word(rng.randint(0, 25))
        nw = normalize(w)
        assert phi_eval(nw) == phi_eval(w), w
        assert is_canonical(nw), (w, nw)
        assert normalize(nw) == nw, w


def test_canonical_word_unique_per_matrix():
    for _ in range(300):
        w = rand_word(rng.randint(0, 20))
        m = phi_eval(w)
        cw = matrix_to_canonical_word(m)
        assert phi_eval(cw) == m
        assert cw == normalize(w), w


def test_is_canonical_shape():
    for good in ("", "N", "X", "NX", "S", "NXSRS", "RRSRRS", "NXR"):
        assert is_canonical(good), good
    for bad in ("XN", "SS", "RRR", "SXR", "NN", "SNR", "XSRX"):
        assert not is_canonical(bad), bad


def test_matrix_to_canonical_word_rejects_non_gl():
    with pytest.raises(NotInGL):
        matrix_to_canonical_word(Mat2(2, 0, 0, 1))


def test_phi_surjective_on_small_gl():
    # every unimodular matrix with small entries has a word that hits it
    seen = set()
    for a in range(-2, 3):
        for b in range(-2, 3):
            for c in range(-2, 3):
                for d in range(-2, 3):
                    m = Mat2(a, b, c, d)
                    if m.is_unimodular():
                        w = matrix_to_canonical_word(m)
                        assert phi_eval(w) == m
                        seen.add(w)
    assert len(seen) > 100  # distinct matrices got distinct words
