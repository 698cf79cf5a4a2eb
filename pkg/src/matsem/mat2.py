"""Exact 2x2 integer matrices: products, unimodular inverses, Smith normal form.

Everything here is plain Python int arithmetic, so entries can be arbitrarily
large. Matrices are immutable and hashable, which the rest of the package
relies on for caching.
"""

from __future__ import annotations

from dataclasses import dataclass


class SingularInput(ValueError):
    """A nonsingular matrix was required but det == 0."""


class NotUnimodular(ValueError):
    """Integer inversion needs determinant +1 or -1."""


class NotConjugable(ValueError):
    """Diagonal conjugation of this matrix would leave the integers."""


@dataclass(frozen=True)
class Mat2:
    a11: int
    a12: int
    a21: int
    a22: int

    def __mul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
        )

    def det(self) -> int:
        return self.a11 * self.a22 - self.a12 * self.a21

    def transpose(self) -> "Mat2":
        return Mat2(self.a11, self.a21, self.a12, self.a22)

    def is_unimodular(self) -> bool:
        return self.det() in (1, -1)

    def rows(self) -> list[list[int]]:
        return [[self.a11, self.a12], [self.a21, self.a22]]

    def __repr__(self) -> str:
        return f"Mat2[[{self.a11},{self.a12}],[{self.a21},{self.a22}]]"


IDENTITY = Mat2(1, 0, 0, 1)


def diag(x: int, y: int) -> Mat2:
    return Mat2(x, 0, 0, y)


def mul(a: Mat2, b: Mat2) -> Mat2:
    return a * b


def det(a: Mat2) -> int:
    return a.det()


def inverse_unimodular(a: Mat2) -> Mat2:
    """Exact inverse of a determinant +-1 matrix.

    adj(a)/det == adj(a)*det because det*det == 1.
    """
    d = a.det()
    if d not in (1, -1):
        raise NotUnimodular(f"determinant is {d}, need +1 or -1")
    return Mat2(a.a22 * d, -a.a12 * d, -a.a21 * d, a.a11 * d)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b == g."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


@dataclass(frozen=True)
class SnfDecomposition:
    """a == E * D * F with E, F unimodular and D = diag(t1, t2), t1 | t2, both > 0."""

    E: Mat2
    D: Mat2
    F: Mat2

    @property
    def t1(self) -> int:
        return self.D.a11

    @property
    def t2(self) -> int:
        return self.D.a22


def smith_normal_form(a: Mat2) -> SnfDecomposition:
    """Smith normal form of a nonsingular 2x2 integer matrix.

    gcd-based row and column reduction. D is normalized to positive diagonal
    entries; any sign is absorbed into E. Raises SingularInput on det == 0.
    """
    if a.det() == 0:
        raise SingularInput("smith_normal_form requires det != 0")

    # Maintain b == p * a * q, with p and q unimodular; then E = p^-1, F = q^-1.
    b11, b12, b21, b22 = a.a11, a.a12, a.a21, a.a22
    p = IDENTITY
    q = IDENTITY

    def left(m11, m12, m21, m22):
        nonlocal b11, b12, b21, b22, p
        b11, b12, b21, b22 = (
            m11 * b11 + m12 * b21,
            m11 * b12 + m12 * b22,
            m21 * b11 + m22 * b21,
            m21 * b12 + m22 * b22,
        )
        p = Mat2(m11, m12, m21, m22) * p

    def right(m11, m12, m21, m22):
        nonlocal b11, b12, b21, b22, q
        b11, b12, b21, b22 = (
            b11 * m11 + b12 * m21,
            b11 * m12 + b12 * m22,
            b21 * m11 + b22 * m21,
            b21 * m12 + b22 * m22,
        )
        q = q * Mat2(m11, m12, m21, m22)

    # A shear clears an off-diagonal entry the corner divides without touching
    # the opposite one; otherwise an xgcd transform strictly shrinks |b11|.
    guard = 0
    while True:
        while b21 != 0 or b12 != 0:
            guard += 1
            assert guard < 256, "gcd reduction failed to terminate"
            if b21 != 0:
                if b11 != 0 and b21 % b11 == 0:
                    left(1, 0, -(b21 // b11), 1)
                else:
                    g, u, v = _xgcd(b11, b21)
                    # det [[u, v], [-b21/g, b11/g]] == (u*b11 + v*b21)/g == 1
                    left(u, v, -(b21 // g), b11 // g)
            if b12 != 0:
                if b11 != 0 and b12 % b11 == 0:
                    right(1, -(b12 // b11), 0, 1)
                else:
                    g, u, v = _xgcd(b11, b12)
                    right(u, -(b12 // g), v, b11 // g)
        if b22 % b11 == 0:
            break
        # fold b22 into the corner's reach: row1 += row2, reduce again
        left(1, 1, 0, 1)

    if b11 < 0:
        left(-1, 0, 0, 1)
    if b22 < 0:
        left(1, 0, 0, -1)

    d = Mat2(b11, 0, 0, b22)
    e = inverse_unimodular(p)
    f = inverse_unimodular(q)
    assert e * d * f == a
    assert d.a11 > 0 and d.a22 > 0 and d.a22 % d.a11 == 0
    return SnfDecomposition(E=e, D=d, F=f)


def conjugate_by_diag(a: Mat2, d: Mat2) -> Mat2:
    """d^-1 * a * d for diagonal d = diag(m, m*n).

    The result is [[a11, n*a12], [a21/n, a22]]; raises NotConjugable unless
    n divides a21.
    """
    if d.a12 or d.a21 or d.a11 == 0 or d.a22 == 0 or d.a22 % d.a11:
        raise ValueError("d must be diag(m, m*n) with m, n nonzero")
    n = d.a22 // d.a11
    if a.a21 % n:
        raise NotConjugable(f"{n} does not divide the lower-left entry {a.a21}")
    return Mat2(a.a11, a.a12 * n, a.a21 // n, a.a22)
