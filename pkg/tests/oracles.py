"""Independent reference computations used by the tests (sympy and brute force)."""

import math
from fractions import Fraction

import sympy as sp

x = sp.Symbol("x")


def to_sympy(p):
    return sp.Poly(
        list(reversed([sp.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else c for c in p.coeffs]))
        or [0],
        x,
    )


def from_sympy_coeffs(poly):
    cs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    return cs


def sylvester_resultant(a, b):
    """Determinant of the Sylvester matrix, by fraction Gaussian elimination."""
    A = [Fraction(c) for c in reversed(a.coeffs)]
    B = [Fraction(c) for c in reversed(b.coeffs)]
    m, n = len(A) - 1, len(B) - 1
    size = m + n
    if size == 0:
        return Fraction(1)
    M = []
    for i in range(n):
        M.append([Fraction(0)] * i + A + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        M.append([Fraction(0)] * i + B + [Fraction(0)] * (size - n - 1 - i))
    det = Fraction(1)
    for c in range(size):
        piv = next((r for r in range(c, size) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, size):
            f = M[r][c] / M[c][c]
            if f:
                M[r] = [vr - f * vc for vr, vc in zip(M[r], M[c])]
    return det


def pell_fundamental_unit(d, limit=10**6):
    """Smallest unit > 1 of the ring of integers of Q(sqrt d) by direct search over y.

    Returns (a, b, denominator) meaning (a + b sqrt d) / denominator.
    """
    half = d % 4 == 1
    for y in range(1, limit):
        for sign in (-1, 1):
            if half:
                # (a + y sqrt d)/2 with a^2 - d y^2 = 4 sign
                t = d * y * y + 4 * sign
                if t <= 0:
                    continue
                a = math.isqrt(t)
                if a * a == t:
                    return a, y, 2
            else:
                t = d * y * y + sign
                if t <= 0:
                    continue
                a = math.isqrt(t)
                if a * a == t:
                    return a, y, 1
    raise RuntimeError("no unit found")
