"""Certified real and complex roots of integer polynomials.

Real roots are isolated exactly with Sturm sequences over rational
endpoints. Complex roots come from floating iteration (mpmath's
Durand-Kerner) and are then validated a posteriori: with Weierstrass
corrections W_i computed exactly in Q(i), the disks |z - z_i| <= n|W_i|
contain all roots, and pairwise disjoint disks contain exactly one root
each.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import iv

from otk.poly import (
    IntPolynomial,
    PolynomialError,
    RatPolynomial,
    is_irreducible_over_Q,
    poly_gcd,
)


class ReducibleError(PolynomialError):
    """Operation requires an irreducible defining polynomial."""

    def __init__(self, poly, result):
        super().__init__(f"{poly} is reducible (factor {result.factor})")
        self.poly = poly
        self.result = result


@dataclass(frozen=True)
class Signature:
    s: int
    t: int

    @property
    def degree(self) -> int:
        return self.s + 2 * self.t


@dataclass(frozen=True)
class ComplexRoot:
    """Disk |z - (re + i im)| <= radius holding exactly one root."""

    re: Fraction
    im: Fraction
    radius: Fraction

    def approx(self) -> complex:
        return complex(float(self.re), float(self.im))


@dataclass(frozen=True)
class EmbeddingSet:
    """All roots of an irreducible polynomial, in embedding order.

    ``real_roots`` are isolating intervals sorted ascending (sigma_1..sigma_s);
    ``complex_roots`` are the upper half-plane representatives, sorted by real
    part then imaginary part, so ``complex_roots[0]`` is sigma_{s+1}.
    """

    poly: IntPolynomial
    real_roots: tuple
    complex_roots: tuple
    precision: Fraction

    @property
    def signature(self) -> Signature:
        return Signature(len(self.real_roots), len(self.complex_roots))

    def approx(self) -> list[complex]:
        """sigma_1, ..., sigma_{s+t} as Python complex numbers."""
        out = [complex(float((a + b) / 2), 0.0) for a, b in self.real_roots]
        out += [c.approx() for c in self.complex_roots]
        return out

    def all_approx(self) -> list[complex]:
        """All n roots: reals, upper complex ones, then their conjugates."""
        out = self.approx()
        return out + [c.approx().conjugate() for c in self.complex_roots]

    def enclosures(self, dps: int = 30) -> list:
        """Rigorous mpmath interval enclosures of sigma_1..sigma_{s+t}."""
        with iv_dps(dps):
            out = [iv_interval(a, b) for a, b in self.real_roots]
            for c in self.complex_roots:
                out.append(
                    iv.mpc(
                        iv_interval(c.re - c.radius, c.re + c.radius),
                        iv_interval(c.im - c.radius, c.im + c.radius),
                    )
                )
        return out

    def mp_values(self, dps: int = 30) -> list:
        """Midpoints as mpmath numbers (mpc for complex places)."""
        with mpmath.workdps(dps):
            out = [mpmath.mpf((a + b).numerator) / (2 * (a + b).denominator) for a, b in self.real_roots]
            for c in self.complex_roots:
                out.append(
                    mpmath.mpc(
                        mpmath.mpf(c.re.numerator) / c.re.denominator,
                        mpmath.mpf(c.im.numerator) / c.im.denominator,
                    )
                )
        return out


@contextmanager
def iv_dps(dps: int):
    """Temporarily set the working precision of mpmath's interval context."""
    old = iv.dps
    iv.dps = max(old, dps)
    try:
        yield
    finally:
        iv.dps = old


def iv_interval(lo: Fraction, hi: Fraction):
    """Interval (current iv precision) containing the rational interval [lo, hi]."""
    a = iv.mpf(lo.numerator) / lo.denominator
    b = iv.mpf(hi.numerator) / hi.denominator
    return iv.mpf([a.a, b.b])


def iv_bounds(x) -> tuple[Fraction, Fraction]:
    """Exact rational endpoints of an mpmath real interval."""
    lo, hi = x._mpi_
    p, q = mpmath.libmp.to_rational(lo)
    r, s = mpmath.libmp.to_rational(hi)
    return Fraction(int(p), int(q)), Fraction(int(r), int(s))


def mpf_to_fraction(x) -> Fraction:
    p, q = mpmath.libmp.to_rational(mpmath.mpf(x)._mpf_)
    return Fraction(int(p), int(q))


def sqrt_upper(x: Fraction) -> Fraction:
    """A rational upper bound for sqrt(x), relative slack about 2**-60."""
    if x <= 0:
        return Fraction(0)
    k = max(0, (x.denominator.bit_length() - x.numerator.bit_length()) // 2 + 64)
    scaled = (x.numerator << (2 * k)) // x.denominator
    return Fraction(math.isqrt(scaled) + 1, 1 << k)


# -- Sturm sequences --------------------------------------------------------


def _positive_primitive(p: RatPolynomial) -> IntPolynomial:
    # rescale by a positive constant only, so signs are untouched
    c = p.content()
    return IntPolynomial([x / c for x in p.coeffs])


def sturm_chain(P: RatPolynomial) -> list[IntPolynomial]:
    chain = [_positive_primitive(P), _positive_primitive(P.derivative())]
    while chain[-1].degree > 0:
        r = chain[-2] % chain[-1]
        if r.is_zero():
            break
        chain.append(_positive_primitive(-r))
    return chain


def sign_variations(chain, x) -> int:
    x = Fraction(x)
    prev = 0
    count = 0
    for p in chain:
        v = p.eval_exact(x)
        if v == 0:
            continue
        sgn = 1 if v > 0 else -1
        if prev and sgn != prev:
            count += 1
        prev = sgn
    return count


def squarefree(P: RatPolynomial) -> IntPolynomial:
    if P.degree < 1:
        return _positive_primitive(P)
    g = poly_gcd(P, P.derivative())
    return _positive_primitive(P // g)


def sturm_count(P: RatPolynomial, a, b) -> int:
    """Number of distinct real roots of P in the open interval (a, b)."""
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise ValueError("need a < b")
    Q = squarefree(P)
    if Q.eval_exact(a) == 0 or Q.eval_exact(b) == 0:
        raise ValueError("interval endpoint is a root; perturb it")
    chain = sturm_chain(Q)
    return sign_variations(chain, a) - sign_variations(chain, b)


def cauchy_bound(P: RatPolynomial) -> Fraction:
    lc = abs(Fraction(P.lc))
    return 1 + max(abs(Fraction(c)) for c in P.coeffs[:-1]) / lc if P.degree > 0 else Fraction(1)


def isolate_real_roots(P: RatPolynomial) -> list[tuple[Fraction, Fraction]]:
    """Disjoint isolating intervals (a, b), ascending. Exact rational roots give (r, r)."""
    Q = squarefree(P)
    if Q.degree < 1:
        return []
    chain = sturm_chain(Q)
    B = cauchy_bound(Q)
    out = []
    stack = [(-B, B, sign_variations(chain, -B) - sign_variations(chain, B))]
    while stack:
        a, b, k = stack.pop()
        if k == 0:
            continue
        if k == 1:
            out.append((a, b))
            continue
        m = (a + b) / 2
        if Q.eval_exact(m) == 0:
            out.append((m, m))
            # exact root at m: shrink around it to keep neighbours apart
            d = (b - a) / 4
            while (
                Q.eval_exact(m - d) == 0
                or Q.eval_exact(m + d) == 0
                or (sign_variations(chain, m - d) - sign_variations(chain, m + d) != 1)
            ):
                d /= 2
            stack.append((a, m - d, sign_variations(chain, a) - sign_variations(chain, m - d)))
            stack.append((m + d, b, sign_variations(chain, m + d) - sign_variations(chain, b)))
            continue
        vm = sign_variations(chain, m)
        stack.append((a, m, sign_variations(chain, a) - vm))
        stack.append((m, b, vm - sign_variations(chain, b)))
    out.sort()
    return out


def refine_interval(P: RatPolynomial, a: Fraction, b: Fraction, eps: Fraction):
    """Bisect an isolating interval of a simple root until b - a <= eps."""
    if a == b:
        return a, b
    va = P.eval_exact(a)
    while b - a > eps:
        m = (a + b) / 2
        vm = P.eval_exact(m)
        if vm == 0:
            return m, m
        if (vm > 0) == (va > 0):
            a, va = m, vm
        else:
            b = m
    return a, b


def _require_irreducible(P: RatPolynomial):
    res = is_irreducible_over_Q(P)
    if not res.irreducible:
        raise ReducibleError(P, res)


def signature(P: RatPolynomial, check: bool = True) -> Signature:
    if check:
        _require_irreducible(P)
    B = cauchy_bound(P)
    s = sturm_count(P, -B, B)
    return Signature(s, (P.degree - s) // 2)


def is_totally_real(P: RatPolynomial) -> bool:
    return signature(P).t == 0


# -- complex roots -----------------------------------------------------------


def _gauss_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _weierstrass_radii(P: IntPolynomial, zs):
    """Exact n|W_i| upper bounds for approximations zs (Gaussian rationals)."""
    n = P.degree
    lc = P.lc
    radii = []
    for i, z in enumerate(zs):
        val = (Fraction(0), Fraction(0))
        for c in reversed(P.coeffs):
            val = _gauss_mul(val, z)
            val = (val[0] + c, val[1])
        den = (Fraction(lc), Fraction(0))
        for j, w in enumerate(zs):
            if j != i:
                den = _gauss_mul(den, (z[0] - w[0], z[1] - w[1]))
        dn = den[0] ** 2 + den[1] ** 2
        if dn == 0:
            return None
        w2 = (val[0] ** 2 + val[1] ** 2) / dn
        radii.append(n * sqrt_upper(w2))
    return radii


def _disjoint(zs, radii) -> bool:
    for i in range(len(zs)):
        for j in range(i + 1, len(zs)):
            d2 = (zs[i][0] - zs[j][0]) ** 2 + (zs[i][1] - zs[j][1]) ** 2
            if (radii[i] + radii[j]) ** 2 >= d2:
                return False
    return True


def certified_complex_roots(P: IntPolynomial, t: int, eps: Fraction, max_dps: int = 2000):
    """Validated disks for the t upper half-plane roots, radius <= eps."""
    if t == 0:
        return ()
    n = P.degree
    dps = max(30, int(-math.log10(float(eps))) + 15) if eps < 1 else 30
    while dps <= max_dps:
        with mpmath.workdps(dps):
            approx = mpmath.polyroots(
                [mpmath.mpf(c) for c in reversed(P.coeffs)], maxsteps=50 + 10 * dps, extraprec=2 * dps
            )
            zs = [(mpf_to_fraction(mpmath.re(z)), mpf_to_fraction(mpmath.im(z))) for z in approx]
        if len(set(zs)) == n:
            radii = _weierstrass_radii(P, zs)
            if radii is not None and _disjoint(zs, radii):
                upper = [ComplexRoot(z[0], z[1], r) for z, r in zip(zs, radii) if z[1] > 0 and r < z[1] and r <= eps]
                if len(upper) == t:
                    upper.sort(key=lambda c: (c.re, c.im))
                    return tuple(upper)
        dps *= 2
    raise RuntimeError("complex root validation did not converge")


def refine_embeddings(P: RatPolynomial, eps=Fraction(1, 10**6), check: bool = True) -> EmbeddingSet:
    """All roots of irreducible P, each certified to radius <= eps."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if check:
        _require_irreducible(P)
    P = P.primitive_part()
    reals = tuple(refine_interval(P, a, b, eps) for a, b in isolate_real_roots(P))
    t = (P.degree - len(reals)) // 2
    cplx = certified_complex_roots(P, t, eps)
    widths = [b - a for a, b in reals] + [c.radius for c in cplx]
    return EmbeddingSet(P, reals, cplx, max(widths) if widths else Fraction(0))
