"""Builders for example fields of signature (s, 1).

* ``make_maximal``: combine three polynomials with prescribed factorization
  patterns mod 2, 3 and 5 so that the result has Galois group S_{2n}.
* ``make_half``: F = E(sqrt(alpha - q)) over a totally real E, which has
  exactly one complex place when q sits between the two smallest roots.
* ``make_totally_real``: Gaussian periods of 2cos(2 pi k / p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from mpmath import iv

from otk.galois import FactorPattern, SquarefreeFailure, Witness, factor_pattern
from otk.poly import (
    IntPolynomial,
    X,
    is_irreducible_over_Q,
    is_prime,
    parse_poly,
)
from otk.realroots import (
    ReducibleError,
    cauchy_bound,
    iv_bounds,
    iv_dps,
    isolate_real_roots,
    refine_interval,
    signature,
    sturm_count,
)


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class MaximalFamilySpec:
    n: int
    f1: IntPolynomial
    f2: IntPolynomial
    f3: IntPolynomial
    g: IntPolynomial = IntPolynomial([])

    @classmethod
    def parse(cls, n, f1, f2, f3, g="0"):
        return cls(int(n), parse_poly(f1), parse_poly(f2), parse_poly(f3), parse_poly(g))

    def with_g(self, g) -> "MaximalFamilySpec":
        return MaximalFamilySpec(self.n, self.f1, self.f2, self.f3, IntPolynomial(g))


@dataclass(frozen=True)
class NotFound:
    bound: int
    tried: int = 0

    def __bool__(self):
        return False


def _pattern(P, p, name):
    pat = factor_pattern(P, p)
    if isinstance(pat, SquarefreeFailure):
        raise ConstructionError(f"{name} fails its mod-{p} condition: it is not squarefree mod {p}")
    return pat


def family_witnesses(spec: MaximalFamilySpec) -> tuple:
    """Validate the family data; return its witnesses at p = 2, 3, 5."""
    m = 2 * spec.n
    if spec.n < 2:
        raise ConstructionError("n must be at least 2")
    for name in ("f1", "f2", "f3"):
        P = getattr(spec, name)
        if P.degree != m or P.lc != 1:
            raise ConstructionError(f"{name} must be monic of degree {m}")
    if spec.g.degree > m - 1:
        raise ConstructionError(f"g must have degree at most {m - 1}")
    p1 = _pattern(spec.f1, 2, "f1")
    if p1.degrees != (m,):
        raise ConstructionError(f"f1 is not irreducible mod 2 (pattern {list(p1.degrees)})")
    p2 = _pattern(spec.f2, 3, "f2")
    if p2.degrees != (1, m - 1):
        raise ConstructionError(
            f"f2 is not linear times irreducible of degree {m - 1} mod 3 (pattern {list(p2.degrees)})"
        )
    p3 = _pattern(spec.f3, 5, "f3")
    d = p3.degrees
    if not (len(d) == 3 and d.count(2) == 1 and all(x % 2 for x in d if x != 2)):
        raise ConstructionError(f"f3 is not quadratic times two odd-degree factors mod 5 (pattern {list(d)})")
    return (
        Witness(2, p1, "n-cycle"),
        Witness(3, p2, "(n-1)-cycle"),
        Witness(5, p3, "transposition-power"),
    )


def _combine(spec: MaximalFamilySpec) -> IntPolynomial:
    f = spec.f1 * (-15) + spec.f2 * 10 + spec.f3 * 6 + spec.g * 30
    return f.to_int()


def make_maximal(spec: MaximalFamilySpec) -> IntPolynomial:
    """f = -15 f1 + 10 f2 + 6 f3 + 30 g, monic with Galois group S_{2n}."""
    family_witnesses(spec)
    f = _combine(spec)
    assert f.lc == 1 and f.degree == 2 * spec.n
    # f = f1 mod 2, so irreducibility mod 2 carries over
    if factor_pattern(f, 2) != FactorPattern(2, (2 * spec.n,)):
        raise ConstructionError("combined polynomial lost its mod-2 pattern")
    return f


def _g_candidates(m: int, bound: int):
    for h in range(bound + 1):
        for cs in product(range(-h, h + 1), repeat=m):
            if max(map(abs, cs), default=0) == h:
                yield cs


def iter_g_for_signature(spec: MaximalFamilySpec, bound: int):
    """All (g, f) in the box |g_i| <= bound with f of signature (2n-2, 1), lowest height first."""
    if bound < 0:
        return
    family_witnesses(spec)
    m = 2 * spec.n
    for cs in _g_candidates(m, bound):
        g = IntPolynomial(list(cs))
        f = _combine(spec.with_g(g))
        sig = signature(f, check=False)
        if sig.s == m - 2 and sig.t == 1:
            yield g, f


def search_g_for_signature(spec: MaximalFamilySpec, bound: int):
    """First (g, f) with the wanted signature, or NotFound."""
    tried = 0
    for hit in iter_g_for_signature(spec, bound):
        return hit
    if bound >= 0:
        tried = (2 * bound + 1) ** (2 * spec.n)
    return NotFound(bound, tried)


# -- E(sqrt(alpha - q)) ------------------------------------------------------------------


def auto_q(E_poly: IntPolynomial) -> Fraction:
    """Midpoint of the gap between the isolating intervals of the two smallest roots."""
    iv_ = isolate_real_roots(E_poly)
    if len(iv_) != E_poly.degree or len(iv_) < 2:
        raise ConstructionError("subfield polynomial must be totally real of degree >= 2")
    (_, b1), (a2, _) = iv_[0], iv_[1]
    return (b1 + a2) / 2


def make_half(E_poly, q="auto") -> IntPolynomial:
    """Monic integral polynomial for E(sqrt(alpha - q)).

    For q = a/k in lowest terms this is k^(2n) E((X^2 + k^2 q)/k^2), whose
    roots are k*sqrt(alpha_i - q); with integral q it is just E(X^2 + q).
    """
    E = parse_poly(E_poly) if not isinstance(E_poly, IntPolynomial) else E_poly
    n = E.degree
    if n < 1 or E.lc != 1:
        raise ConstructionError("subfield polynomial must be monic")
    res = is_irreducible_over_Q(E)
    if not res.irreducible:
        raise ReducibleError(E, res)
    if signature(E, check=False).t != 0:
        raise ConstructionError(f"{E} is not totally real")
    if n < 2:
        raise ConstructionError("subfield degree must be at least 2")
    q = auto_q(E) if q in (None, "auto") else Fraction(q)
    # q must lie strictly between the two smallest roots
    if E.eval_exact(q) == 0 or _count_below(E, q) != 1:
        raise ConstructionError(f"q = {q} is not strictly between the two smallest roots of {E}")
    k = q.denominator
    Y = X * X + IntPolynomial([q.numerator * k])
    f = IntPolynomial([0])
    for j, e in enumerate(E.coeffs):
        f = f + (Y**j) * (e * k ** (2 * (n - j)))
    f = f.to_int()
    res = is_irreducible_over_Q(f)
    if not res.irreducible:
        raise ReducibleError(f, res)
    sig = signature(f, check=False)
    if (sig.s, sig.t) != (2 * n - 2, 1):
        raise ConstructionError(f"unexpected signature ({sig.s}, {sig.t})")
    return f


def _count_below(E: IntPolynomial, q: Fraction) -> int:
    B = cauchy_bound(E)
    if q <= -B:
        return 0
    return sturm_count(E, -B - 1, q)


# -- totally real fields from cosines ---------------------------------------------------------


def min_poly_cos(p: int) -> IntPolynomial:
    """Minimal polynomial of 2cos(2 pi / p) for an odd prime p."""
    if p < 3 or not is_prime(p):
        raise ConstructionError(f"{p} is not an odd prime")
    # x^k + x^-k as a polynomial D_k in y = x + 1/x
    D = [IntPolynomial([2]), X]
    total = IntPolynomial([1]) + X
    for _ in range(2, (p - 1) // 2 + 1):
        D.append((X * D[-1] - D[-2]).to_int())
        total = total + D[-1]
    return total.to_int()


def _primitive_root(p: int) -> int:
    phi = p - 1
    qs = [q for q in range(2, phi + 1) if phi % q == 0 and is_prime(q)]
    for r in range(2, p):
        if all(pow(r, phi // q, p) != 1 for q in qs):
            return r
    raise ConstructionError(f"no primitive root mod {p}")


def conductor_for(n: int) -> int:
    """Least prime p with n | (p-1)/2."""
    p = 3
    while True:
        if is_prime(p) and ((p - 1) // 2) % n == 0:
            return p
        p += 2


def make_totally_real(n: int, max_dps: int = 2000) -> IntPolynomial:
    """Degree-n totally real irreducible polynomial from Gaussian periods."""
    if n < 1:
        raise ConstructionError("n must be positive")
    if n == 1:
        return IntPolynomial([-1, 1])
    p = conductor_for(n)
    m = (p - 1) // 2
    r = _primitive_root(p)
    sub = [pow(r, n * i, p) for i in range(m // n)]
    dps = 30
    while dps <= max_dps:
        with iv_dps(dps):
            two_pi = 2 * iv.pi
            periods = []
            for j in range(n):
                c = pow(r, j, p)
                periods.append(sum((2 * iv.cos(two_pi * ((c * h) % p) / p) for h in sub), iv.mpf(0)))
            coeffs = [iv.mpf(1)]
            for eta in periods:
                nxt = [iv.mpf(0)] * (len(coeffs) + 1)
                for k, a in enumerate(coeffs):
                    nxt[k + 1] += a
                    nxt[k] -= a * eta
                coeffs = nxt
            ints = []
            for a in coeffs:
                lo, hi = iv_bounds(a)
                k = round((lo + hi) / 2)
                if not (k - Fraction(1, 4) <= lo and hi <= k + Fraction(1, 4)):
                    break
                ints.append(k)
            approx = [float(e.mid) for e in periods]
        if len(ints) == len(coeffs):
            break
        dps *= 2
    else:
        raise ConstructionError(f"period polynomial coefficients not certified at {max_dps} digits")
    P = IntPolynomial(ints)
    if signature(P, check=False).t != 0:
        raise ConstructionError("period polynomial is not totally real")
    res = is_irreducible_over_Q(P)
    if not res.irreducible:
        raise ReducibleError(P, res)
    roots = [float(refine_interval(P, a, b, Fraction(1, 10**15))[0]) for a, b in isolate_real_roots(P)]
    if any(not math.isclose(x, y, abs_tol=1e-9) for x, y in zip(roots, sorted(approx))):
        raise ConstructionError("period polynomial roots do not match the periods")
    return P
