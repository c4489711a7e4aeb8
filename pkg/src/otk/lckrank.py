"""LCK rank of OT manifolds with one complex place.

For F = Q[X]/(f) of signature (s, 1) the first Betti number is s and the
rank is either s or s/2; the latter happens exactly when F is quadratic
over a totally real subfield. The subfield is searched for by pairing the
roots of f: a valid pairing {r, r'} (the orbits of the nontrivial
automorphism over E) makes every symmetric function of the pairs an
integer, which is certified with interval arithmetic and then confirmed by
exact algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from mpmath import iv

from otk.galois import GaloisCertificate, certify_symmetric_group
from otk.numfield import (
    NumberField,
    SubfieldCertificate,
    express_in_powers,
    min_poly,
)
from otk.poly import IntPolynomial, RatPolynomial, is_irreducible_over_Q, poly_gcd
from otk.realroots import iv_bounds, iv_dps, signature as poly_signature
from otk.units import UnitElement, is_unimodular_at_complex_place

__all__ = [
    "SubfieldCertificate",
    "GateError",
    "OddDegree",
    "NoProperSubfield",
    "MatchingExhausted",
    "Subfield",
    "UnimodularUnit",
    "ExhaustionProof",
    "Undecided",
    "RankReport",
    "betti1",
    "find_index2_totally_real_subfield",
    "subfield_from_unimodular_unit",
    "classify",
]


class GateError(ValueError):
    """The field is not of the shape (s, 1) with s >= 1."""

    def __init__(self, s, t):
        super().__init__(f"need signature (s, 1) with s >= 1, got ({s}, {t})")
        self.s = s
        self.t = t


@dataclass(frozen=True)
class OddDegree:
    n: int
    kind = "OddDegree"


@dataclass(frozen=True)
class NoProperSubfield:
    galois: GaloisCertificate
    kind = "NoProperSubfield"


@dataclass(frozen=True)
class ExhaustionProof:
    """Every matching failed; ``reasons`` holds (matching, reason) pairs."""

    reasons: tuple = ()


@dataclass(frozen=True)
class Undecided:
    reasons: tuple = ()
    kind = "Undecided"


@dataclass(frozen=True)
class MatchingExhausted:
    proof: ExhaustionProof
    kind = "MatchingExhausted"


@dataclass(frozen=True)
class Subfield:
    certificate: SubfieldCertificate
    kind = "Subfield"


@dataclass(frozen=True)
class UnimodularUnit:
    unit: UnitElement
    kind = "UnimodularUnit"


Certificate = Union[OddDegree, NoProperSubfield, MatchingExhausted, Subfield, UnimodularUnit, Undecided]


@dataclass(frozen=True)
class RankReport:
    field: IntPolynomial
    s: int
    t: int
    n: int
    b1: int
    dim_C: int
    rank: int | None
    case: str  # "maximal", "half" or "undecided"
    certificate: Certificate
    cross_check: dict = field(default_factory=dict, compare=False)


def _gate(F: NumberField):
    sig = F.signature
    if sig.t != 1 or sig.s < 1:
        raise GateError(sig.s, sig.t)
    return sig


def betti1(F: NumberField) -> int:
    return _gate(F).s


# -- interval helpers ------------------------------------------------------------------


def _int_status(x):
    """An int if x lies within 1/4 of it, False if x holds no integer, else None."""
    if isinstance(x, iv.mpc):
        lo, hi = iv_bounds(x.imag)
        if lo > 0 or hi < 0:
            return False
        x = x.real
    lo, hi = iv_bounds(x)
    k = round((lo + hi) / 2)
    if k - Fraction(1, 4) <= lo and hi <= k + Fraction(1, 4):
        return k
    if math.ceil(lo) > hi:
        return False
    return None


def _iv_poly_from_roots(roots):
    coeffs = [iv.mpf(1)]
    for r in roots:
        nxt = [iv.mpf(0)] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            nxt[k + 1] += c
            nxt[k] -= c * r
        coeffs = nxt
    return coeffs


def _iv_interp_numerator(P: RatPolynomial, roots, values):
    """Coefficients of sum_i values[i] * P(X)/(X - roots[i])."""
    n = P.degree
    out = [iv.mpf(0)] * n
    for r, v in zip(roots, values):
        q = [iv.mpf(0)] * n
        q[n - 1] = iv.mpf(P.coeffs[n])
        for k in range(n - 1, 0, -1):
            q[k - 1] = P.coeffs[k] + r * q[k]
        for k in range(n):
            out[k] += v * q[k]
    return out


def _all_roots(F: NumberField, dps: int):
    """Enclosures of all n roots: reals ascending, then sigma_{s+1} and its conjugate."""
    emb = F.embeddings(Fraction(1, 10 ** (dps + 5)))
    boxes = emb.enclosures(dps + 10)
    s = F.signature.s
    with iv_dps(dps + 10):
        c = boxes[s]
        return boxes[:s] + [c, iv.mpc(c.real, -c.imag)]


def _matchings(items):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for k, other in enumerate(rest):
        for m in _matchings(rest[:k] + rest[k + 1 :]):
            yield ((first, other),) + m


_COMBOS = [("sum", 0), ("product", None)] + [("mixed", c) for c in range(1, 6)]


def _combine(a, b, c):
    if c is None:
        return a * b
    if c == 0:
        return a + b
    return a * b + c * (a + b)


def _pair_value(roots, i, j, c, complex_pair):
    a, b = roots[i], roots[j]
    if complex_pair:
        # a = conj(b): everything is real, computed from Re and |.|^2
        re, mod2 = a.real, a.real**2 + a.imag**2
        if c is None:
            return mod2
        if c == 0:
            return 2 * re
        return mod2 + 2 * c * re
    return _combine(a, b, c)


# -- the matching search ---------------------------------------------------------------


def _certify_ints(values):
    """List of ints, "no" if some entry is certifiably non-integral, None to refine."""
    out = []
    pending = False
    for v in values:
        st = _int_status(v)
        if st is False:
            return "no"
        if st is None:
            pending = True
        else:
            out.append(st)
    return None if pending else out


def _try_combo(F: NumberField, pairs, combo, max_dps: int):
    """Returns ("cert", cert), ("degenerate", why), ("fail", why) or ("undecided", why)."""
    f = F.defining
    n = f.degree
    s = F.signature.s
    name, c = combo
    dps = 30
    g = None
    while True:
        if dps > max_dps:
            return ("undecided", f"{name}: precision limit {max_dps} digits")
        roots = _all_roots(F, dps)
        with iv_dps(dps + 10):
            gam = [_pair_value(roots, i, j, c, i >= s) for i, j in pairs]
            if g is None:
                ints = _certify_ints(_iv_poly_from_roots(gam))
                if ints == "no":
                    return ("fail", f"{name}: pair polynomial has a non-integral coefficient")
                if ints is None:
                    dps *= 2
                    continue
                g = IntPolynomial(ints)
                if poly_gcd(g, g.derivative()).degree > 0:
                    return ("degenerate", f"{name}: pair polynomial has a repeated root")
                if not is_irreducible_over_Q(g).irreducible:
                    return ("fail", f"{name}: pair polynomial is reducible")
                if poly_signature(g, check=False).t != 0:
                    return ("fail", f"{name}: pair polynomial is not totally real")
            # gamma at each root of f, sums and products of each pair
            gam_at = [None] * n
            sums, prods = [], []
            for (i, j), v in zip(pairs, gam):
                gam_at[i] = gam_at[j] = v
                if i >= s:
                    sums.append(2 * roots[i].real)
                    prods.append(roots[i].real ** 2 + roots[i].imag ** 2)
                else:
                    sums.append(roots[i] + roots[j])
                    prods.append(roots[i] * roots[j])
            h = _certify_ints(_iv_interp_numerator(f, roots, gam_at))
            hs = _certify_ints(_iv_interp_numerator(g, gam, sums))
            hp = _certify_ints(_iv_interp_numerator(g, gam, prods))
        if "no" in (h, hs, hp):
            return ("fail", f"{name}: interpolation data not integral")
        if None in (h, hs, hp):
            dps *= 2
            continue
        break
    E = NumberField(g, check=False)
    w = F.element(IntPolynomial(h)) / F.element(f.derivative())
    dg = E.element(g.derivative())
    S = E.element(IntPolynomial(hs)) / dg
    P = E.element(IntPolynomial(hp)) / dg
    cert = SubfieldCertificate(f, g, w.poly, (-S).poly, P.poly, route=f"matching/{name}")
    if not cert.verify():
        return ("fail", f"{name}: exact verification failed")
    return ("cert", cert)


def find_index2_totally_real_subfield(F: NumberField, max_dps: int = 1280):
    """SubfieldCertificate, ExhaustionProof or Undecided for F of signature (s, 1)."""
    n = F.degree
    if n % 2:
        raise ValueError("degree is odd; no index-2 subfield")
    sig = _gate(F)
    s = sig.s
    reasons = []
    undecided = False
    for m in _matchings(list(range(s))):
        pairs = m + ((s, s + 1),)
        why = []
        verdict = None
        for combo in _COMBOS:
            kind, info = _try_combo(F, pairs, combo, max_dps)
            if kind == "cert":
                return info
            why.append(info)
            if kind != "degenerate":
                verdict = kind
                break
        if verdict is None:
            verdict = "undecided"
            why.append("every combination degenerate")
        if verdict == "undecided":
            undecided = True
        reasons.append((pairs, "; ".join(why)))
    if undecided:
        return Undecided(tuple(reasons))
    return ExhaustionProof(tuple(reasons))


def subfield_from_unimodular_unit(u: UnitElement) -> SubfieldCertificate:
    """Certificate with E = Q(u + 1/u), for a unit of modulus one at the complex place."""
    F = u.field
    n = F.degree
    if u.element == 1 or u.element == -1:
        raise ValueError("u = +-1 gives no subfield")
    res = is_unimodular_at_complex_place(u)
    if not res:
        raise ValueError(f"unit is not unimodular at the complex place ({res.reason})")
    x = u.element
    if min_poly(x).degree != n:
        raise ValueError("u does not generate F")
    gamma = x + x.inverse()
    g = min_poly(gamma)
    if g.degree != n // 2 or n % 2:
        raise ValueError(f"u + 1/u has degree {g.degree}, expected {n // 2}")
    g = g.to_int()
    if poly_signature(g, check=False).t != 0:
        raise ValueError("u + 1/u is not totally real")
    # alpha = h(u); the automorphism over E swaps u and 1/u
    h = express_in_powers(F.gen, x, n)
    tau_alpha = F.element(h(x.inverse()))
    alpha = F.gen
    S = express_in_powers(alpha + tau_alpha, gamma, n // 2)
    P = express_in_powers(alpha * tau_alpha, gamma, n // 2)
    if S is None or P is None:
        raise ValueError("trace or norm of alpha does not lie in Q(u + 1/u)")
    cert = SubfieldCertificate(F.defining, g, gamma.poly, -S, P, route="unimodular-unit")
    if not cert.verify():
        raise ValueError("subfield certificate from unit failed verification")
    return cert


def _unit_cross_check(F: NumberField, bound: int, case: str) -> dict:
    from otk.units import unit_search_bounded

    found = []
    for u in unit_search_bounded(F, bound):
        if not u.totally_positive or u.element == 1:
            continue
        if is_unimodular_at_complex_place(u):
            found.append(u)
    # a missing witness proves nothing: the box may simply be too small
    agrees = (case == "half") if found else None
    return {
        "bound": bound,
        "unimodular_units": [u.element.to_list() for u in found],
        "agrees": agrees,
    }


def classify(F: NumberField, prime_budget: int = 100, seed: int = 0, units_bound: int | None = None) -> RankReport:
    sig = _gate(F)
    s, t, n = sig.s, sig.t, F.degree
    if n % 2:
        cert, case, rank = OddDegree(n), "maximal", s
    else:
        gal = certify_symmetric_group(F.defining, prime_budget, seed)
        if gal.full_symmetric:
            cert, case, rank = NoProperSubfield(gal), "maximal", s
        else:
            found = find_index2_totally_real_subfield(F)
            if isinstance(found, SubfieldCertificate):
                cert, case, rank = Subfield(found), "half", s // 2
            elif isinstance(found, ExhaustionProof):
                cert, case, rank = MatchingExhausted(found), "maximal", s
            else:
                cert, case, rank = found, "undecided", None
    cross = {}
    if units_bound is not None:
        cross = _unit_cross_check(F, units_bound, case)
    return RankReport(F.defining, s, t, n, s, n - 1, rank, case, cert, cross)
