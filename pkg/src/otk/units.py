"""Units of Z[alpha]: detection, bounded search, dilation factors at the complex place."""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import iv

from otk.numfield import (
    FieldElement,
    FieldError,
    NumberField,
    SubfieldCertificate,
    _iv_horner,
    is_totally_positive,
    min_poly,
    norm,
    relative_norm_to_subfield,
)
from otk.poly import IntPolynomial
from otk.realroots import iv_bounds, iv_dps, refine_embeddings


class UnitError(ValueError):
    pass


@dataclass(frozen=True)
class UnitElement:
    element: FieldElement
    norm: int
    totally_positive: bool

    @property
    def field(self) -> NumberField:
        return self.element.field

    def __mul__(self, other: "UnitElement") -> "UnitElement":
        return as_unit(self.element * other.element)

    def __pow__(self, k: int) -> "UnitElement":
        return as_unit(self.element**k)

    def inverse(self) -> "UnitElement":
        return as_unit(self.element.inverse())


def as_unit(x: FieldElement) -> UnitElement:
    """Wrap x as a unit after checking integrality and the norm."""
    if not is_unit(x):
        raise UnitError(f"{x.to_text()} is not a unit")
    tp = is_totally_positive(x) if x.field.signature.s else False
    return UnitElement(x, int(norm(x)), tp)


def is_unit(x: FieldElement) -> bool:
    if x.is_zero():
        return False
    if not x.is_integral():
        raise UnitError(f"{x.to_text()} is not integral")
    return abs(norm(x)) == 1


def _canonical_key(coords):
    return (
        max(abs(c) for c in coords),
        sum(abs(c) for c in coords),
        sum(1 for c in coords if c < 0),
        tuple(coords),
    )


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("OTK_THREADS", "1")))
    except ValueError:
        return 1


def unit_search_bounded(F: NumberField, coeff_bound: int, chunk: int = 200_000) -> list[UnitElement]:
    """Units with integer power-basis coordinates in [-bound, bound].

    Units are deduplicated up to sign. When one of u, -u is totally positive
    that one is kept, otherwise the one whose top nonzero coordinate is
    positive. A floating prefilter on the product of the embeddings picks
    candidates and every returned unit has its norm checked exactly.
    OTK_THREADS sets the number of prefilter workers.
    """
    if coeff_bound < 0:
        return []
    n = F.degree
    roots = np.array(F.embeddings(Fraction(1, 10**18)).all_approx(), dtype=complex)
    V = np.vander(roots, n, increasing=True).T  # V[k, i] = root_i ** k
    side = 2 * coeff_bound + 1
    total = side**n
    powers = side ** np.arange(n, dtype=np.int64)

    def prefilter(start):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        coords = (idx[:, None] // powers[None, :]) % side - coeff_bound
        nm = np.prod(coords.astype(float) @ V, axis=1).real
        return coords[np.abs(np.abs(nm) - 1.0) < 0.5]

    starts = range(0, total, chunk)
    workers = _threads()
    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(workers) as pool:
            batches = list(pool.map(prefilter, starts))
    else:
        batches = [prefilter(st) for st in starts]
    found: dict[tuple, UnitElement] = {}
    for batch in batches:
        for row in batch:
            cs = [int(c) for c in row]
            if not any(cs):
                continue
            last = next(c for c in reversed(cs) if c)
            key = tuple(cs) if last > 0 else tuple(-c for c in cs)
            if key in found:
                continue
            x = F.element(key)
            nx = norm(x)
            if abs(nx) != 1:
                continue
            if F.signature.s and not is_totally_positive(x) and is_totally_positive(-x):
                x = -x
            found[key] = UnitElement(x, int(nx), F.signature.s > 0 and is_totally_positive(x))
    return sorted(found.values(), key=lambda u: _canonical_key(u.element.coords))


# -- lattice search ------------------------------------------------------------------------


def _lll(B, delta: float = 0.75):
    """Floating LLL on the rows of B; returns the integer transform U (rows of U @ B reduced)."""
    B = np.array(B, dtype=float)
    n = len(B)
    U = np.eye(n, dtype=object)

    def gram_schmidt():
        Q = np.zeros_like(B)
        mu = np.zeros((n, n))
        for i in range(n):
            v = B[i].copy()
            for j in range(i):
                mu[i, j] = B[i] @ Q[j] / (Q[j] @ Q[j])
                v -= mu[i, j] * Q[j]
            Q[i] = v
        return Q, mu

    Q, mu = gram_schmidt()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k, j])
            if q:
                B[k] -= q * B[j]
                U[k] = U[k] - q * U[j]
                Q, mu = gram_schmidt()
        if Q[k] @ Q[k] >= (delta - mu[k, k - 1] ** 2) * (Q[k - 1] @ Q[k - 1]):
            k += 1
        else:
            B[[k, k - 1]] = B[[k - 1, k]]
            U[[k, k - 1]] = U[[k - 1, k]]
            Q, mu = gram_schmidt()
            k = max(k - 1, 1)
    return U


def _flat(vals, s):
    out = [v.real for v in vals[:s]]
    for v in vals[s:]:
        out += [math.sqrt(2) * v.real, math.sqrt(2) * v.imag]
    return out


def unit_search_lattice(F: NumberField, trials: int = 300, seed: int = 0) -> list[UnitElement]:
    """Units of Z[alpha] found as quotients of short vectors in reweighted embedding lattices.

    For random log-weights the first LLL vectors are elements of small norm;
    two of them with the same |norm| whose quotient lies in Z[alpha] give a
    unit. Everything returned is verified exactly.
    """
    n = F.degree
    s = F.signature.s
    r = s + F.signature.t
    roots = F.embeddings(Fraction(1, 10**18)).approx()
    P = np.array([_flat([z**k for z in roots], s) for k in range(n)])
    rng = np.random.default_rng(seed)
    by_norm: dict[int, list[FieldElement]] = {}
    found: dict[tuple, FieldElement] = {}

    def record(x):
        last = next(c for c in reversed(x.coords) if c)
        if last < 0:
            x = -x
        found.setdefault(x.coords, x)

    for _ in range(trials):
        lam = rng.normal(size=r) * 3
        lam -= lam.mean()
        w = np.concatenate([np.exp(lam[:s]), np.repeat(np.exp(lam[s:]), 2)])
        U = _lll(P * w)
        for row in U[:2]:
            x = F.element([int(c) for c in row])
            m = abs(norm(x))
            if m == 1:
                record(x)
                continue
            bucket = by_norm.setdefault(m, [])
            for y in bucket:
                q = x / y
                if all(Fraction(c).denominator == 1 for c in q.coords) and abs(norm(q)) == 1:
                    record(q)
            if x not in bucket and len(bucket) < 40:
                bucket.append(x)
    out = []
    for x in found.values():
        if F.signature.s and not is_totally_positive(x) and is_totally_positive(-x):
            x = -x
        out.append(UnitElement(x, int(norm(x)), F.signature.s > 0 and is_totally_positive(x)))
    return sorted(out, key=lambda u: _canonical_key(u.element.coords))


# -- real quadratic fields ---------------------------------------------------


def _squarefree_int(d: int) -> bool:
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _cf_quadratic(P: int, Q: int, d: int):
    """Partial quotients of (P + sqrt d)/Q, with Q | d - P^2, Q > 0."""
    r = math.isqrt(d)
    while True:
        a = (P + r) // Q
        yield a
        P = a * Q - P
        Q = (d - P * P) // Q


def quadratic_fundamental_unit(d: int) -> UnitElement:
    """Fundamental unit of the ring of integers of Q(sqrt d), in Q[X]/(X^2 - d).

    The unit eta = p + q*omega (omega = sqrt d, or (1 + sqrt d)/2 when
    d = 1 mod 4) has a small conjugate, so p/q is a convergent of
    -conj(omega); the first convergent of norm +-1 is the fundamental unit.
    """
    if d <= 1 or not _squarefree_int(d):
        raise UnitError(f"{d} is not a squarefree integer > 1")
    F = NumberField(IntPolynomial([-d, 0, 1]), check=False)
    half = d % 4 == 1
    cf = _cf_quadratic(-1, 2, d) if half else _cf_quadratic(0, 1, d)
    p0, p1 = 1, next(cf)
    q0, q1 = 0, 1
    while True:
        if half:
            nrm = p1 * p1 + p1 * q1 - (d - 1) // 4 * q1 * q1
        else:
            nrm = p1 * p1 - d * q1 * q1
        if abs(nrm) == 1:
            break
        a = next(cf)
        p0, p1 = p1, a * p1 + p0
        q0, q1 = q1, a * q1 + q0
    if half:
        x = F.element((Fraction(2 * p1 + q1, 2), Fraction(q1, 2)))
    else:
        x = F.element((p1, q1))
    return UnitElement(x, nrm, is_totally_positive(x))


# -- the complex place ---------------------------------------------------------------


def _require_one_complex_place(F: NumberField):
    sig = F.signature
    if sig.t != 1:
        raise UnitError(f"need exactly one complex place, signature is ({sig.s}, {sig.t})")
    return sig


def complex_place_value(x: FieldElement, dps: int = 30):
    """Rigorous enclosure of sigma_{s+1}(x) as an mpmath interval complex."""
    sig = _require_one_complex_place(x.field)
    return x.embed(dps)[sig.s]


def _abs2(z):
    if isinstance(z, iv.mpc):
        return z.real**2 + z.imag**2
    return z * z


@dataclass(frozen=True)
class DilationFactor:
    """|sigma_{s+1}(u)|^2, enclosed in [lower, upper]."""

    unit: UnitElement
    lower: Fraction
    upper: Fraction
    exact_form: FieldElement | None = None

    @property
    def value(self) -> float:
        return float((self.lower + self.upper) / 2)

    @property
    def error(self) -> float:
        return float((self.upper - self.lower) / 2)


def dilation_factor(u: UnitElement, cert: SubfieldCertificate | None = None, dps: int = 30) -> DilationFactor:
    F = u.field
    _require_one_complex_place(F)
    if not u.totally_positive:
        raise UnitError("dilation factors are defined for totally positive units")
    with iv_dps(dps + 10):
        v = _abs2(complex_place_value(u.element, dps))
        lo, hi = iv_bounds(v)
    exact = None
    if cert is not None:
        exact = relative_norm_to_subfield(u.element, cert)
        gamma = cert.gamma(F)
        with iv_dps(dps + 10):
            g = complex_place_value(gamma, dps)
            e = _iv_horner(exact.poly, g)
            elo, ehi = iv_bounds(e.real if isinstance(e, iv.mpc) else e)
        if ehi < lo or elo > hi:
            raise FieldError("exact relative norm disagrees with |sigma_{s+1}(u)|^2")
    return DilationFactor(u, lo, hi, exact)


@dataclass(frozen=True)
class UnimodularResult:
    unimodular: bool
    reason: str
    min_poly: IntPolynomial
    dps: int = 0

    def __bool__(self):
        return self.unimodular


def _root_disks(P: IntPolynomial, eps: Fraction):
    emb = refine_embeddings(P, eps, check=False)
    disks = [((a + b) / 2, Fraction(0), (b - a) / 2) for a, b in emb.real_roots]
    for c in emb.complex_roots:
        disks.append((c.re, c.im, c.radius))
        disks.append((c.re, -c.im, c.radius))
    return disks


def _box_hits(disks, re_lo, re_hi, im_lo, im_hi):
    """Indices of disks that may meet the box; exact rational geometry."""
    hits = []
    for k, (cx, cy, r) in enumerate(disks):
        dx = max(re_lo - cx, Fraction(0), cx - re_hi)
        dy = max(im_lo - cy, Fraction(0), cy - im_hi)
        if dx * dx + dy * dy <= r * r:
            hits.append(k)
    return hits


def is_unimodular_at_complex_place(u: UnitElement, max_dps: int = 640) -> UnimodularResult:
    """Decide |sigma_{s+1}(u)| = 1 exactly.

    A reciprocal minimal polynomial is necessary. When it holds, the values
    conj(sigma(u)) and 1/sigma(u) are both roots of P_u; landing in the same
    isolating disk proves they coincide.
    """
    F = u.field
    _require_one_complex_place(F)
    if u.element == 1 or u.element == -1:
        raise UnitError("u = +-1 is excluded")
    P = min_poly(u.element).to_int()
    if not P.is_reciprocal():
        anti = list(P.coeffs[::-1]) == [-c for c in P.coeffs]
        return UnimodularResult(False, "min poly anti-reciprocal" if anti else "min poly not reciprocal", P)
    dps = 30
    while dps <= max_dps:
        with iv_dps(dps + 10):
            z = complex_place_value(u.element, dps)
            m2 = _abs2(z)
            lo, hi = iv_bounds(m2)
            if lo > 1 or hi < 1:
                return UnimodularResult(False, "modulus certified != 1", P, dps)
            inv = 1 / z
            c_re = iv_bounds(z.real)
            c_im = iv_bounds(-z.imag)
            i_re = iv_bounds(inv.real)
            i_im = iv_bounds(inv.imag)
        disks = _root_disks(P, Fraction(1, 10 ** (dps // 2)))
        a = _box_hits(disks, *c_re, *c_im)
        b = _box_hits(disks, *i_re, *i_im)
        if len(a) == 1 and a == b:
            return UnimodularResult(True, "conjugate equals inverse in one isolating disk", P, dps)
        if len(a) == 1 and len(b) == 1:
            return UnimodularResult(False, "conjugate and inverse isolated apart", P, dps)
        dps *= 2
    raise UnitError("precision limit reached while deciding unimodularity")


# -- Dirichlet rank -------------------------------------------------------------------------


@dataclass(frozen=True)
class PositiveUnitRank:
    rank: int
    exhibited: tuple = ()
    certified_independent: int = 0
    search_bound: int = 0
    log_precision: str = "1e-20"


def log_vector(u: UnitElement, dps: int = 30):
    """Interval logs (log sigma_1 u, ..., log sigma_s u, 2 log|sigma_{s+1} u|, ...)."""
    F = u.field
    s = F.signature.s
    vals = u.element.embed(dps)
    with iv_dps(dps + 10):
        out = [iv.log(v) for v in vals[:s]]
        out += [iv.log(_abs2(v)) for v in vals[s:]]
    return out


def certified_log_rank(units, dps: int = 30) -> list[int]:
    """Greedy indices of units whose log vectors are certifiably independent."""
    if not units:
        return []
    F = units[0].field
    r = F.signature.s + F.signature.t - 1
    if r == 0:
        return []
    chosen: list[int] = []
    vecs = []
    for i, u in enumerate(units):
        v = log_vector(u, dps)[:r]
        trial = vecs + [v]
        k = len(trial)
        ok = False
        with iv_dps(dps + 10):
            for rows in itertools.combinations(range(r), k):
                M = iv.matrix([[vec[j] for j in rows] for vec in trial])
                d = iv.mpf(iv.det(M))
                lo, hi = iv_bounds(d)
                if lo > 0 or hi < 0:
                    ok = True
                    break
        if ok:
            chosen.append(i)
            vecs = trial
            if len(chosen) == r:
                break
    return chosen


def positive_unit_rank(
    F: NumberField, search_bound: int = 10, dps: int = 30, lattice_trials: int = 0
) -> PositiveUnitRank:
    """Dirichlet rank s+t-1 of the totally positive units, with an exhibited independent set.

    Candidates are the totally positive units of the search box together with
    squares of the other units found there; with ``lattice_trials`` the
    lattice search tops them up when the box is too small.
    """
    sig = F.signature
    if sig.s == 0:
        raise UnitError("positive units need a real place")
    rank = sig.s + sig.t - 1
    if rank == 0:
        return PositiveUnitRank(0, (), 0, search_bound, f"1e-{dps - 10}")
    cands = totally_positive_candidates(unit_search_bounded(F, search_bound))
    idx = certified_log_rank(cands, dps)
    if len(idx) < rank and lattice_trials:
        cands += totally_positive_candidates(unit_search_lattice(F, lattice_trials))
        idx = certified_log_rank(cands, dps)
    picked = tuple(cands[i] for i in idx)
    return PositiveUnitRank(rank, picked, len(picked), search_bound, f"1e-{dps - 10}")


def totally_positive_candidates(units) -> list[UnitElement]:
    """Each unit if totally positive, else its square; 1 and repeats dropped."""
    out = []
    seen = set()
    for u in units:
        v = u if u.totally_positive else u * u
        if v.element == 1 or v.element.coords in seen:
            continue
        seen.add(v.element.coords)
        out.append(v)
    return out
