"""Frobenius cycle types from factorizations mod p, and S_n certificates.

By Dedekind's theorem, when f mod p is squarefree its factor degrees are the
cycle type of a Frobenius element in Gal(f). The certificate accepts the
standard chain: an n-cycle (transitive), an (n-1)-cycle fixing a point
(so 2-transitive, hence primitive) and a cycle type with a single 2-cycle
and odd parts otherwise (an odd power of it is a transposition). A
primitive group containing a transposition is S_n.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from otk import gfp
from otk.poly import IntPolynomial, PolynomialError, is_irreducible_over_Q, is_prime, primes


class InconclusiveError(ValueError):
    pass


class SquarefreeFailure:
    """Marker: f mod p is not squarefree, so p says nothing about cycle types."""

    __slots__ = ("p",)

    def __init__(self, p):
        self.p = p

    def __repr__(self):
        return f"SquarefreeFailure(p={self.p})"

    def __eq__(self, other):
        return isinstance(other, SquarefreeFailure) and other.p == self.p

    def __hash__(self):
        return hash(("sqf", self.p))


@dataclass(frozen=True)
class FactorPattern:
    p: int
    degrees: tuple

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(sorted(self.degrees)))


@dataclass(frozen=True)
class Witness:
    p: int
    pattern: FactorPattern
    cycle_type: str  # "n-cycle", "(n-1)-cycle", "transposition-power"


@dataclass(frozen=True)
class GaloisCertificate:
    n: int
    witnesses: tuple = ()
    conclusion: str = "inconclusive"  # or "full_symmetric"
    seed: int = 0
    primes_scanned: tuple = field(default=(), compare=False)

    @property
    def full_symmetric(self) -> bool:
        return self.conclusion == "full_symmetric"

    def patterns(self) -> dict:
        return {w.p: list(w.pattern.degrees) for w in self.witnesses}


def factor_mod_p(P: IntPolynomial, p: int, seed: int = 0):
    """Irreducible factors of P over GF(p), each monic with coefficients in [0, p).

    Returns [(factor, multiplicity)]; the product times lc(P) mod p is P mod p.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if P.lc % p == 0:
        raise ValueError(f"{p} divides the leading coefficient")
    _, facs = gfp.factor(P.coeffs, p, seed)
    return [(IntPolynomial(f), m) for f, m in facs]


def factor_pattern(P: IntPolynomial, p: int):
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if P.lc % p == 0:
        raise ValueError(f"{p} divides the leading coefficient")
    degs = gfp.degree_pattern(P.coeffs, p)
    if degs is None:
        return SquarefreeFailure(p)
    return FactorPattern(p, tuple(degs))


def _is_transposition_power(degs) -> bool:
    evens = [d for d in degs if d % 2 == 0]
    return evens == [2]


def certify_symmetric_group(P: IntPolynomial, prime_budget: int = 100, seed: int = 0) -> GaloisCertificate:
    """Scan primes <= prime_budget for a full-symmetric Galois certificate."""
    P = P.primitive_part()
    n = P.degree
    res = is_irreducible_over_Q(P)
    if not res.irreducible:
        raise PolynomialError(f"{P} is reducible (factor {res.factor})")
    need_cycle = n >= 3
    need_transp = n >= 3
    found: dict[str, Witness] = {}
    scanned = []
    for p in primes(prime_budget):
        if P.lc % p == 0:
            continue
        pat = factor_pattern(P, p)
        scanned.append(p)
        if isinstance(pat, SquarefreeFailure):
            continue
        degs = pat.degrees
        if "n-cycle" not in found and degs == (n,):
            found["n-cycle"] = Witness(p, pat, "n-cycle")
        if need_cycle and "(n-1)-cycle" not in found and degs == (1, n - 1):
            found["(n-1)-cycle"] = Witness(p, pat, "(n-1)-cycle")
        if need_transp and "transposition-power" not in found and _is_transposition_power(degs):
            found["transposition-power"] = Witness(p, pat, "transposition-power")
        roles = {"n-cycle"} | ({"(n-1)-cycle", "transposition-power"} if n >= 3 else set())
        if roles <= set(found):
            ws = tuple(sorted(found.values(), key=lambda w: (w.p, w.cycle_type)))
            return GaloisCertificate(n, ws, "full_symmetric", seed, tuple(scanned))
    ws = tuple(sorted(found.values(), key=lambda w: (w.p, w.cycle_type)))
    return GaloisCertificate(n, ws, "inconclusive", seed, tuple(scanned))


def check_certificate(P: IntPolynomial, cert: GaloisCertificate) -> bool:
    """Re-derive every witness pattern and the conclusion from scratch."""
    P = P.primitive_part()
    n = P.degree
    if cert.n != n:
        return False
    roles = set()
    for w in cert.witnesses:
        pat = factor_pattern(P, w.p)
        if pat != w.pattern:
            return False
        degs = pat.degrees
        if w.cycle_type == "n-cycle" and degs == (n,):
            roles.add(w.cycle_type)
        elif w.cycle_type == "(n-1)-cycle" and degs == (1, n - 1):
            roles.add(w.cycle_type)
        elif w.cycle_type == "transposition-power" and _is_transposition_power(degs):
            roles.add(w.cycle_type)
        else:
            return False
    needed = {"n-cycle"} | ({"(n-1)-cycle", "transposition-power"} if n >= 3 else set())
    return (needed <= roles) == cert.full_symmetric


def no_proper_subfields(cert: GaloisCertificate, n: int) -> bool:
    """With group S_n, the stabilizer S_{n-1} is maximal: no intermediate fields."""
    if not cert.full_symmetric:
        raise InconclusiveError("certificate does not establish S_n")
    if cert.n != n:
        raise ValueError("certificate degree mismatch")
    return n >= 2
