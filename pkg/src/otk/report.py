"""JSON serialization of classification results and offline rechecking."""

from __future__ import annotations

from fractions import Fraction

from otk.galois import FactorPattern, GaloisCertificate, Witness, check_certificate
from otk.lckrank import (
    MatchingExhausted,
    NoProperSubfield,
    OddDegree,
    RankReport,
    Subfield,
    Undecided,
    UnimodularUnit,
)
from otk.numfield import SubfieldCertificate
from otk.poly import IntPolynomial, RatPolynomial, _wrap, is_irreducible_over_Q, to_string
from otk.realroots import signature


def num(c):
    """ints stay ints, other rationals become "p/q" strings."""
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def poly_json(p: RatPolynomial) -> list:
    return [num(c) for c in p.coeffs]


def poly_from_json(data) -> RatPolynomial:
    return _wrap([Fraction(c) for c in data])


def witness_json(w: Witness) -> dict:
    return {"p": w.p, "pattern": list(w.pattern.degrees), "cycle_type": w.cycle_type}


def galois_json(g: GaloisCertificate) -> dict:
    return {
        "n": g.n,
        "conclusion": g.conclusion,
        "seed": g.seed,
        "primes_scanned": list(g.primes_scanned),
        "witnesses": [witness_json(w) for w in g.witnesses],
    }


def subfield_json(c: SubfieldCertificate) -> dict:
    return {
        "field_poly": poly_json(c.field_poly),
        "subfield_poly": poly_json(c.subfield_poly),
        "subfield_text": to_string(c.subfield_poly, "y"),
        "generator": poly_json(c.generator),
        "quad_b": poly_json(c.quad_b),
        "quad_c": poly_json(c.quad_c),
        "route": c.route,
    }


def subfield_from_json(d: dict) -> SubfieldCertificate:
    return SubfieldCertificate(
        IntPolynomial(d["field_poly"]),
        IntPolynomial(d["subfield_poly"]),
        poly_from_json(d["generator"]),
        poly_from_json(d["quad_b"]),
        poly_from_json(d["quad_c"]),
        d.get("route", ""),
    )


def _matchings_json(reasons) -> list:
    return [{"pairs": [list(p) for p in pairs], "reason": why} for pairs, why in reasons]


def certificate_json(cert) -> dict:
    if isinstance(cert, OddDegree):
        data = {"n": cert.n}
    elif isinstance(cert, NoProperSubfield):
        data = galois_json(cert.galois)
    elif isinstance(cert, Subfield):
        data = subfield_json(cert.certificate)
    elif isinstance(cert, MatchingExhausted):
        data = {"matchings": _matchings_json(cert.proof.reasons)}
    elif isinstance(cert, Undecided):
        data = {"matchings": _matchings_json(cert.reasons)}
    elif isinstance(cert, UnimodularUnit):
        data = {"unit": [num(c) for c in cert.unit.element.coords]}
    else:
        raise TypeError(f"unknown certificate {cert!r}")
    return {"kind": cert.kind, "data": data}


def rank_report_json(r: RankReport) -> dict:
    cert = certificate_json(r.certificate)
    witnesses = cert["data"]["witnesses"] if cert["kind"] == "NoProperSubfield" else []
    out = {
        "field": {"poly": poly_json(r.field), "text": to_string(r.field)},
        "signature": {"s": r.s, "t": r.t},
        "degree": r.n,
        "betti1": r.b1,
        "dim_C": r.dim_C,
        "lck_rank": r.rank,
        "case": r.case,
        "certificate": cert,
        "witnesses": witnesses,
    }
    if r.cross_check:
        out["unit_cross_check"] = r.cross_check
    return out


# -- recheck ---------------------------------------------------------------------------------


def recheck(report: dict) -> dict:
    """Re-run the exact verification steps behind a serialized analysis report.

    Returns {"ok": bool, "checks": [(name, bool), ...]}.
    """
    checks = []
    f = IntPolynomial(report["field"]["poly"])
    checks.append(("irreducible", bool(is_irreducible_over_Q(f).irreducible)))
    sig = signature(f, check=False)
    checks.append(("signature", [sig.s, sig.t] == [report["signature"]["s"], report["signature"]["t"]]))
    checks.append(("betti1", report["betti1"] == sig.s))
    cert = report["certificate"]
    kind, data = cert["kind"], cert["data"]
    case = report["case"]
    if kind == "OddDegree":
        checks.append(("odd_degree", f.degree % 2 == 1 and data["n"] == f.degree))
        checks.append(("rank", case == "maximal" and report["lck_rank"] == sig.s))
    elif kind == "NoProperSubfield":
        ws = tuple(
            Witness(w["p"], FactorPattern(w["p"], tuple(w["pattern"])), w["cycle_type"]) for w in data["witnesses"]
        )
        g = GaloisCertificate(data["n"], ws, data["conclusion"], data.get("seed", 0))
        checks.append(("galois_witnesses", check_certificate(f, g) and g.full_symmetric))
        checks.append(("rank", case == "maximal" and report["lck_rank"] == sig.s))
    elif kind == "Subfield":
        sub = subfield_from_json(data)
        checks.append(("field_matches", sub.field_poly == f))
        checks.append(("subfield_exact_division", sub.verify()))
        checks.append(("rank", case == "half" and report["lck_rank"] * 2 == sig.s))
    elif kind == "MatchingExhausted":
        # the exhaustion is a search; rerunning it is the only exact recheck
        from otk.lckrank import ExhaustionProof, find_index2_totally_real_subfield
        from otk.numfield import NumberField

        again = find_index2_totally_real_subfield(NumberField(f, check=False))
        checks.append(("matching_exhausted", isinstance(again, ExhaustionProof)))
        checks.append(("rank", case == "maximal" and report["lck_rank"] == sig.s))
    elif kind == "Undecided":
        checks.append(("undecided", case == "undecided"))
    else:
        checks.append((f"unknown kind {kind}", False))
    return {"ok": all(ok for _, ok in checks), "checks": [{"name": n, "ok": ok} for n, ok in checks]}
