"""End-to-end acceptance checks. Each test is one criterion; the terminal summary lists them."""

import json
import random
import time
from fractions import Fraction

import mpmath
import pytest

from generators import random_spec
from otk import gfp
from otk.cli import main
from otk.construct import make_maximal
from otk.galois import factor_mod_p
from otk.lckrank import classify, subfield_from_unimodular_unit
from otk.numfield import NumberField, same_subfield
from otk.poly import IntPolynomial, parse_poly, poly_gcd, primes
from otk.realroots import cauchy_bound, isolate_real_roots, sturm_count
from otk.units import as_unit, certified_log_rank, is_unimodular_at_complex_place, positive_unit_rank

P = parse_poly


def cli(capsys, *argv):
    start = time.perf_counter()
    code = main(list(argv))
    elapsed = time.perf_counter() - start
    return code, json.loads(capsys.readouterr().out), elapsed


@pytest.mark.criterion(1, "maximal table row: S4 witnesses at 2, 3, 5, rank 2")
def test_criterion_1_maximal(capsys):
    code, rep, elapsed = cli(capsys, "analyze", "x^4+6x^2-5x-17")
    assert code == 0
    assert rep["signature"] == {"s": 2, "t": 1}
    assert (rep["betti1"], rep["lck_rank"], rep["case"]) == (2, 2, "maximal")
    assert rep["certificate"]["kind"] == "NoProperSubfield"
    assert {w["p"]: w["pattern"] for w in rep["witnesses"]} == {2: [4], 3: [1, 3], 5: [1, 1, 2]}
    assert elapsed < 1.0


@pytest.mark.criterion(2, "half table row: g = Y^2 - 2, exact factorization over E")
def test_criterion_2_half(capsys):
    code, rep, elapsed = cli(capsys, "analyze", "x^4-2")
    assert code == 0 and elapsed < 1.0
    assert (rep["betti1"], rep["lck_rank"], rep["case"]) == (2, 1, "half")
    cert = classify(NumberField(P("x^4-2"))).certificate.certificate
    assert cert.subfield_poly == P("x^2-2")
    assert rep["certificate"]["data"]["subfield_poly"] == [-2, 0, 1]
    # X^2 + b X + c with b = 0 and c = +-sqrt2; dividing f leaves X^2 -+ sqrt2 with zero remainder
    E = cert.subfield()
    assert cert.quad_b.is_zero() and E.element(cert.quad_c) ** 2 == 2
    assert cert.cofactor() == [-E.element(cert.quad_c), E.zero, E.one]
    assert cert.verify()


@pytest.mark.criterion(3, "odd degree: signature (3,1), rank 3, OddDegree")
def test_criterion_3_odd(capsys):
    code, rep, _ = cli(capsys, "analyze", "x^5-4x+2")
    assert code == 0
    assert rep["signature"] == {"s": 3, "t": 1}
    assert rep["lck_rank"] == 3 and rep["certificate"]["kind"] == "OddDegree"


@pytest.mark.criterion(4, "half construction at n=3: degree 6, (4,1), Half, rank 2")
def test_criterion_4_construct_half(capsys):
    code, rep, elapsed = cli(capsys, "construct", "half", "--subfield", "x^3+x^2-2x-1", "--q", "auto")
    assert code == 0 and elapsed < 10.0
    a = rep["analysis"]
    assert a["degree"] == 6 and a["signature"] == {"s": 4, "t": 1}
    assert a["case"] == "half" and a["lck_rank"] == 2 == a["betti1"] // 2


@pytest.mark.criterion(5, "unimodular unit in Q(2^(1/4)) gives Y^2 - 12Y + 4 = Q(sqrt2)")
def test_criterion_5_unimodular():
    F = NumberField(P("x^4-2"))
    x = (F.gen - 1) * (F.gen + 1).inverse()
    u = as_unit(x)
    assert u.totally_positive
    assert x.min_poly() == P("x^4-12x^3+6x^2-12x+1")
    assert x.min_poly().is_reciprocal()
    assert bool(is_unimodular_at_complex_place(u)) is True
    cert = subfield_from_unimodular_unit(u)
    assert cert.subfield_poly == P("x^2-12x+4")
    half = classify(F).certificate.certificate
    assert same_subfield(cert.gamma(F), half.gamma(F))
    # Q(6 + 4 sqrt2) = Q(sqrt2) directly: (Y - 6)^2 = 32
    assert F.element(((cert.gamma(F) - 6) * Fraction(1, 4)) ** 2) == 2


@pytest.mark.criterion(6, "Dirichlet rank 2 for x^4-2 with 2 certified independent units at bound 10")
def test_criterion_6_dirichlet():
    F = NumberField(P("x^4-2"))
    start = time.perf_counter()
    r = positive_unit_rank(F, search_bound=10, dps=30)
    elapsed = time.perf_counter() - start
    assert r.rank == 2 == F.signature.s + F.signature.t - 1
    assert len(r.exhibited) >= 2 and r.certified_independent >= 2
    assert r.log_precision == "1e-20"
    assert all(u.totally_positive and abs(u.element.norm()) == 1 for u in r.exhibited)
    assert certified_log_rank(list(r.exhibited), dps=30) == [0, 1]
    assert elapsed < 30.0


@pytest.mark.criterion(7, "geometry suite on the three example fields, 1000 samples")
@pytest.mark.parametrize("text", ["x^4+6x^2-5x-17", "x^4-2", "x^5-4x+2"])
def test_criterion_7_geometry(capsys, text):
    code, rep, elapsed = cli(capsys, "verify-geometry", text, "--samples", "1000", "--seed", "0", "--tol", "1e-9")
    assert code == 0 and rep["passed"] and elapsed < 10.0
    by_kind = {}
    for c in rep["checks"]:
        by_kind.setdefault(c["name"].split()[0], []).append(c)
    hess = by_kind["hessian_positive_definite"][0]
    assert hess["passed"] and hess["samples"] == 1000 and hess["failures"] == 0
    for kind, tol in [("homothety", 1e-9), ("log_constant", 1e-9), ("group_law", 1e-12), ("commutator", 1e-12)]:
        assert by_kind[kind], kind
        for c in by_kind[kind]:
            assert c["tol"] <= tol and c["worst"] <= tol, (kind, c)


def _numeric_real_roots(p, dps=60):
    with mpmath.workdps(dps):
        roots = mpmath.polyroots([int(c) for c in reversed(p.coeffs)], maxsteps=400, extraprec=4 * dps)
        return sorted(mpmath.re(r) for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** (-dps // 2))


def _sturm_property(rng):
    checked = 0
    while checked < 200:
        deg = rng.randint(1, 6)
        p = IntPolynomial([rng.randint(-20, 20) for _ in range(deg)] + [rng.choice([-3, -2, -1, 1, 2, 3])])
        if poly_gcd(p, p.derivative()).degree > 0:
            continue
        B = cauchy_bound(p)
        numeric = _numeric_real_roots(p)
        ivs = isolate_real_roots(p)
        assert sturm_count(p, -B, B) == len(numeric) == len(ivs), p
        for (a, b), r in zip(ivs, numeric):
            assert a - Fraction(1, 10**20) <= Fraction(str(r)) <= b + Fraction(1, 10**20), p
        checked += 1
    return checked


def _element_property(rng):
    fields = [NumberField(P(t)) for t in ("x^4-2", "x^4+6x^2-5x-17", "x^5-4x+2", "x^6-14x^4+28x^2+56")]
    for k in range(200):
        F = rng.choice(fields)
        n = F.degree

        def rand_elem():
            cs = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)]
            if n % 2 == 0 and rng.random() < 0.3:
                cs = [c if i % 2 == 0 else 0 for i, c in enumerate(cs)]  # often in a proper subfield
            return F.element(cs)

        a, b = rand_elem(), rand_elem()
        assert (a * b).norm() == a.norm() * b.norm()
        mp, cp = a.min_poly(), a.char_poly()
        assert n % mp.degree == 0 and mp ** (n // mp.degree) == cp
    return 200


def _factor_property(rng):
    ps = list(primes(50))
    for _ in range(100):
        p = rng.choice(ps)
        deg = rng.randint(1, 8)
        lc = rng.choice([c for c in range(1, 4 * p) if c % p])
        P_ = IntPolynomial([rng.randint(-50, 50) for _ in range(deg)] + [lc])
        facs = factor_mod_p(P_, p, seed=rng.randint(0, 10**6))
        prod = [lc % p]
        for f, m in facs:
            assert f.lc == 1 and gfp.is_irreducible(list(f.coeffs), p)
            for _ in range(m):
                prod = gfp.mul(prod, list(f.coeffs), p)
        assert prod == gfp.reduce(P_.coeffs, p)
    return 100


def _maximal_property(rng):
    for _ in range(50):
        spec = random_spec(rng, rng.choice([2, 3, 4]))
        f = make_maximal(spec)
        for h, p in ((spec.f1, 2), (spec.f2, 3), (spec.f3, 5)):
            assert gfp.reduce(f.coeffs, p) == gfp.reduce(h.coeffs, p)
        assert f.lc == 1 and f.degree == 2 * spec.n
    return 50


@pytest.mark.criterion(8, "property suites: Sturm 200, elements 200, factor_mod_p 100, make_maximal 50")
def test_criterion_8_properties():
    rng = random.Random(20240601)
    counts = (_sturm_property(rng), _element_property(rng), _factor_property(rng), _maximal_property(rng))
    assert counts == (200, 200, 100, 50)
