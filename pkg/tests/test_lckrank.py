import pytest
from hypothesis import given, settings, strategies as st
from sympy.polys.numberfields.galoisgroups import galois_group

from oracles import to_sympy
from otk.lckrank import (
    ExhaustionProof,
    GateError,
    betti1,
    classify,
    find_index2_totally_real_subfield,
    subfield_from_unimodular_unit,
)
from otk.numfield import NumberField, SubfieldCertificate, same_subfield
from otk.poly import IntPolynomial, is_irreducible_over_Q, parse_poly
from otk.realroots import signature
from otk.units import as_unit, unit_search_bounded

P = parse_poly


def field(text):
    return NumberField(P(text))


def has_index2_subfield(f):
    """A block system with n/2 blocks of size 2 is exactly a subfield of index 2."""
    G, _ = galois_group(to_sympy(f), by_name=False)
    return any(len(set(b)) == f.degree // 2 for b in G.minimal_blocks())


class TestWorkedExamples:
    def test_maximal(self):
        r = classify(field("x^4+6x^2-5x-17"))
        assert (r.s, r.t, r.b1, r.rank, r.case) == (2, 1, 2, 2, "maximal")
        assert r.certificate.kind == "NoProperSubfield"
        assert r.certificate.galois.patterns() == {2: [4], 3: [1, 3], 5: [1, 1, 2]}

    def test_half(self):
        r = classify(field("x^4-2"))
        assert (r.b1, r.rank, r.case) == (2, 1, "half")
        cert = r.certificate.certificate
        assert cert.subfield_poly == P("x^2-2")
        assert cert.verify()
        # f = (X^2 - sqrt2)(X^2 + sqrt2) over E, rebuilt by multiplication
        E = cert.subfield()
        quad = [E.element(cert.quad_c), E.element(cert.quad_b), E.one]
        co = cert.cofactor()
        prod = [E.zero] * 5
        for i, a in enumerate(quad):
            for j, b in enumerate(co):
                prod[i + j] = prod[i + j] + a * b
        assert prod == [E.element(c) for c in cert.field_poly.coeffs]
        assert co == [E.element([0, -1]), E.zero, E.one]

    def test_odd_degree(self):
        r = classify(field("x^5-4x+2"))
        assert (r.s, r.t, r.rank, r.certificate.kind) == (3, 1, 3, "OddDegree")

    def test_gate(self):
        with pytest.raises(GateError):
            classify(field("x^3+x^2-2x-1"))
        with pytest.raises(GateError):
            betti1(field("x^4+1"))


class TestSubfieldSearch:
    def test_exhaustion_on_s4_field(self):
        out = find_index2_totally_real_subfield(field("x^4+6x^2-5x-17"))
        assert isinstance(out, ExhaustionProof)
        assert len(out.reasons) == 1

    def test_quadratic_subfield_only(self):
        f = P("x^6-2x^3-18x^2+1")
        assert not has_index2_subfield(f)
        r = classify(NumberField(f))
        assert r.case == "maximal" and r.rank == 4 and r.certificate.kind == "MatchingExhausted"
        assert len(r.certificate.proof.reasons) == 3

    def test_odd_degree_rejected(self):
        with pytest.raises(ValueError):
            find_index2_totally_real_subfield(field("x^5-4x+2"))

    @pytest.mark.parametrize(
        "text",
        ["x^4-2", "x^4-2x^2-1", "x^4-3", "x^6-14x^4+28x^2+56", "x^6-2x^3-18x^2+1", "x^4+6x^2-5x-17", "x^4-x-1"],
    )
    def test_against_galois_blocks(self, text):
        f = P(text)
        r = classify(NumberField(f))
        assert (r.case == "half") == has_index2_subfield(f)
        if r.case == "half":
            assert r.certificate.certificate.verify()

    @given(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6))
    @settings(max_examples=40)
    def test_random_quartics(self, a, b, c):
        f = IntPolynomial([c, b, a, 0, 1])
        if c == 0 or not is_irreducible_over_Q(f).irreducible:
            return
        sig = signature(f, check=False)
        if (sig.s, sig.t) != (2, 1):
            return
        r = classify(NumberField(f, check=False))
        assert (r.case == "half") == has_index2_subfield(f)
        assert r.rank == (1 if r.case == "half" else 2)

    def test_certificate_tamper(self):
        cert = classify(field("x^4-2")).certificate.certificate
        bad = SubfieldCertificate(cert.field_poly, cert.subfield_poly, cert.generator, cert.quad_b, cert.quad_c + 1)
        assert not bad.verify()


class TestUnimodularRoute:
    def test_w(self):
        F = field("x^4-2")
        w = as_unit((F.gen - 1) * (F.gen + 1).inverse())
        cert = subfield_from_unimodular_unit(w)
        assert cert.subfield_poly == P("x^2-12x+4")
        assert cert.verify()
        half = classify(F).certificate.certificate
        assert same_subfield(cert.gamma(F), half.gamma(F))

    def test_rejects_non_unimodular(self):
        F = field("x^4-2")
        with pytest.raises(ValueError):
            subfield_from_unimodular_unit(as_unit(F.gen - 1))

    def test_cross_check(self):
        r = classify(field("x^4-2"), units_bound=3)
        assert r.cross_check["agrees"] is True
        r = classify(field("x^4+6x^2-5x-17"), units_bound=2)
        assert r.cross_check["agrees"] is None
        assert r.cross_check["unimodular_units"] == []

    def test_every_unimodular_unit_gives_a_subfield(self):
        F = field("x^4-2")
        for u in unit_search_bounded(F, 3):
            if u.element in (1, -1) or not u.totally_positive:
                continue
            try:
                cert = subfield_from_unimodular_unit(u)
            except ValueError:
                continue
            assert cert.verify() and cert.subfield().degree == 2
