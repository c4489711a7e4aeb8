from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from oracles import from_sympy_coeffs, sylvester_resultant, to_sympy, x
from otk.numfield import (
    FieldError,
    NumberField,
    SubfieldCertificate,
    express_in_powers,
    relative_norm_to_subfield,
    same_subfield,
)
from otk.poly import IntPolynomial, RatPolynomial, parse_poly

F4 = NumberField(parse_poly("x^4-2"))
FM = NumberField(parse_poly("x^4+6x^2-5x-17"))
coords = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=4, max_size=4)
int_coords = st.lists(st.integers(-4, 4), min_size=4, max_size=4)
fields = st.sampled_from([F4, FM])


def sympy_char_poly(elem):
    y = sp.Symbol("y")
    f = to_sympy(elem.field.defining).as_expr().subs(x, y)
    h = to_sympy(elem.poly).as_expr().subs(x, y)
    r = sp.Poly(sp.resultant(f, x - h, y), x)
    return from_sympy_coeffs(r.monic())


class TestArithmetic:
    def test_alpha_power(self):
        a = F4.gen
        assert a**4 == 2
        assert (a**2 - 1) * (a**2 + 1) == 1

    def test_inverse_example(self):
        u = F4.element([1, 0, 1])
        assert u.inverse() * u == 1

    def test_zero_inverse(self):
        with pytest.raises(ZeroDivisionError):
            F4.zero.inverse()

    def test_mixing_fields(self):
        with pytest.raises(FieldError):
            F4.gen + FM.gen

    def test_parse_element(self):
        assert F4.parse_element("(-1, 1, 0, 0)") == F4.gen - 1
        assert F4.parse_element("(1/2)") == Fraction(1, 2)
        with pytest.raises(FieldError):
            F4.parse_element("1,2")

    @given(fields, coords, coords, coords)
    def test_ring_axioms(self, F, a, b, c):
        a, b, c = F.element(a), F.element(b), F.element(c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a and a * b == b * a
        assert a - a == F.zero

    @given(fields, coords)
    def test_inverse(self, F, a):
        a = F.element(a)
        if a.is_zero():
            return
        assert a * a.inverse() == F.one
        assert a / a == 1


class TestNormTrace:
    @given(fields, int_coords, int_coords)
    @settings(max_examples=60)
    def test_norm_multiplicative(self, F, a, b):
        a, b = F.element(a), F.element(b)
        assert (a * b).norm() == a.norm() * b.norm()

    @given(fields, coords)
    @settings(max_examples=60)
    def test_norm_is_resultant(self, F, a):
        a = F.element(a)
        if not a.is_zero():
            assert a.norm() == sylvester_resultant(F.defining, a.poly)

    @given(fields, coords, coords)
    def test_trace_linear(self, F, a, b):
        a, b = F.element(a), F.element(b)
        assert (a + b).trace() == a.trace() + b.trace()

    def test_examples(self):
        assert F4.gen.norm() == -2
        assert F4.gen.trace() == 0
        assert (F4.gen - 1).norm() == -1
        assert FM.gen.trace() == 0


class TestMinPoly:
    @given(fields, st.lists(st.integers(-3, 3), min_size=4, max_size=4))
    @settings(max_examples=40)
    def test_char_poly_matches_sympy(self, F, a):
        a = F.element(a)
        assert list(a.char_poly().coeffs) == sympy_char_poly(a)

    @given(fields, st.lists(st.integers(-3, 3), min_size=4, max_size=4))
    @settings(max_examples=40)
    def test_char_is_power_of_min(self, F, a):
        a = F.element(a)
        mp, cp = a.min_poly(), a.char_poly()
        assert F.degree % mp.degree == 0
        assert mp ** (F.degree // mp.degree) == cp
        assert mp.monic() == mp

    def test_min_poly_examples(self):
        assert F4.element([0, 0, 1]).min_poly() == parse_poly("x^2-2")
        assert F4.element([3]).min_poly() == parse_poly("x-3")
        w = F4.element([1, 1, 1, 1])
        assert w.min_poly().degree == 4

    def test_min_poly_vanishes(self):
        a = FM.element([1, 2, 0, 1])
        mp = a.min_poly()
        acc = FM.zero
        for c in reversed(mp.coeffs):
            acc = acc * a + c
        assert acc.is_zero()

    def test_sympy_minimal_polynomial(self):
        r = sp.CRootOf(sp.Poly(x**4 - 2, x), 0)
        expect = sp.Poly(sp.minimal_polynomial(r**2 + r, x), x)
        got = F4.element([0, 1, 1]).min_poly()
        assert list(got.coeffs) == from_sympy_coeffs(expect.monic())

    def test_integrality(self):
        assert F4.gen.is_integral()
        assert not F4.element([Fraction(1, 2), 1]).is_integral()


class TestPositivityAndEmbeddings:
    def test_totally_positive(self):
        assert F4.element([1, 0, 1]).is_totally_positive()
        assert not F4.gen.is_totally_positive()
        assert F4.element([-1, 0, 1]).is_totally_positive()
        assert not F4.element([-2, 0, 1]).is_totally_positive()

    @given(fields, int_coords)
    @settings(max_examples=30)
    def test_positivity_matches_numeric(self, F, a):
        a = F.element(a)
        if a.is_zero():
            return
        s = F.signature.s
        vals = [v.real for v in a.approx()[:s]]
        if min(abs(v) for v in vals) > 1e-9:
            assert a.is_totally_positive() == all(v > 0 for v in vals)

    def test_embed_consistent(self):
        a = F4.element([1, 1])
        approx = a.approx()
        r = 2**0.25
        assert abs(approx[0] - (1 - r)) < 1e-12 and abs(approx[1] - (1 + r)) < 1e-12
        assert abs(approx[2] - (1 + 1j * r)) < 1e-12

    @given(int_coords)
    @settings(max_examples=20)
    def test_norm_from_embeddings(self, a):
        a = F4.element(a)
        v = a.approx()
        numeric = (v[0] * v[1] * abs(v[2]) ** 2).real
        assert abs(numeric - float(a.norm())) <= 1e-8 * max(1.0, abs(numeric))


class TestSubfields:
    def test_express_in_powers(self):
        g = F4.element([0, 0, 1])
        c = express_in_powers(F4.element([3, 0, 2]), g, 2)
        assert c == RatPolynomial([3, 2])
        assert express_in_powers(F4.gen, g, 2) is None

    def test_same_subfield(self):
        assert same_subfield(F4.element([0, 0, 1]), F4.element([1, 0, -3]))
        assert not same_subfield(F4.element([0, 0, 1]), F4.gen)

    def test_certificate_x4_minus_2(self):
        cert = SubfieldCertificate(
            IntPolynomial([-2, 0, 0, 0, 1]),
            IntPolynomial([-2, 0, 1]),
            RatPolynomial([0, 0, -1]),
            RatPolynomial([]),
            RatPolynomial([0, 1]),
        )
        assert cert.verify()
        u = F4.element([-1, 0, 1])
        assert relative_norm_to_subfield(u, cert).norm() == u.norm()

    def test_bad_certificate(self):
        cert = SubfieldCertificate(
            IntPolynomial([-2, 0, 0, 0, 1]),
            IntPolynomial([-2, 0, 1]),
            RatPolynomial([0, 0, 1]),
            RatPolynomial([]),
            RatPolynomial([1]),
        )
        assert not cert.verify()

    @given(int_coords)
    @settings(max_examples=30)
    def test_relative_norm_transitivity(self, a):
        cert = SubfieldCertificate(
            IntPolynomial([-2, 0, 0, 0, 1]),
            IntPolynomial([-2, 0, 1]),
            RatPolynomial([0, 0, -1]),
            RatPolynomial([]),
            RatPolynomial([0, 1]),
        )
        a = F4.element(a)
        assert relative_norm_to_subfield(a, cert).norm() == a.norm()
