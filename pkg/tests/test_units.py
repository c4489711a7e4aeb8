import math
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from oracles import pell_fundamental_unit, sylvester_resultant
from otk.numfield import NumberField
from otk.poly import IntPolynomial, RatPolynomial, parse_poly
from otk.units import (
    UnitError,
    as_unit,
    certified_log_rank,
    dilation_factor,
    is_unimodular_at_complex_place,
    is_unit,
    positive_unit_rank,
    quadratic_fundamental_unit,
    totally_positive_candidates,
    unit_search_bounded,
    unit_search_lattice,
)

F4 = NumberField(parse_poly("x^4-2"))
FM = NumberField(parse_poly("x^4+6x^2-5x-17"))
F5 = NumberField(parse_poly("x^5-4x+2"))
SQUAREFREE = [d for d in range(2, 120) if all(d % (k * k) for k in range(2, 11))]


def brute_units(f, bound):
    """Sign classes of coordinate vectors with |Res(f, h)| = 1, via Sylvester determinants."""
    out = set()
    for cs in product(range(-bound, bound + 1), repeat=f.degree):
        if not any(cs):
            continue
        if abs(sylvester_resultant(f, RatPolynomial(list(cs)))) == 1:
            out.add(max(cs, tuple(-c for c in cs)))
    return out


class TestBasics:
    def test_is_unit(self):
        assert is_unit(F4.gen - 1)
        assert not is_unit(F4.gen)
        with pytest.raises(UnitError):
            is_unit(F4.element([Fraction(1, 2)]))

    def test_as_unit(self):
        u = as_unit(F4.element([-1, 0, 1]))
        assert u.norm == 1 and u.totally_positive
        with pytest.raises(UnitError):
            as_unit(F4.gen)

    def test_group_operations(self):
        u = as_unit(F4.gen - 1)
        assert (u * u.inverse()).element == 1
        assert (u**3).element == (F4.gen - 1) ** 3


class TestBoxSearch:
    def test_matches_brute_force(self):
        f = parse_poly("x^4-2")
        found = {max(u.element.coords, tuple(-c for c in u.element.coords)) for u in unit_search_bounded(F4, 2)}
        padded = {tuple(list(k) + [0] * (4 - len(k))) for k in found}
        assert padded == brute_units(f, 2)

    def test_maximal_field_brute_force(self):
        f = parse_poly("x^4+6x^2-5x-17")
        found = unit_search_bounded(FM, 2)
        padded = {tuple(list(u.element.coords) + [0] * (4 - len(u.element.coords))) for u in found}
        padded = {max(c, tuple(-v for v in c)) for c in padded}
        assert padded == brute_units(f, 2)

    def test_alpha_minus_one_listed(self):
        coords = [u.element.coords for u in unit_search_bounded(F4, 1)]
        assert (-1, 1, 0, 0) in coords

    def test_sorted_and_exact(self):
        units = unit_search_bounded(F5, 2)
        assert units
        for u in units:
            assert abs(u.element.norm()) == 1 and u.norm == u.element.norm()
        assert len({u.element.coords for u in units}) == len(units)

    def test_threads_agree(self, monkeypatch):
        plain = unit_search_bounded(F4, 3, chunk=500)
        monkeypatch.setenv("OTK_THREADS", "4")
        threaded = unit_search_bounded(F4, 3, chunk=500)
        assert [u.element for u in plain] == [u.element for u in threaded]

    def test_negative_bound(self):
        assert unit_search_bounded(F4, -1) == []

    def test_lattice_search_finds_units(self):
        units = unit_search_lattice(FM, trials=60, seed=0)
        assert units and all(abs(u.element.norm()) == 1 for u in units)


class TestQuadratic:
    @pytest.mark.parametrize("d", SQUAREFREE)
    def test_against_pell_search(self, d):
        a, b, den = pell_fundamental_unit(d)
        u = quadratic_fundamental_unit(d)
        assert u.element.coords == (Fraction(a, den), Fraction(b, den))
        assert abs(u.norm) == 1

    @pytest.mark.parametrize(
        "d, coords",
        [(2, (1, 1)), (3, (2, 1)), (5, (Fraction(1, 2), Fraction(1, 2))), (94, (2143295, 221064))],
    )
    def test_known(self, d, coords):
        assert quadratic_fundamental_unit(d).element.coords == coords

    @pytest.mark.parametrize("d", [1, 4, 12, -3])
    def test_rejects(self, d):
        with pytest.raises(UnitError):
            quadratic_fundamental_unit(d)


class TestComplexPlace:
    def test_dilation_factor_example(self):
        u = as_unit(F4.element([-1, 0, 1]))
        df = dilation_factor(u)
        # sigma_3(alpha^2) = -sqrt 2
        assert abs(df.value - (1 + math.sqrt(2)) ** 2) < 1e-12
        assert df.lower <= df.upper and df.error < 1e-20

    def test_dilation_factor_needs_positive(self):
        with pytest.raises(UnitError):
            dilation_factor(as_unit(F4.gen - 1))

    @given(st.integers(1, 4), st.integers(1, 4))
    @settings(max_examples=16)
    def test_dilation_multiplicative(self, i, j):
        u = as_unit(F4.element([-1, 0, 1]))
        v = as_unit(F4.element([1, -2, 1]))
        a, b = u**i, v**j
        assert math.isclose(
            dilation_factor(a * b).value, dilation_factor(a).value * dilation_factor(b).value, rel_tol=1e-12
        )

    def test_unimodular_example(self):
        w = as_unit((F4.gen - 1) * (F4.gen + 1).inverse())
        assert w.totally_positive
        res = is_unimodular_at_complex_place(w)
        assert res and res.min_poly == parse_poly("x^4-12x^3+6x^2-12x+1")

    def test_not_unimodular(self):
        res = is_unimodular_at_complex_place(as_unit(F4.gen - 1))
        assert not res

    def test_plus_minus_one_excluded(self):
        with pytest.raises(UnitError):
            is_unimodular_at_complex_place(as_unit(F4.one))

    def test_unimodular_agrees_with_numeric(self):
        for u in unit_search_bounded(F4, 2) + unit_search_bounded(F5, 1):
            if u.element in (1, -1):
                continue
            z = u.element.approx()[u.field.signature.s]
            numeric = abs(abs(z) - 1) < 1e-9
            assert bool(is_unimodular_at_complex_place(u)) == numeric

    def test_wrong_signature(self):
        with pytest.raises(UnitError):
            is_unimodular_at_complex_place(quadratic_fundamental_unit(2))


class TestRank:
    def test_x4_minus_2(self):
        r = positive_unit_rank(F4, 10)
        assert r.rank == 2 and r.certified_independent >= 2
        assert all(u.totally_positive for u in r.exhibited)

    def test_maximal_needs_lattice(self):
        r = positive_unit_rank(FM, 3, lattice_trials=200)
        assert r.rank == 2 and r.certified_independent == 2

    def test_quintic(self):
        assert positive_unit_rank(F5, 2).rank == 3

    def test_rank_zero(self):
        F = NumberField(IntPolynomial([-1, 1]))
        assert positive_unit_rank(F, 2).rank == 0

    def test_dependent_units_rejected(self):
        u = as_unit(F4.element([-1, 0, 1]))
        assert certified_log_rank([u, u**2, u**3]) == [0]

    def test_candidates(self):
        units = unit_search_bounded(F4, 1)
        for c in totally_positive_candidates(units):
            assert c.totally_positive and c.element != 1
