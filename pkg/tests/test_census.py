import itertools
from fractions import Fraction

import pytest

from gsp6.census import (
    CensusReport,
    brute_census,
    d4,
    d6_lower,
    m_formula,
    margin,
    margin_from_symbols,
    n4_t4_bounds,
    prelim_count,
    r6_upper,
    w_formula,
)
from gsp6.ff import legendre

ELLS = [5, 7, 11, 13]
QS = [19, 47, 97, 223, 311, 313, 317, 331]
GRID = [(ell, q) for ell in ELLS for q in QS if q != ell]


def test_prelim_examples():
    assert prelim_count(1, -1, 5) == 2
    assert prelim_count(1, 1, 5) == 1
    with pytest.raises(ValueError):
        prelim_count(5, 1, 5)


@pytest.mark.parametrize("ell", [3, 5, 7, 11, 13, 17, 19, 23, 29, 31])
def test_prelim_matches_scan(ell):
    for D in range(1, ell):
        for eps in (-1, 1):
            brute = sum(1 for x in range(ell) if legendre(x * x - D, ell) == eps)
            assert prelim_count(D, eps, ell) == brute


def test_closed_form_examples():
    assert d4(-1, 5, 47) == 12
    assert d4(1, 5, 47) == 7
    assert d4(-1, 7, 97) == 24
    n4, _, eq = n4_t4_bounds(5, 47)
    assert n4 == 6 and eq
    assert not n4_t4_bounds(5, 7)[2]
    assert n4_t4_bounds(7, 97)[0] == 12
    assert (m_formula(5, 47), w_formula(5, 47), d6_lower(5, 47)) == (40, 20, 20)
    assert d6_lower(13, 313) == 636
    assert r6_upper(5, 47) == 33
    assert margin(13, 313) == 60
    assert margin(5, 47) == -13
    # (-1/5) = 1 kills the second term of M
    assert m_formula(5, 11) == Fraction(16 * (4 - legendre(11, 5)), 2)
    with pytest.raises(ValueError):
        d4(1, 3, 19)


def test_r6_bound_is_exact_rational():
    # the bound has denominator 8 in general; nothing gets rounded
    vals = {r6_upper(ell, q) for ell in (5, 7, 11, 13) for q in (47, 97)}
    assert all(isinstance(v, Fraction) for v in vals)


@pytest.mark.parametrize("ell,q", GRID)
def test_census_matches_closed_forms(ell, q):
    r = brute_census(ell, q)
    assert r.d4_minus == r.d4_minus_formula
    assert r.d4_plus == r.d4_plus_formula
    assert r.d4_minus + r.d4_plus + r.d4_zero == ell * ell
    assert r.m_count == r.m_formula
    assert r.w_count == r.w_formula
    if r.quartic_equality:
        assert (r.n4, r.t4) == (r.n4_bound, r.t4_bound)
    else:
        assert r.n4 <= r.n4_bound and r.t4 <= r.t4_bound


@pytest.mark.parametrize("ell,q", [(5, 47), (5, 19), (7, 97), (7, 47), (11, 223)])
def test_degree6_bounds(ell, q):
    r = brute_census(ell, q, include_degree6=True)
    assert r.d6_star_minus >= r.d6_lower
    assert r.r6 <= r.r6_upper
    assert all(v >= 0 for v in (r.d4_minus, r.d4_plus, r.n4, r.t4, r.m_count, r.w_count,
                                r.d6_star_minus, r.r6))


@pytest.mark.parametrize("ell,q", [(3, 19), (5, 47), (7, 97), (11, 223)])
def test_small_ell_positivity(ell, q):
    assert brute_census(ell, q, include_degree6=True).d6_minus_r6 > 0


def test_margin_positive_at_13_all_signs():
    for lq, lmq in itertools.product((-1, 1), repeat=2):
        assert margin_from_symbols(13, lq, lmq) > 0


def test_threads_do_not_change_result():
    a = brute_census(7, 47, include_degree6=True, threads=1)
    b = brute_census(7, 47, include_degree6=True, threads=3)
    assert a == b


def test_report_round_trip():
    r = brute_census(5, 47, include_degree6=True)
    assert CensusReport.from_dict(r.to_dict()) == r


def test_guards():
    with pytest.raises(ValueError):
        brute_census(37, 1009)
    with pytest.raises(ValueError):
        brute_census(5, 5)
    with pytest.raises(ValueError):
        brute_census(5, 49)


def test_ell_three_reports_without_closed_forms():
    r = brute_census(3, 19, include_degree6=True)
    assert r.d4_minus_formula is None and r.margin is None
    assert r.d4_minus + r.d4_plus + r.d4_zero == 9
