from fractions import Fraction

import mpmath as mp
from pytest import fixture, mark, raises

from semiclassical.commons.errors import DivergentSeries, PoleInDenominator
from semiclassical.core.exact import pochhammer
from semiclassical.core.hyper import (
    ConvergenceClass, HyperSeries, classify_convergence, eval_hyper, eval_hyper_finite_sum, reversed_finite_sum,
    sum_hyper
)


@fixture(autouse=True)
def precision():
    with mp.workdps(50):
        yield


@mark.parametrize('series, tag', [
    (HyperSeries((), (), Fraction(1, 2)), ConvergenceClass.ENTIRE),
    (HyperSeries((Fraction(1, 3),), (), Fraction(1, 2)), ConvergenceClass.UNIT_DISK),
    (HyperSeries((-3,), (Fraction(1, 2),), 5), ConvergenceClass.TERMINATING),
    (HyperSeries((Fraction(1, 3), Fraction(1, 4)), (), Fraction(1, 2)), ConvergenceClass.DIVERGENT),
])
def test_classify_convergence(series, tag):
    assert classify_convergence(series).tag == tag


def test_unit_disk_gamma():
    conv = classify_convergence(HyperSeries((Fraction(1, 3), 1), (Fraction(3, 2),), 1))
    assert conv.gamma == Fraction(1, 6)
    assert conv.to_dict() == {'tag': 'unit-disk', 'gamma': '1/6'}


def test_terminating_degree():
    conv = classify_convergence(HyperSeries((-3, -5), (), 1))
    assert conv.degree == 3


def test_exponential():
    result = sum_hyper(HyperSeries((), (), Fraction(1, 2)))
    assert not result.exact
    assert abs(result.value - mp.exp(mp.mpf(1) / 2)) < mp.mpf('1e-29')


def test_binomial_series():
    value = eval_hyper(HyperSeries((Fraction(1, 3),), (), Fraction(1, 2)))
    assert abs(value - mp.cbrt(2)) < mp.mpf('1e-28')


def test_terminating_series_is_exact():
    result = sum_hyper(HyperSeries((-2,), (), Fraction(1, 2)))
    assert result.exact
    assert result.value == Fraction(1, 4)


@mark.parametrize('n, a, c', [
    (1, Fraction(1, 3), Fraction(1, 2)),
    (3, Fraction(1, 3), Fraction(1, 2)),
    (5, Fraction(-7, 4), Fraction(5, 3)),
    (6, 2, Fraction(9, 2)),
])
def test_chu_vandermonde(n, a, c):
    result = sum_hyper(HyperSeries((-n, a), (c,), 1))
    assert result.exact
    assert result.value == pochhammer(c - a, n) / pochhammer(c, n)


def test_zero_argument():
    assert eval_hyper(HyperSeries((Fraction(1, 3),), (Fraction(1, 2),), 0)) == 1


def test_divergent_series():
    with raises(DivergentSeries):
        sum_hyper(HyperSeries((Fraction(1, 3), Fraction(1, 4)), (), Fraction(1, 2)))


def test_outside_unit_disk():
    with raises(DivergentSeries):
        sum_hyper(HyperSeries((Fraction(1, 3),), (), 2))


def test_pole_in_denominator():
    with raises(PoleInDenominator):
        sum_hyper(HyperSeries((Fraction(1, 2),), (-2,), Fraction(1, 2)))


def test_pole_after_termination_is_allowed():
    result = sum_hyper(HyperSeries((-1,), (-3,), 1))
    assert result.value == Fraction(4, 3)


def test_reversed_finite_sum_matches_partial_sum():
    series = HyperSeries((Fraction(1, 3),), (Fraction(3, 2),), Fraction(1, 2))
    assert reversed_finite_sum(series, 4) == eval_hyper_finite_sum(series, 4)
