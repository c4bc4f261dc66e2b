from fractions import Fraction

import mpmath as mp
from pytest import fixture, mark, raises

from semiclassical.commons.errors import ConstraintViolated, MissingParameter, SingularHankel
from semiclassical.core.exact import Poly
from semiclassical.core.functional import FunctionalSpec, Mass, SymmetrizedShift, moments
from semiclassical.core.orthopoly import (
    CHEBYSHEV, HANKEL, apply_functional, compare_recurrences, monic_polynomials, orthogonality_check,
    recurrence_from_moments
)


@fixture(autouse=True)
def precision():
    with mp.workdps(50):
        yield


@fixture
def krawtchouk():
    return FunctionalSpec(a=(-4,), z=Fraction(-1, 2))


@fixture
def hahn():
    return FunctionalSpec(a=(Fraction(1, 3), -4), b=(Fraction(1, 2),), z=1)


@mark.parametrize('method', [HANKEL, CHEBYSHEV])
def test_krawtchouk_recurrence(krawtchouk, method):
    # binomial distribution with N = 4, p = 1/3
    rec = recurrence_from_moments(moments(krawtchouk, 6), 3, method)
    p = Fraction(1, 3)
    assert rec.alpha == tuple(n * (1 - p) + (4 - n) * p for n in range(3))
    assert rec.beta == (Fraction(81, 16),) + tuple(n * (4 - n + 1) * p * (1 - p) for n in range(1, 3))


@mark.parametrize('spec_name', ['krawtchouk', 'hahn'])
def test_exact_orthogonality(spec_name, request):
    spec = request.getfixturevalue(spec_name)
    nu = moments(spec, 6)
    rec = recurrence_from_moments(nu, 3)
    report = orthogonality_check(spec, rec, 3, nu=nu)
    assert report.passed
    assert all(report.matrix[i][j] == 0 for i in range(4) for j in range(4) if i != j)


@mark.parametrize('spec_name', ['krawtchouk', 'hahn'])
def test_methods_agree_exactly(spec_name, request):
    nu = moments(request.getfixturevalue(spec_name), 6)
    first = recurrence_from_moments(nu, 3, HANKEL)
    second = recurrence_from_moments(nu, 3, CHEBYSHEV)
    assert first.alpha == second.alpha
    assert first.beta == second.beta
    assert compare_recurrences(first, second)


def test_charlier_orthogonality():
    spec = FunctionalSpec(z=Fraction(1, 2))
    nu = moments(spec, 10)
    rec = recurrence_from_moments(nu, 5)
    assert orthogonality_check(spec, rec, 5, '1e-20', nu=nu).passed
    # Charlier: α_n = n + z, β_n = n z
    for n in range(5):
        assert abs(rec.alpha[n] - (n + mp.mpf(1) / 2)) < mp.mpf('1e-25')
    for n in range(1, 5):
        assert abs(rec.beta[n] - n * mp.mpf(1) / 2) < mp.mpf('1e-25')
    assert compare_recurrences(rec, recurrence_from_moments(nu, 5, CHEBYSHEV), '1e-20')


@mark.parametrize('spec, K', [
    (FunctionalSpec(z=Fraction(1, 2)), 6),
    (FunctionalSpec(a=(Fraction(1, 3),), z=Fraction(1, 2)), 6),
    (FunctionalSpec(a=(-4,), z=Fraction(1, 2)), 4),
])
def test_gram_matrix_is_diagonal(spec, K):
    nu = moments(spec, 2 * K)
    rec = recurrence_from_moments(nu, K)
    report = orthogonality_check(spec, rec, K, '1e-20', nu=nu)
    assert report.passed
    assert len(report.matrix) == K + 1


def test_symmetrized_charlier_alpha_vanishes():
    spec = FunctionalSpec(a=(-4,), z=-1, support=SymmetrizedShift(2))
    rec = recurrence_from_moments(moments(spec, 6), 3)
    assert rec.alpha == (0, 0, 0)


def test_unit_mass_is_singular():
    spec = FunctionalSpec(scale=0, masses=(Mass(0, 1),))
    nu = moments(spec, 4)
    for method in (HANKEL, CHEBYSHEV):
        with raises(SingularHankel) as e:
            recurrence_from_moments(nu, 2, method)
        assert e.value.n == 1


def test_degree_zero_is_trivial(krawtchouk):
    rec = recurrence_from_moments(moments(krawtchouk, 0), 0)
    assert len(rec) == 0
    assert orthogonality_check(krawtchouk, rec, 0).passed


def test_monic_polynomials(krawtchouk):
    rec = recurrence_from_moments(moments(krawtchouk, 6), 3)
    polys = monic_polynomials(rec)
    assert [p.degree for p in polys] == [0, 1, 2, 3]
    assert all(p.leading == 1 for p in polys)


def test_apply_functional(krawtchouk):
    nu = moments(krawtchouk, 2)
    assert apply_functional(Poly.one(), nu) == nu[0]
    with raises(MissingParameter):
        apply_functional(Poly.monomial(5), nu)


def test_unknown_method(krawtchouk):
    with raises(ConstraintViolated):
        recurrence_from_moments(moments(krawtchouk, 2), 1, 'lanczos')


def test_not_enough_moments(krawtchouk):
    with raises(MissingParameter):
        recurrence_from_moments(moments(krawtchouk, 3), 3)
