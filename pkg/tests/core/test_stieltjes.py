import dataclasses
from fractions import Fraction

import mpmath as mp
from pytest import fixture, mark, raises

from semiclassical.commons.errors import MissingParameter
from semiclassical.core.exact import Poly, scalars_agree
from semiclassical.core.functional import FunctionalSpec, Mass, SymmetrizedShift, Truncated, pearson_pair
from semiclassical.core.stieltjes import (
    LinearForm, default_sample_points, derive_xi, equations_equivalent, interpolate_xi, polys_close,
    stieltjes_equation, transform_equation, verify_equation
)


@fixture(autouse=True)
def precision():
    with mp.workdps(50):
        yield


@fixture
def charlier():
    return FunctionalSpec(z=Fraction(1, 2))


@fixture
def krawtchouk():
    return FunctionalSpec(a=(-4,), z=Fraction(-1, 2))


def test_charlier_xi_is_nu0(charlier):
    _, nu, eq = stieltjes_equation(charlier)
    assert eq.class_s == 0
    assert eq.xi_symbolic == (LinearForm((1,)),)
    assert eq.xi.degree == 0
    assert scalars_agree(nu[0], eq.xi.coeff(0), '1e-40')


def test_meixner_xi():
    spec = FunctionalSpec(a=(Fraction(1, 3),), z=Fraction(1, 2))
    _, _, eq = stieltjes_equation(spec)
    assert eq.xi_symbolic == (LinearForm((Fraction(1, 2),)),)


def test_generalized_meixner_xi():
    a, b, z = Fraction(1, 3), Fraction(1, 2), Fraction(1, 4)
    _, _, eq = stieltjes_equation(FunctionalSpec(a=(a,), b=(b,), z=z))
    # (t + b + 1 − z)ν_0 + ν_1
    assert eq.xi_symbolic == (LinearForm((b + 1 - z, 1)), LinearForm((1,)))


def test_hahn_xi():
    a, b, N = Fraction(1, 3), Fraction(1, 2), 4
    _, nu, eq = stieltjes_equation(FunctionalSpec(a=(a, -N), b=(b,), z=1))
    assert eq.xi_symbolic == (LinearForm((b + 1 - a + N,)),)
    assert eq.xi == Poly([(b + 1 - a + N) * nu[0]], 't')


def test_symmetrized_charlier_xi():
    spec = FunctionalSpec(a=(-2,), z=-1, support=SymmetrizedShift(1))
    _, nu, eq = stieltjes_equation(spec)
    assert nu.basis_shift == 1
    assert eq.xi == Poly([8], 't')


def test_linear_form_evaluate():
    form = LinearForm((1, 2), const=3)
    assert form.evaluate([Fraction(1, 2), 1]) == Fraction(11, 2)
    with raises(MissingParameter):
        form.evaluate([1])


@mark.parametrize('support, expected', [
    (None, [Fraction(21, 2), Fraction(51, 2), Fraction(81, 2)]),
    (Truncated(4), [Fraction(15, 2), 14, Fraction(39, 2)]),
])
def test_default_sample_points(support, expected):
    spec = FunctionalSpec(z=Fraction(1, 2)) if support is None else FunctionalSpec(z=Fraction(1, 2), support=support)
    assert default_sample_points(spec) == expected


def test_verify_charlier(charlier):
    _, _, eq = stieltjes_equation(charlier)
    report = verify_equation(charlier, eq, residual_tol='1e-20')
    assert report.passed
    assert len(report.samples) == 3


def test_verify_corrupted_xi_fails(charlier):
    _, _, eq = stieltjes_equation(charlier)
    corrupted = dataclasses.replace(eq, xi=eq.xi + Poly([Fraction(1, 1000)], 't'))
    assert not verify_equation(charlier, corrupted, residual_tol='1e-20').passed


@mark.parametrize('spec', [
    FunctionalSpec(a=(-4,), z=Fraction(-1, 2)),
    FunctionalSpec(z=Fraction(1, 2), support=Truncated(4)),
    FunctionalSpec(a=(Fraction(1, 3), -4), b=(Fraction(1, 2),), z=1),
])
def test_verify_finite_support_is_exact(spec):
    _, _, eq = stieltjes_equation(spec)
    report = verify_equation(spec, eq)
    assert report.passed
    assert all(residual == 0 for _, residual, _ in report.samples)


def test_interpolated_xi_matches_derived():
    spec = FunctionalSpec(a=(Fraction(1, 3),), b=(Fraction(1, 2),), z=Fraction(1, 2))
    pair, _, eq = stieltjes_equation(spec)
    numeric = interpolate_xi(spec, pair, default_sample_points(spec))
    assert polys_close(eq.xi, numeric, '1e-20')


def test_interpolation_needs_enough_points(charlier):
    pair = pearson_pair(FunctionalSpec(b=(Fraction(1, 2),), z=Fraction(1, 2)))
    with raises(MissingParameter):
        interpolate_xi(charlier, pair, [Fraction(21, 2)])


def test_uvarov_equation_matches_direct_derivation(charlier):
    _, nu, eq = stieltjes_equation(charlier)
    omega, M = Fraction(-1, 2), 1
    closed = transform_equation(eq, 'uvarov', {'omega': omega, 'M': M})
    _, _, direct = stieltjes_equation(charlier.replace(masses=(Mass(omega, M),)))
    assert equations_equivalent(closed, direct, '1e-25')
    assert closed.class_s == direct.class_s == 2


@mark.parametrize('kind, params', [
    ('christoffel', {'omega': Fraction(-1, 2), 'nu0': 1}),
    ('geronimus', {'omega': Fraction(-1, 2), 'nu0_G': 1}),
])
def test_transformed_class_is_recomputed(charlier, kind, params):
    _, _, eq = stieltjes_equation(charlier)
    assert transform_equation(eq, kind, params).class_s == 1


def test_symmetrize_equation_is_a_shift(krawtchouk):
    _, _, eq = stieltjes_equation(krawtchouk)
    shifted = transform_equation(eq, 'symmetrize', {'m': 2})
    assert shifted.sigma_shift == eq.sigma_shift.shift(2)


def test_transform_equation_requires_parameters(charlier):
    _, _, eq = stieltjes_equation(charlier)
    with raises(MissingParameter):
        transform_equation(eq, 'christoffel', {'omega': Fraction(-1, 2)})


def test_derive_xi_of_the_pair_alone(krawtchouk):
    pair = pearson_pair(krawtchouk)
    _, nu, _ = stieltjes_equation(krawtchouk)
    eq = derive_xi(pair, nu)
    # (1 − z)ν_0
    assert eq.xi == Poly([Fraction(3, 2) * Fraction(81, 16)], 't')
