from fractions import Fraction

import mpmath as mp
from pytest import fixture, mark, raises

from semiclassical.commons.errors import (
    ConstraintViolated, DegenerateSymmetrization, RegularityViolation, TruncationAtEtaRoot
)
from semiclassical.core.exact import Poly, scalars_agree
from semiclassical.core.functional import (
    FunctionalSpec, Mass, SymmetrizedShift, Truncated, moments, pearson_pair, pearson_residual, weight_at
)
from semiclassical.core.stieltjes import equations_equivalent, stieltjes_equation
from semiclassical.core.transforms import (
    Christoffel, Geronimus, Symmetrize, Truncate, Uvarov, apply_christoffel, apply_geronimus, apply_symmetrization,
    apply_transform, apply_truncation, apply_uvarov, christoffel_moments, compose_check, parse_transform,
    transformed_equation, truncated_moments
)

TOL = '1e-20'


@fixture(autouse=True)
def precision():
    with mp.workdps(50):
        yield


@fixture
def charlier():
    return FunctionalSpec(z=Fraction(1, 2))


@fixture
def meixner():
    return FunctionalSpec(a=(Fraction(1, 3),), b=(Fraction(1, 2),), z=Fraction(1, 2))


@mark.parametrize('data, expected', [
    ({'kind': 'uvarov', 'omega': '-1/2', 'M': '3'}, Uvarov(Fraction(-1, 2), Fraction(3))),
    ({'kind': 'christoffel', 'omega': '-3/2'}, Christoffel(Fraction(-3, 2))),
    ({'kind': 'geronimus', 'omega': '-3/2', 'M': 1}, Geronimus(Fraction(-3, 2), Fraction(1))),
    ({'kind': 'truncate', 'N': 4}, Truncate(4)),
    ({'kind': 'symmetrize', 'm': '2'}, Symmetrize(2)),
])
def test_parse_transform(data, expected):
    assert parse_transform(data) == expected


@mark.parametrize('data', [
    {'kind': 'rotate'},
    {'kind': 'christoffel'},
    {'kind': 'truncate', 'N': '-1'},
])
def test_parse_transform_rejects(data):
    with raises(ConstraintViolated):
        parse_transform(data)


def test_uvarov_adds_mass(charlier):
    spec = apply_uvarov(charlier, Fraction(-1, 2), 1)
    assert spec.masses == (Mass(Fraction(-1, 2), 1),)
    assert pearson_pair(spec).class_s == 2


def test_uvarov_without_mass_is_identity(charlier):
    assert apply_uvarov(charlier, Fraction(-1, 2), 0) is charlier


def test_uvarov_merges_masses(charlier):
    spec = apply_uvarov(apply_uvarov(charlier, Fraction(-1, 2), 1), Fraction(-1, 2), 2)
    assert spec.masses == (Mass(Fraction(-1, 2), 3),)


def test_reduced_uvarov_at_sigma_root(charlier):
    # σ(0) = 0: only one factor is added on each side
    pair = pearson_pair(apply_uvarov(charlier, 0, 1))
    assert pair.class_s == 1


def test_uvarov_regularity():
    spec = FunctionalSpec(scale=0, masses=(Mass(Fraction(-1, 2), 1),))
    with raises(RegularityViolation):
        apply_uvarov(spec, Fraction(-3, 2), -1)


def test_christoffel_parameters(charlier):
    spec = apply_christoffel(charlier, Fraction(-3, 2))
    assert spec.a == (Fraction(5, 2),)
    assert spec.b == (Fraction(1, 2),)
    assert spec.scale == Fraction(3, 2)


def test_christoffel_moments(charlier):
    omega = Fraction(-3, 2)
    nu = moments(charlier, 4)
    transformed = moments(apply_christoffel(charlier, omega), 3)
    table = christoffel_moments(nu, omega)
    for n in range(4):
        assert scalars_agree(transformed[n], table[n], TOL)


@mark.parametrize('omega', [0, 1, 2])
def test_christoffel_in_support(charlier, omega):
    spec = apply_christoffel(charlier, omega)
    assert spec.factors == (omega,)
    assert spec.a == () and spec.b == ()
    transformed = moments(spec, 3)
    table = christoffel_moments(moments(charlier, 4), omega)
    for n in range(4):
        assert scalars_agree(transformed[n], table[n], TOL)


def test_christoffel_factor_weight(charlier):
    spec = apply_christoffel(charlier, 1)
    assert weight_at(spec, 1) == 0
    assert weight_at(spec, 3) == 2 * weight_at(charlier, 3)
    pair = pearson_pair(spec)
    assert pair.eta == Poly([0, Fraction(1, 2)])
    assert pair.sigma == Poly([0, -2, 1])
    assert all(pearson_residual(spec, pair, x) == 0 for x in range(12))


def test_christoffel_factor_scales_masses(charlier):
    spec = apply_christoffel(apply_uvarov(charlier, Fraction(-1, 2), 2), 1)
    assert spec.masses == (Mass(Fraction(-1, 2), -3),)


def test_christoffel_regularity(charlier):
    # ν₁ = ν₀/2 for Charlier with z = 1/2
    with raises(RegularityViolation):
        apply_christoffel(charlier, Fraction(1, 2))


def test_christoffel_factor_truncation(charlier):
    spec = apply_truncation(apply_christoffel(charlier, 1), 4)
    report = truncated_moments(spec, 5)
    assert report.agree
    assert report.direct[5] == 0


def test_christoffel_factor_truncation_at_eta_root(charlier):
    with raises(TruncationAtEtaRoot):
        apply_truncation(apply_christoffel(charlier, 5), 4)


def test_christoffel_factor_cannot_be_symmetrized(charlier):
    with raises(ConstraintViolated):
        apply_symmetrization(apply_christoffel(charlier, 1), 1)


def test_geronimus_moments_match_spec(charlier):
    spec, table = apply_geronimus(charlier, Fraction(-3, 2), 1, 4)
    assert spec.masses == (Mass(Fraction(-3, 2), 1),)
    direct = moments(spec, 4)
    for n in range(5):
        assert scalars_agree(direct[n], table[n], TOL)


@mark.parametrize('omega', [0, 3])
def test_geronimus_in_n0(charlier, omega):
    with raises(ConstraintViolated):
        apply_geronimus(charlier, omega, 1)


@mark.parametrize('spec, omega, M', [
    (FunctionalSpec(z=Fraction(1, 2)), Fraction(-3, 2), 1),
    (FunctionalSpec(a=(Fraction(1, 3),), b=(Fraction(1, 2),), z=Fraction(1, 2)), Fraction(-3, 2), 1),
    (FunctionalSpec(a=(Fraction(1, 3),), z=Fraction(1, 2)), Fraction(1, 2), 2),
])
def test_compose_laws(spec, omega, M):
    report = compose_check(spec, omega, M, 10, TOL)
    assert report.cg_spec_equal
    assert report.gc_spec_equal
    assert report.passed, report.failures


def test_truncation(charlier):
    spec = apply_truncation(charlier, 4)
    assert spec.support == Truncated(4)
    report = truncated_moments(spec, 6)
    assert report.agree
    assert report.direct[5] == 0


def test_truncation_at_eta_root():
    with raises(TruncationAtEtaRoot):
        apply_truncation(FunctionalSpec(a=(-2,), z=Fraction(1, 2)), 2)


def test_symmetrized_charlier(charlier):
    spec = apply_symmetrization(charlier, 1)
    assert spec.support == SymmetrizedShift(1)
    assert spec.z == -1
    assert moments(spec, 2).values == (4, 4, 2)


def test_symmetrized_krawtchouk_is_degenerate():
    with raises(DegenerateSymmetrization):
        apply_symmetrization(FunctionalSpec(a=(-4,), z=Fraction(1, 2)), 2)


def test_symmetrized_spec_is_terminal(charlier):
    spec = apply_symmetrization(charlier, 1)
    with raises(ConstraintViolated):
        apply_christoffel(spec, Fraction(-3, 2))


def test_symmetrization_needs_positive_m(charlier):
    with raises(ConstraintViolated):
        apply_symmetrization(charlier, 0)


@mark.parametrize('transform', [
    Uvarov(Fraction(-3, 2), 1),
    Christoffel(Fraction(-3, 2)),
    Christoffel(1),
    Geronimus(Fraction(-3, 2), 1),
    Symmetrize(1),
])
def test_transformed_equation_matches_derivation(meixner, charlier, transform):
    base = charlier if isinstance(transform, Symmetrize) else meixner
    transformed = apply_transform(base, transform)
    expected = transformed_equation(base, transformed, transform)
    _, _, derived = stieltjes_equation(transformed)
    assert equations_equivalent(expected, derived, TOL)
    assert expected.class_s == derived.class_s


def test_transformed_equation_for_truncation(charlier):
    with raises(ConstraintViolated):
        transformed_equation(charlier, apply_truncation(charlier, 4), Truncate(4))
