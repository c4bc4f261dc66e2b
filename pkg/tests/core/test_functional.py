from fractions import Fraction

import mpmath as mp
from pytest import fixture, mark, raises

from semiclassical.commons.errors import PoleAtSupportPoint, TruncationAtEtaRoot
from semiclassical.core.exact import Poly, scalars_agree
from semiclassical.core.functional import (
    INFINITE, FunctionalSpec, Mass, SymmetrizedShift, Truncated, brute_force_moments, is_support_point,
    moment_convergence, moments, pearson_pair, pearson_residual, stieltjes_eval, support_bound, weight_at
)
from semiclassical.core.transforms import apply_symmetrization


@fixture(autouse=True)
def precision():
    with mp.workdps(50):
        yield


@fixture
def charlier():
    return FunctionalSpec(z=Fraction(1, 2))


@fixture
def krawtchouk():
    # binomial weight with p = 1/3, z = p/(p - 1)
    return FunctionalSpec(a=(-4,), z=Fraction(-1, 2))


@mark.parametrize('spec, class_s', [
    (FunctionalSpec(z=Fraction(1, 2)), 0),
    (FunctionalSpec(a=(Fraction(1, 3),), z=Fraction(1, 2)), 0),
    (FunctionalSpec(a=(Fraction(1, 3), -4), b=(Fraction(1, 2),), z=1), 0),
    (FunctionalSpec(b=(Fraction(1, 2),), z=Fraction(1, 2)), 1),
    (FunctionalSpec(a=(Fraction(1, 3),), b=(Fraction(1, 2),), z=Fraction(1, 2)), 1),
    (FunctionalSpec(b=(Fraction(1, 2), Fraction(3, 4)), z=Fraction(1, 2)), 2),
    (FunctionalSpec(z=Fraction(1, 2), support=Truncated(4)), 1),
])
def test_class(spec, class_s):
    assert pearson_pair(spec).class_s == class_s


def test_charlier_pair(charlier):
    pair = pearson_pair(charlier)
    assert pair.eta == Poly([Fraction(1, 2)])
    assert pair.sigma == Poly.identity()
    assert pair.coprime


def test_divergent_weight_is_still_classified():
    spec = FunctionalSpec(a=(Fraction(1, 3), Fraction(1, 4), Fraction(1, 5)), z=Fraction(1, 2))
    assert pearson_pair(spec).class_s == 2
    conv, error = moment_convergence(spec)
    assert conv.tag == 'divergent'
    assert error.kind == 'DivergentSeries'


def test_canonical_cancels_matching_pairs():
    spec = FunctionalSpec(a=(Fraction(3, 2), Fraction(1, 3)), b=(Fraction(1, 2),), z=Fraction(1, 2))
    canonical = spec.canonical()
    assert canonical.a == (Fraction(1, 3),)
    assert canonical.b == ()
    assert spec.equivalent(FunctionalSpec(a=(Fraction(1, 3),), z=Fraction(1, 2)))


def test_canonical_keeps_terminating_parameter():
    spec = FunctionalSpec(a=(-2,), b=(-3,), z=1)
    assert spec.canonical() == spec


def test_truncation_at_eta_root():
    with raises(TruncationAtEtaRoot):
        pearson_pair(FunctionalSpec(a=(-2,), z=Fraction(1, 2), support=Truncated(2)))


@mark.parametrize('x', [0, 1, 4, 9])
def test_pearson_residual_vanishes(krawtchouk, x):
    spec = FunctionalSpec(a=(Fraction(1, 3),), b=(Fraction(1, 2),), z=Fraction(1, 2))
    assert pearson_residual(spec, pearson_pair(spec), x) == 0
    assert pearson_residual(krawtchouk, pearson_pair(krawtchouk), x) == 0


def test_krawtchouk_moments_exact(krawtchouk):
    nu = moments(krawtchouk, 5)
    assert nu.values == (Fraction(81, 16), Fraction(27, 4), Fraction(27, 4), Fraction(9, 2), Fraction(3, 2), 0)
    assert all(nu.exact)
    assert nu.regular


def test_krawtchouk_brute_force(krawtchouk):
    assert brute_force_moments(krawtchouk, 8).values == moments(krawtchouk, 8).values


def test_charlier_moments(charlier):
    nu = moments(charlier, 4)
    e = mp.exp(mp.mpf(1) / 2)
    for n in range(5):
        assert scalars_agree(e * mp.mpf(2) ** -n, nu[n], '1e-28')


def test_charlier_brute_force(charlier):
    direct = brute_force_moments(charlier, 8)
    nu = moments(charlier, 8)
    for n in range(9):
        assert scalars_agree(nu[n], direct[n], '1e-25')


def test_point_mass_moments():
    spec = FunctionalSpec(scale=0, masses=(Mass(Fraction(-1, 2), 3),))
    nu = moments(spec, 2)
    assert nu.values == (3, Fraction(-3, 2), Fraction(9, 4))


def test_symmetrized_moments_use_shifted_basis():
    spec = FunctionalSpec(a=(-2,), z=-1, support=SymmetrizedShift(1))
    nu = moments(spec, 3)
    assert nu.basis_shift == 1
    assert nu.values == (4, 4, 2, 0)


def test_support():
    spec = FunctionalSpec(a=(-6,), z=Fraction(1, 2), support=Truncated(4))
    assert support_bound(spec) == 4
    assert is_support_point(spec, 3)
    assert not is_support_point(spec, 5)
    assert not is_support_point(spec, Fraction(1, 2))
    assert support_bound(FunctionalSpec(z=Fraction(1, 2))) is None


def test_stieltjes_eval_finite_support(krawtchouk):
    # S(t) = Σ w(x)/(t − x) over the support {0..4}
    value = stieltjes_eval(krawtchouk, Fraction(15, 2))
    expected = sum(
        Fraction(c, 2 ** x) / (Fraction(15, 2) - x) for x, c in enumerate([1, 4, 6, 4, 1]))
    assert value == expected


def test_stieltjes_eval_at_support_point(krawtchouk):
    with raises(PoleAtSupportPoint):
        stieltjes_eval(krawtchouk, 2)


def test_spec_round_trip():
    spec = FunctionalSpec(
        a=(Fraction(1, 3),), b=(Fraction(1, 2),), z=Fraction(1, 2), support=Truncated(4),
        masses=(Mass(Fraction(-1, 2), 1),))
    assert FunctionalSpec.from_dict(spec.to_dict()) == spec
    assert FunctionalSpec.from_dict({'z': '1/2'}).support == INFINITE


def test_charlier_power_moments(charlier):
    m = moments(charlier, 2).power_moments()
    e = mp.exp(mp.mpf(1) / 2)
    assert scalars_agree(e / 2, m[1], '1e-28')
    assert scalars_agree(3 * e / 4, m[2], '1e-28')


def test_symmetrized_weight_is_even():
    spec = apply_symmetrization(FunctionalSpec(a=(Fraction(1, 3),), z=Fraction(1, 2)), 2)
    assert [weight_at(spec, x) for x in range(-2, 3)] == [1, Fraction(2, 5), Fraction(12, 35), Fraction(2, 5), 1]


def test_polynomial_factor_moments(charlier):
    spec = charlier.replace(factors=(1,))
    nu = moments(charlier, 5)
    factored = moments(spec, 4)
    for n in range(5):
        assert scalars_agree(nu[n + 1] + (n - 1) * nu[n], factored[n], '1e-28')
    direct = brute_force_moments(spec, 4)
    for n in range(5):
        assert scalars_agree(factored[n], direct[n], '1e-25')


def test_polynomial_factor_stieltjes(krawtchouk):
    spec = krawtchouk.replace(factors=(2,))
    t = Fraction(15, 2)
    expected = sum(
        Fraction(c, 2 ** x) * (x - 2) / (t - x) for x, c in enumerate([1, 4, 6, 4, 1]))
    assert stieltjes_eval(spec, t) == expected


def test_polynomial_factor_round_trip(charlier):
    spec = charlier.replace(factors=(Fraction(1),))
    body = spec.to_dict()
    assert body['factors'] == ['1']
    assert FunctionalSpec.from_dict(body) == spec
    assert 'factors' not in charlier.to_dict()
