"""Spectral transformations of a functional: Uvarov, Christoffel, Geronimus,
truncation and symmetrization.

All normalization constants are fixed to 1. Christoffel and Geronimus keep the
weight hypergeometric by appending parameters and absorbing the constant
factor (−ω)^{±1} into ``FunctionalSpec.scale``; a Christoffel factor at a
non-negative integer is kept in ``FunctionalSpec.factors``.
"""
import logging
from dataclasses import dataclass, field

from semiclassical.commons.errors import (
    ConstraintViolated, DegenerateSymmetrization, PoleInDenominator, RegularityViolation, TruncationAtEtaRoot
)
from semiclassical.core.exact import (
    Poly, add, div, falling_factorial, format_scalar, is_equal, is_zero, mul, neg, nonnegative_integer,
    nonpositive_integer, parse_scalar, pochhammer_multi, power, scalars_agree, sub
)
from semiclassical.core.functional import (
    INFINITE, FunctionalSpec, Mass, MomentTable, SymmetrizedShift, Truncated,
    linear_factor_moments, moments, stieltjes_eval
)
from semiclassical.core.hyper import DEFAULT_MAX_TERMS, DEFAULT_TOLERANCE, HyperSeries, reversed_finite_sum
from semiclassical.core.stieltjes import stieltjes_equation, transform_equation

logger = logging.getLogger(__name__)


## transform kinds

@dataclass(frozen=True)
class Uvarov:
    omega: object
    M: object
    kind = 'uvarov'

    def to_dict(self):
        return {'kind': self.kind, 'omega': format_scalar(self.omega), 'M': format_scalar(self.M)}


@dataclass(frozen=True)
class Christoffel:
    omega: object
    kind = 'christoffel'

    def to_dict(self):
        return {'kind': self.kind, 'omega': format_scalar(self.omega)}


@dataclass(frozen=True)
class Geronimus:
    omega: object
    M: object
    kind = 'geronimus'

    def to_dict(self):
        return {'kind': self.kind, 'omega': format_scalar(self.omega), 'M': format_scalar(self.M)}


@dataclass(frozen=True)
class Truncate:
    N: int
    kind = 'truncate'

    def to_dict(self):
        return {'kind': self.kind, 'N': self.N}


@dataclass(frozen=True)
class Symmetrize:
    m: int
    kind = 'symmetrize'

    def to_dict(self):
        return {'kind': self.kind, 'm': self.m}


def _integer_field(data, name):
    value = nonnegative_integer(parse_scalar(data[name]))
    if value is None:
        raise ConstraintViolated('{} must be a non-negative integer, got {!r}'.format(name, data[name]), name=name)
    return value


def parse_transform(data):
    """Build a transform from its JSON form, e.g. {"kind": "geronimus", "omega": "-1/2", "M": "3"}."""
    kind = data.get('kind')
    try:
        if kind == 'uvarov':
            return Uvarov(parse_scalar(data['omega']), parse_scalar(data['M']))
        if kind == 'christoffel':
            return Christoffel(parse_scalar(data['omega']))
        if kind == 'geronimus':
            return Geronimus(parse_scalar(data['omega']), parse_scalar(data.get('M', 0)))
        if kind == 'truncate':
            return Truncate(_integer_field(data, 'N'))
        if kind == 'symmetrize':
            return Symmetrize(_integer_field(data, 'm'))
    except KeyError as e:
        raise ConstraintViolated('transform {!r} requires field {}'.format(kind, e), kind=kind)
    raise ConstraintViolated('unknown transform kind {!r}'.format(kind), kind=kind)


def _not_symmetrized(spec, name):
    if isinstance(spec.support, SymmetrizedShift):
        raise ConstraintViolated('{} cannot be applied to a symmetrized functional'.format(name))


## Uvarov

def apply_uvarov(spec, omega, M, tol=DEFAULT_TOLERANCE, max_terms=DEFAULT_MAX_TERMS):
    """Add the point mass M·δ_ω.

    The Pearson factors (full or reduced) are chosen when the pair is built,
    from η(ω) and σ(ω).

    :rtype: FunctionalSpec
    :raises RegularityViolation: if L[1] + M = 0
    """
    _not_symmetrized(spec, 'uvarov')
    if is_zero(M):
        return spec
    nu0 = moments(spec, 0, tol, max_terms)[0]
    if is_zero(add(nu0, M)):
        raise RegularityViolation('L[1] + M vanishes', nu0=nu0, M=M)
    masses = []
    merged = False
    for mass in spec.masses:
        if is_equal(mass.omega, omega):
            merged = True
            total = add(mass.M, M)
            if not is_zero(total):
                masses.append(Mass(mass.omega, total))
        else:
            masses.append(mass)
    if not merged:
        masses.append(Mass(omega, M))
    return spec.replace(masses=tuple(masses))


## Christoffel

def apply_christoffel(spec, omega, tol=DEFAULT_TOLERANCE, max_terms=DEFAULT_MAX_TERMS):
    """Multiply the functional by (x − ω).

    (x − ω)ϱ(x) = −ω·(1−ω)_x/(−ω)_x·ϱ(x), so a gains 1−ω, b gains −ω−1 and the
    scale picks up −ω. For ω ∈ ℕ₀ that quotient has a pole and (x − ω) is kept
    as a polynomial factor of the weight instead. Masses M at ω_k become
    M·(ω_k − ω).

    :rtype: FunctionalSpec
    :raises RegularityViolation: if ν₁ − ων₀ = 0
    """
    _not_symmetrized(spec, 'christoffel')
    nu = moments(spec, 1, tol, max_terms)
    if is_zero(sub(nu[1], mul(omega, nu[0]))):
        raise RegularityViolation('L[x - omega] vanishes', omega=omega)
    if nonnegative_integer(omega) is not None:
        logger.debug('christoffel at %s kept as a polynomial factor', omega)
        return spec.replace(factors=spec.factors + (omega,), masses=_masses_times_linear(spec, omega))
    return _multiply_by_linear(spec, omega)


def christoffel_moments(nu, omega):
    """ν_n^C = ν_{n+1} + (n − ω)ν_n, one entry shorter than the input."""
    values = list(getattr(nu, 'values', nu))
    shift = getattr(nu, 'basis_shift', 0)
    return MomentTable(tuple(linear_factor_moments(values, omega, shift)), shift)


## Geronimus

def geronimus_moments(nu, omega, nu0_g):
    """ν_n^G = φ_n(ω)[ν₀^G + Σ_{k<n} ν_k/φ_{k+1}(ω)]."""
    values = list(getattr(nu, 'values', nu))
    out = []
    running = nu0_g
    for n in range(len(values)):
        if n > 0:
            running = add(running, div(values[n - 1], falling_factorial(omega, n)))
        out.append(mul(falling_factorial(omega, n), running))
    return MomentTable(tuple(out))


def apply_geronimus(spec, omega, M, K=10, tol=DEFAULT_TOLERANCE, max_terms=DEFAULT_MAX_TERMS,
                    stieltjes_at_omega=None):
    """Divide the functional by (x − ω) and add M·δ_ω.

    :param K: Highest moment index of the returned table
    :param stieltjes_at_omega: S(ω) when it is known in closed form
    :return: The transformed spec and its moments from the solved recurrence
    :rtype: tuple(FunctionalSpec, MomentTable)
    :raises ConstraintViolated: if ω ∈ N0 or ω carries a mass already
    :raises RegularityViolation: if ν₀^G = M − S(ω) vanishes
    """
    _not_symmetrized(spec, 'geronimus')
    if nonnegative_integer(omega) is not None:
        raise ConstraintViolated('geronimus requires omega not in N0, got {}'.format(omega), omega=omega)
    if any(is_equal(mass.omega, omega) for mass in spec.masses):
        raise ConstraintViolated('geronimus at an existing mass point {}'.format(omega), omega=omega)

    S = stieltjes_eval(spec, omega, tol, max_terms) if stieltjes_at_omega is None else stieltjes_at_omega
    nu0_g = sub(M, S)
    if is_zero(nu0_g):
        raise RegularityViolation('M - S(omega) vanishes', omega=omega, M=M)

    masses = tuple(Mass(mass.omega, div(mass.M, sub(mass.omega, omega))) for mass in spec.masses)
    transformed = spec.replace(
        a=spec.a + (neg(omega),),
        b=spec.b + (neg(omega),),
        scale=div(spec.scale, neg(omega)),
        masses=masses + (Mass(omega, M),),
    )
    table = geronimus_moments(moments(spec, K, tol, max_terms), omega, nu0_g)
    logger.debug('geronimus at %s: nu0_G = %s', omega, nu0_g)
    return transformed, table


## composition laws

@dataclass(frozen=True)
class ComposeReport:
    cg_spec_equal: bool
    gc_spec_equal: bool
    cg_moments: tuple = field(default=())
    gc_moments: tuple = field(default=())

    @property
    def failures(self):
        failed = [('cg', n) for n, _, _, ok in self.cg_moments if not ok]
        failed += [('gc', n) for n, _, _, ok in self.gc_moments if not ok]
        if not self.cg_spec_equal:
            failed.append(('cg', 'spec'))
        if not self.gc_spec_equal:
            failed.append(('gc', 'spec'))
        return failed

    @property
    def passed(self):
        return not self.failures

    def to_dict(self):
        def rows(entries):
            return [
                {'n': n, 'expected': format_scalar(e), 'actual': format_scalar(v), 'ok': ok}
                for n, e, v, ok in entries
            ]
        return {
            'passed': self.passed,
            'cg_spec_equal': self.cg_spec_equal,
            'gc_spec_equal': self.gc_spec_equal,
            'cg_moments': rows(self.cg_moments),
            'gc_moments': rows(self.gc_moments),
        }


def compose_check(spec, omega, M, K=10, tol=DEFAULT_TOLERANCE, max_terms=DEFAULT_MAX_TERMS):
    """Check L_CG = L and L_GC = L_U (mass M at ω) on specs and the first K moments.

    Failures are carried by the report, nothing is raised for a mismatch.

    :rtype: ComposeReport
    """
    nu = moments(spec, K + 1, tol, max_terms)

    g_spec, g_moments = apply_geronimus(spec, omega, M, K + 1, tol, max_terms)
    cg_spec = _multiply_by_linear(g_spec, omega)
    cg_values = christoffel_moments(g_moments, omega)
    cg_rows = tuple((n, nu[n], cg_values[n], scalars_agree(nu[n], cg_values[n], tol)) for n in range(K))

    # L_C[1/(ω − x)] = −L[1]
    c_spec = apply_christoffel(spec, omega, tol, max_terms)
    gc_spec, _ = apply_geronimus(c_spec, omega, M, 0, tol, max_terms, stieltjes_at_omega=neg(nu[0]))
    gc_values = geronimus_moments(christoffel_moments(nu, omega), omega, add(M, nu[0]))
    u_spec = apply_uvarov(spec, omega, M, tol, max_terms)
    expected = [add(nu[n], mul(M, falling_factorial(omega, n))) for n in range(K)]
    gc_rows = tuple((n, expected[n], gc_values[n], scalars_agree(expected[n], gc_values[n], tol)) for n in range(K))

    report = ComposeReport(cg_spec.equivalent(spec), gc_spec.equivalent(u_spec), cg_rows, gc_rows)
    logger.debug('compose check at omega = %s: %s', omega, 'passed' if report.passed else report.failures)
    return report


def _masses_times_linear(spec, omega):
    return tuple(
        Mass(mass.omega, mul(mass.M, sub(mass.omega, omega)))
        for mass in spec.masses if not is_equal(mass.omega, omega)
    )


def _multiply_by_linear(spec, omega):
    return spec.replace(
        a=spec.a + (sub(1, omega),),
        b=spec.b + (sub(neg(omega), 1),),
        scale=mul(spec.scale, neg(omega)),
        masses=_masses_times_linear(spec, omega),
    )


## truncation

def apply_truncation(spec, N):
    """Restrict the support to {0..N}.

    :rtype: FunctionalSpec
    :raises TruncationAtEtaRoot: if η(N) = 0
    """
    _not_symmetrized(spec, 'truncation')
    N = nonnegative_integer(N)
    if N is None:
        raise ConstraintViolated('truncation requires a non-negative integer N')
    canonical = spec.canonical()
    eta = Poly.from_factors(canonical.a + tuple(sub(1, r) for r in canonical.factors), lead=canonical.z)
    if is_zero(eta(N)):
        raise TruncationAtEtaRoot('eta vanishes at the truncation point N = {}'.format(N), N=N)
    if isinstance(spec.support, Truncated) and spec.support.N <= N:
        return spec
    return spec.replace(support=Truncated(N))


@dataclass(frozen=True)
class TruncationReport:
    direct: MomentTable
    reversed: tuple
    agree: bool

    def to_dict(self):
        return {
            'direct': self.direct.to_dict(),
            'reversed': [None if v is None else format_scalar(v) for v in self.reversed],
            'agree': self.agree,
        }


def _reversed_moment(canonical, b1, N, n):
    if n > N:
        return 0
    series = HyperSeries(tuple(add(a, n) for a in canonical.a), tuple(add(b, n) for b in b1), canonical.z)
    try:
        reversed_sum = reversed_finite_sum(series, N - n)
    except PoleInDenominator:
        return None
    prefactor = div(mul(power(canonical.z, n), pochhammer_multi(canonical.a, n)), pochhammer_multi(b1, n))
    return mul(mul(canonical.scale, prefactor), reversed_sum)


def truncated_moments(spec, K, tol=DEFAULT_TOLERANCE, max_terms=DEFAULT_MAX_TERMS):
    """Moments of a truncated spec by direct finite sums and by the reversed form.

    Entries where the reversed form is undefined ((a)_{N−n} = 0) are None and
    take no part in the comparison.

    :rtype: TruncationReport
    """
    if not isinstance(spec.support, Truncated):
        raise ConstraintViolated('truncated_moments requires a truncated spec')
    direct = moments(spec, K, tol, max_terms)
    canonical = spec.canonical()
    b1 = tuple(add(b, 1) for b in canonical.b)
    values = [_reversed_moment(canonical, b1, spec.support.N, n) for n in range(K + len(canonical.factors) + 1)]
    for root in canonical.factors:
        values = [
            None if values[n] is None or values[n + 1] is None else add(values[n + 1], mul(sub(n, root), values[n]))
            for n in range(len(values) - 1)
        ]
    agree = True
    for n, value in enumerate(values):
        if value is None:
            continue
        for mass in canonical.masses:
            value = add(value, mul(mass.M, falling_factorial(mass.omega, n)))
        values[n] = value
        agree = agree and scalars_agree(direct[n], value, tol)
    return TruncationReport(direct, tuple(values), agree)


## symmetrization

def _without_one(values, target):
    out = list(values)
    for i, value in enumerate(out):
        if is_equal(value, target):
            del out[i]
            break
    return out


def apply_symmetrization(spec, m, tol=DEFAULT_TOLERANCE, max_terms=DEFAULT_MAX_TERMS):
    """Symmetrize on [−m, m] as ρ(x + m), N = 2m, z forced to (−1)^{p+q+1}.

    When η(N) ≠ 0, ρ(x) = (a)_x/(b+1)_x z₀^x/x! · (−N)_x(−N−b)_x/(1−N−a)_x.
    When η(N) = 0 the repeated factor (x−N)/(x+1) is dropped from the Pearson
    ratio and ρ(x) = (a)_x/(b+1)_x z₀^x (−N−b)_x/(1−N−a)_x. Either way ρ(0) = 1.

    :rtype: FunctionalSpec
    :raises DegenerateSymmetrization: if all moments vanish
    """
    _not_symmetrized(spec, 'symmetrization')
    m = nonnegative_integer(m)
    if not m:
        raise ConstraintViolated('symmetrization requires a positive integer m')
    if spec.masses:
        raise ConstraintViolated('symmetrization of a functional with point masses is not defined')
    if spec.factors:
        raise ConstraintViolated('symmetrization of a functional with polynomial factors is not defined')
    N = 2 * m
    if isinstance(spec.support, Truncated) and spec.support.N < N:
        raise ConstraintViolated('support {{0..{}}} is shorter than 2m = {}'.format(spec.support.N, N), m=m)
    canonical = spec.canonical()
    a, b = list(canonical.a), list(canonical.b)
    for v in a:
        k = nonpositive_integer(v)
        if k is not None and k < N:
            raise ConstraintViolated('weight terminates at {} before 2m = {}'.format(k, N), m=m)
    eta_root = any(nonpositive_integer(v) == N for v in a)
    z0 = -1 if (len(a) + len(b) + 1) % 2 else 1

    numerator = [sub(-N, v) for v in b]
    if eta_root:
        new_a = a + numerator
        new_b = b + [sub(-N, v) for v in _without_one(a, -N)]
    else:
        new_a = a + [-N] + numerator
        new_b = b + [sub(-N, v) for v in a]
    symmetrized = FunctionalSpec(tuple(new_a), tuple(new_b), z0, SymmetrizedShift(m))
    if is_zero(moments(symmetrized, 0, tol, max_terms)[0]):
        raise DegenerateSymmetrization('all moments of the symmetrized functional vanish', m=m)
    logger.debug('symmetrized on [-%s, %s] with z0 = %s (%s)', m, m, z0, 'reduced' if eta_root else 'full')
    return symmetrized


def apply_transform(spec, transform, tol=DEFAULT_TOLERANCE, max_terms=DEFAULT_MAX_TERMS):
    """Dispatch one transform; the Geronimus moment table is dropped here."""
    if isinstance(transform, Uvarov):
        return apply_uvarov(spec, transform.omega, transform.M, tol, max_terms)
    if isinstance(transform, Christoffel):
        return apply_christoffel(spec, transform.omega, tol, max_terms)
    if isinstance(transform, Geronimus):
        return apply_geronimus(spec, transform.omega, transform.M, 0, tol, max_terms)[0]
    if isinstance(transform, Truncate):
        return apply_truncation(spec, transform.N)
    if isinstance(transform, Symmetrize):
        return apply_symmetrization(spec, transform.m, tol, max_terms)
    raise ConstraintViolated('unknown transform {!r}'.format(transform))


def transformed_equation(base, transformed, transform, tol=DEFAULT_TOLERANCE, max_terms=DEFAULT_MAX_TERMS):
    """Closed-form equation of ``transformed`` built from the equation of ``base``.

    A symmetrized functional takes the equation of its one-sided form on N0
    shifted by m.

    :rtype: semiclassical.core.stieltjes.StieltjesEquation
    :raises ConstraintViolated: for truncation, which has no closed form
    """
    if isinstance(transform, Symmetrize):
        _, _, eq = stieltjes_equation(transformed.replace(support=INFINITE), tol, max_terms)
        return transform_equation(eq, transform)
    if isinstance(transform, Truncate):
        raise ConstraintViolated('truncation has no closed-form equation transform')
    _, nu, eq = stieltjes_equation(base, tol, max_terms)
    params = {}
    if isinstance(transform, Christoffel):
        params['nu0'] = nu[0]
    elif isinstance(transform, Geronimus):
        params['nu0_G'] = moments(transformed, 0, tol, max_terms)[0]
    return transform_equation(eq, transform, params)
