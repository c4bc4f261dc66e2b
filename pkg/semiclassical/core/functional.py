"""Discrete semiclassical linear functionals with hypergeometric weights.

A functional is given by the weight

    ϱ(x) = scale · ∏(x − r) · (a)_x / (b+1)_x · z^x / x!

on its support (ℕ₀, {0..N}, or the symmetric range [-m, m] in the shifted
variable) plus optional point masses M·δ_ω. The product runs over the
roots r of an optional polynomial factor.
"""
import dataclasses
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Optional

import mpmath as mp
import sympy

from semiclassical.commons.errors import (
    ConvergenceFailure, DivergentSeries, OutOfSupport, PoleAtSupportPoint, PoleInDenominator, TruncationAtEtaRoot
)
from semiclassical.core.exact import (
    Poly, absolute, add, all_exact, div, falling_factorial, format_scalar, integer_value, is_approx, is_equal,
    is_exact, is_symbolic, is_zero, mul, neg, nonpositive_integer, parse_scalar,
    pochhammer_multi, power, stirling_convert, sub, to_approx, to_symbolic, factorial, tolerance_value
)
from semiclassical.core.hyper import (
    DEFAULT_MAX_TERMS, DEFAULT_TOLERANCE, HyperSeries, _check_poles, _check_region,
    classify_convergence, eval_hyper_finite_sum, sum_hyper
)

logger = logging.getLogger(__name__)


## support modifiers

@dataclass(frozen=True)
class Infinite:
    kind = 'infinite'

    def to_dict(self):
        return {'kind': self.kind}


@dataclass(frozen=True)
class Truncated:
    N: int
    kind = 'truncated'

    def to_dict(self):
        return {'kind': self.kind, 'N': self.N}


@dataclass(frozen=True)
class SymmetrizedShift:
    m: int
    kind = 'symmetrized'

    @property
    def N(self):
        return 2 * self.m

    def to_dict(self):
        return {'kind': self.kind, 'm': self.m}


INFINITE = Infinite()


def support_from_dict(data):
    if data is None:
        return INFINITE
    kind = data.get('kind', 'infinite')
    if kind == 'infinite':
        return INFINITE
    if kind == 'truncated':
        return Truncated(int(data['N']))
    if kind == 'symmetrized':
        return SymmetrizedShift(int(data['m']))
    raise ValueError('unknown support kind {!r}'.format(kind))


@dataclass(frozen=True)
class Mass:
    omega: object
    M: object

    def to_dict(self):
        return {'omega': format_scalar(self.omega), 'M': format_scalar(self.M)}


## functional spec

@dataclass(frozen=True)
class FunctionalSpec:
    a: tuple = ()
    b: tuple = ()
    z: object = 1
    support: object = INFINITE
    masses: tuple = ()
    scale: object = 1
    factors: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'a', tuple(self.a))
        object.__setattr__(self, 'b', tuple(self.b))
        object.__setattr__(self, 'masses', tuple(self.masses))
        object.__setattr__(self, 'factors', tuple(self.factors))

    @property
    def p(self):
        return len(self.a)

    @property
    def q(self):
        return len(self.b)

    @property
    def shift(self):
        """Basis shift: m for symmetrized specs, else 0."""
        return self.support.m if isinstance(self.support, SymmetrizedShift) else 0

    @property
    def left_endpoint(self):
        return -self.shift

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def factor_poly(self):
        """∏ (x − r) over the polynomial factors of the weight."""
        return Poly.from_factors(tuple(neg(r) for r in self.factors))

    def scalars(self):
        values = list(self.a) + list(self.b) + [self.z, self.scale] + list(self.factors)
        for mass in self.masses:
            values += [mass.omega, mass.M]
        return values

    def is_exact(self):
        return all_exact(self.scalars())

    def is_symbolic(self):
        return any(is_symbolic(v) for v in self.scalars())

    def canonical(self):
        """Cancel numerator/denominator pairs with a_i = b_j + 1.

        Non-positive integer a_i are kept: they terminate the weight.
        """
        b = list(self.b)
        a = []
        for param in self.a:
            match = None
            if nonpositive_integer(param) is None:
                for j in range(len(b) - 1, -1, -1):
                    if is_equal(param, add(b[j], 1)):
                        match = j
                        break
            if match is None:
                a.append(param)
            else:
                del b[match]
        if len(a) == len(self.a):
            return self
        return self.replace(a=tuple(a), b=tuple(b))

    def equivalent(self, other, compare_scale=True):
        """Equality of canonical forms, parameters compared as multisets."""
        left, right = self.canonical(), other.canonical()
        return (
            Counter(left.a) == Counter(right.a)
            and Counter(left.b) == Counter(right.b)
            and is_equal(left.z, right.z)
            and (not compare_scale or is_equal(left.scale, right.scale))
            and left.support == right.support
            and Counter(left.masses) == Counter(right.masses)
            and Counter(left.factors) == Counter(right.factors)
        )

    def to_dict(self):
        body = {
            'a': [format_scalar(v) for v in self.a],
            'b': [format_scalar(v) for v in self.b],
            'z': format_scalar(self.z),
            'support': self.support.to_dict(),
            'masses': [mass.to_dict() for mass in self.masses],
        }
        if not is_equal(self.scale, 1):
            body['scale'] = format_scalar(self.scale)
        if self.factors:
            body['factors'] = [format_scalar(v) for v in self.factors]
        return body

    @classmethod
    def from_dict(cls, data):
        return cls(
            a=tuple(parse_scalar(v) for v in data.get('a', [])),
            b=tuple(parse_scalar(v) for v in data.get('b', [])),
            z=parse_scalar(data.get('z', 1)),
            support=support_from_dict(data.get('support')),
            masses=tuple(Mass(parse_scalar(m['omega']), parse_scalar(m['M'])) for m in data.get('masses', [])),
            scale=parse_scalar(data.get('scale', 1)),
            factors=tuple(parse_scalar(v) for v in data.get('factors', [])),
        )


def support_bound(spec):
    """Largest point of the support, or None when it is unbounded."""
    if isinstance(spec.support, Truncated):
        bound = spec.support.N
    elif isinstance(spec.support, SymmetrizedShift):
        return spec.support.m
    else:
        bound = None
    degrees = [k for k in (nonpositive_integer(a) for a in spec.canonical().a) if k is not None]
    if degrees:
        bound = min(degrees) if bound is None else min(bound, min(degrees))
    return bound


def is_support_point(spec, x):
    k = integer_value(x)
    if k is None or k < spec.left_endpoint:
        return False
    bound = support_bound(spec)
    return bound is None or k <= bound


## Pearson pair and class

@dataclass(frozen=True)
class PearsonPair:
    eta: Poly
    sigma: Poly
    class_s: int
    coprime: Optional[bool] = True

    def sigma_shift(self):
        """σ(t+1) as a polynomial in t."""
        return self.sigma.shift(1).with_var('t')

    def eta_t(self):
        return self.eta.with_var('t')

    def same_polynomials(self, other):
        return self.eta == other.eta and self.sigma == other.sigma

    def to_dict(self):
        return {
            'eta': [format_scalar(c) for c in self.eta.coeffs],
            'sigma': [format_scalar(c) for c in self.sigma.coeffs],
            'class': self.class_s,
            'coprime': self.coprime,
        }


def class_from_degrees(eta, sigma):
    return max(sigma.degree - 2, (sigma - eta).degree - 1, 0)


def classify_class(eta, sigma, p, q, z):
    """Class of the functional from the four (p, q, z) cases.

    :param eta: η(x)
    :type eta: Poly
    :param sigma: σ(x)
    :type sigma: Poly
    :param p: Degree of η
    :param q: Degree of σ minus one
    :param z: Leading coefficient of η
    :return: The class s
    :rtype: int
    """
    if p > q + 1:
        s = p - 1
    elif p < q + 1:
        s = q
    elif not is_equal(z, 1):
        s = q
    else:
        s = q - 1
    direct = class_from_degrees(eta, sigma)
    if s != direct:
        logger.warning('class formula gives %s but the degree definition gives %s', s, direct)
        return direct
    return s


def _is_coprime(eta, sigma_shift):
    coeffs = list(eta.coeffs) + list(sigma_shift.coeffs)
    if any(is_approx(c) for c in coeffs):
        return None
    X = sympy.Symbol('x')
    left = sympy.Poly([to_symbolic(c) for c in reversed(eta.coeffs)] or [0], X)
    right = sympy.Poly([to_symbolic(c) for c in reversed(sigma_shift.coeffs)] or [0], X)
    return sympy.gcd(left, right).degree() <= 0


def _mass_factors(eta, sigma, omega):
    x = Poly.identity()
    eta_root = is_zero(eta(omega))
    sigma_root = is_zero(sigma(omega))
    if not eta_root and not sigma_root:
        logger.debug('mass at %s: full Pearson factors', omega)
        return eta * (x - omega) * (x + sub(1, omega)), sigma * (x - omega) * (x - add(omega, 1))
    if sigma_root and not eta_root:
        logger.debug('mass at %s: sigma root, reduced factors', omega)
        return eta * (x - omega), sigma * (x - add(omega, 1))
    if eta_root and not sigma_root:
        logger.debug('mass at %s: eta root, reduced factors', omega)
        return eta * (x + sub(1, omega)), sigma * (x - omega)
    logger.debug('mass at %s: double root, no factors', omega)
    return eta, sigma


def pearson_pair(spec):
    """Build (η, σ) with ϱ(x+1)σ(x+1) = ϱ(x)η(x) and derive the class.

    :param spec: The functional
    :type spec: FunctionalSpec
    :rtype: PearsonPair
    :raises TruncationAtEtaRoot: if the support is truncated at a root of η
    """
    canonical = spec.canonical()
    x = Poly.identity()
    eta = Poly.from_factors(canonical.a, lead=canonical.z)
    sigma = x * Poly.from_factors(canonical.b)
    for root in canonical.factors:
        eta = eta * (x + sub(1, root))
        sigma = sigma * (x - add(root, 1))
    if isinstance(spec.support, Truncated):
        N = spec.support.N
        if is_zero(eta(N)):
            raise TruncationAtEtaRoot('eta vanishes at the truncation point N = {}'.format(N), N=N)
        eta = eta * (x - N)
        sigma = sigma * (x - (N + 1))
    for mass in spec.masses:
        eta, sigma = _mass_factors(eta, sigma, mass.omega)
    if isinstance(spec.support, SymmetrizedShift):
        eta = eta.shift(spec.shift)
        sigma = sigma.shift(spec.shift)
    s = classify_class(eta, sigma, eta.degree, sigma.degree - 1, eta.leading)
    return PearsonPair(eta, sigma, s, _is_coprime(eta, sigma.shift(1)))


## weight

def _weight_ratio(a, b1, z, y):
    numerator = z
    for param in a:
        numerator = mul(numerator, add(param, y))
    denominator = y + 1
    for param in b1:
        denominator = mul(denominator, add(param, y))
    if is_zero(denominator):
        if is_zero(numerator):
            return 0
        raise PoleInDenominator('weight has a pole at x = {}'.format(y + 1), x=y + 1)
    return div(numerator, denominator)


def _weight_sequence(spec, approx=False):
    """Yield (x, ϱ(x)) from the left endpoint onwards via the term ratio."""
    canonical = spec.canonical()
    a = list(canonical.a)
    b1 = [add(b, 1) for b in canonical.b]
    z = canonical.z
    w = canonical.scale
    if approx:
        a, b1, z, w = [to_approx(v) for v in a], [to_approx(v) for v in b1], to_approx(z), to_approx(w)
    factor = canonical.factor_poly() if canonical.factors else None
    y = 0
    while True:
        x = y - spec.shift
        yield x, (w if factor is None else mul(w, factor(x)))
        w = mul(w, _weight_ratio(a, b1, z, y))
        y += 1


def weight_at(spec, x):
    """Evaluate the weight (masses excluded).

    :raises OutOfSupport: if x is not a support point
    """
    k = integer_value(x)
    bound = support_bound(spec) if not isinstance(spec.support, Infinite) else None
    if k is None or k < spec.left_endpoint or (bound is not None and k > bound):
        raise OutOfSupport('x = {} is outside the support'.format(x), x=x)
    y = k + spec.shift
    b1 = [add(b, 1) for b in spec.b]
    denominator = mul(pochhammer_multi(b1, y), factorial(y))
    numerator = mul(pochhammer_multi(spec.a, y), power(spec.z, y))
    if is_zero(denominator):
        raise PoleInDenominator('weight has a pole at x = {}'.format(x), x=x)
    value = mul(spec.scale, div(numerator, denominator))
    return mul(value, spec.factor_poly()(k)) if spec.factors else value


def pearson_residual(spec, pair, x):
    """ϱ(x+1)σ(x+1) − ϱ(x)η(x) at one support point."""
    right = weight_at(spec, x + 1) if is_support_point(spec, x + 1) else 0
    return sub(mul(right, pair.sigma(x + 1)), mul(weight_at(spec, x), pair.eta(x)))


## moments

@dataclass(frozen=True)
class MomentTable:
    values: tuple
    basis_shift: object = 0
    exact: tuple = ()
    error_bounds: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'values', tuple(self.values))
        if not self.exact:
            object.__setattr__(self, 'exact', tuple(is_exact(v) for v in self.values))
        if not self.error_bounds:
            object.__setattr__(self, 'error_bounds', tuple(0 for _ in self.values))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n):
        return self.values[n]

    @property
    def K(self):
        return len(self.values) - 1

    @property
    def regular(self):
        return bool(self.values) and not is_zero(self.values[0])

    def power_moments(self):
        return stirling_convert(self.values)

    def to_dict(self):
        return {
            'values': [format_scalar(v) for v in self.values],
            'basis_shift': format_scalar(self.basis_shift),
            'exact': list(self.exact),
            'error_bounds': [format_scalar(v) for v in self.error_bounds],
            'regular': self.regular,
        }


def _weight_moment(spec, n, tol, max_terms):
    if is_zero(spec.scale):
        return 0, True, 0
    b1 = tuple(add(b, 1) for b in spec.b)
    denominator = pochhammer_multi(b1, n)
    if is_zero(denominator):
        raise PoleInDenominator('(b+1)_{} vanishes'.format(n), n=n)
    prefactor = mul(spec.scale, div(mul(power(spec.z, n), pochhammer_multi(spec.a, n)), denominator))
    if is_zero(prefactor):
        return prefactor, not is_approx(prefactor), 0
    series = HyperSeries(tuple(add(a, n) for a in spec.a), tuple(add(b, n) for b in b1), spec.z)
    if isinstance(spec.support, Truncated):
        N = spec.support.N
        if n > N:
            return 0, True, 0
        value = mul(prefactor, eval_hyper_finite_sum(series, N - n))
        return value, is_exact(value), 0
    result = sum_hyper(series, tol, max_terms)
    bound = mul(absolute(prefactor), result.tail_bound) if not result.exact else 0
    return mul(prefactor, result.value), result.exact and is_exact(prefactor), bound


def linear_factor_moments(values, root, shift=0):
    """Moments of (x − root)·L from those of L, one entry shorter.

    Uses (x + shift − r)φ_n(x + shift) = φ_{n+1}(x + shift) + (n − shift − r)φ_n(x + shift).
    """
    return [add(values[n + 1], mul(sub(sub(n, root), shift), values[n])) for n in range(len(values) - 1)]


def moments(spec, K, tol=DEFAULT_TOLERANCE, max_terms=DEFAULT_MAX_TERMS):
    """Moments ν_0..ν_K in the falling-factorial basis.

    ν_n = scale · z^n (a)_n/(b+1)_n · pFq(a+n; b+1+n; z) + Σ M φ_n(ω); truncated
    specs use the finite sum, symmetrized specs return moments in the basis
    φ_n(x + m). Each polynomial factor (x − r) costs one extra weight moment.

    :param spec: The functional
    :type spec: FunctionalSpec
    :param K: Highest moment index
    :type K: int
    :rtype: MomentTable
    :raises DivergentSeries: propagated from the series evaluation
    """
    spec = spec.canonical()
    values, exact, bounds = [], [], []
    for n in range(K + len(spec.factors) + 1):
        value, is_exact_value, bound = _weight_moment(spec, n, tol, max_terms)
        values.append(value)
        exact.append(is_exact_value)
        bounds.append(bound)
    for root in spec.factors:
        bounds = [add(bounds[n + 1], mul(absolute(sub(n, root)), bounds[n])) for n in range(len(bounds) - 1)]
        exact = [exact[n] and exact[n + 1] and is_exact(root) for n in range(len(exact) - 1)]
        values = linear_factor_moments(values, root, spec.shift)
    for n in range(K + 1):
        for mass in spec.masses:
            values[n] = add(values[n], mul(mass.M, falling_factorial(add(mass.omega, spec.shift), n)))
            exact[n] = exact[n] and all_exact([mass.M, mass.omega])
        exact[n] = exact[n] and not is_approx(values[n])
    table = MomentTable(tuple(values), spec.shift, tuple(exact), tuple(bounds))
    logger.debug('moments up to %s computed (%s)', K, 'exact' if all(exact) else 'approximate')
    if not table.regular:
        logger.warning('nu_0 vanishes: the functional is not regular')
    return table


def _small(term, total, tol):
    return abs(term) <= tol * abs(total) or term == 0


def brute_force_moments(spec, K, tol=DEFAULT_TOLERANCE, max_terms=DEFAULT_MAX_TERMS):
    """Moments by direct summation of φ_n(x + shift)·ϱ(x) over the support."""
    bound = support_bound(spec)
    approx = bound is None or not spec.is_exact()
    totals = [0] * (K + 1)
    tol = tolerance_value(tol)
    quiet = 0
    for count, (x, w) in enumerate(_weight_sequence(spec, approx)):
        if bound is not None and x > bound:
            break
        if count >= max_terms:
            raise ConvergenceFailure('direct summation did not settle after {} terms'.format(max_terms))
        terms = [mul(falling_factorial(x + spec.shift, n), w) for n in range(K + 1)]
        totals = [add(t, term) for t, term in zip(totals, terms)]
        if bound is None and not is_zero(w):
            quiet = quiet + 1 if all(_small(term, t, tol) for term, t in zip(terms, totals)) else 0
            if quiet == 2:
                break
    for mass in spec.masses:
        totals = [add(t, mul(mass.M, falling_factorial(add(mass.omega, spec.shift), n))) for n, t in enumerate(totals)]
    return MomentTable(tuple(totals), spec.shift)


## Stieltjes transform

def stieltjes_eval(spec, t, tol=DEFAULT_TOLERANCE, max_terms=DEFAULT_MAX_TERMS):
    """S(t) = L[1/(t - x)].

    :raises PoleAtSupportPoint: if t is a support point or a mass location
    :raises DivergentSeries: if the weight sum diverges
    """
    for mass in spec.masses:
        if is_equal(t, mass.omega):
            raise PoleAtSupportPoint('t = {} coincides with a mass point'.format(t), t=t)
    total = 0
    for mass in spec.masses:
        total = add(total, div(mass.M, sub(t, mass.omega)))
    if is_zero(spec.scale):
        return total
    if is_support_point(spec, t):
        raise PoleAtSupportPoint('t = {} is a support point'.format(t), t=t)

    bound = support_bound(spec)
    if bound is not None:
        approx = not (spec.is_exact() and is_exact(t))
        for x, w in _weight_sequence(spec, approx):
            if x > bound:
                break
            total = add(total, div(w, sub(t, x)))
        return total

    canonical = spec.canonical()
    series = HyperSeries(canonical.a, tuple(add(b, 1) for b in canonical.b), canonical.z)
    conv = classify_convergence(series)
    _check_poles(series, conv)
    _check_region(series, conv)
    tol = tolerance_value(tol)
    t = to_approx(t)
    partial = mp.mpf(0)
    quiet = 0
    for count, (x, w) in enumerate(_weight_sequence(spec, approx=True)):
        if count >= max_terms:
            raise ConvergenceFailure('Stieltjes sum did not settle after {} terms'.format(max_terms))
        term = w / (t - x)
        partial += term
        if is_zero(w):
            continue
        quiet = quiet + 1 if _small(term, partial, tol) else 0
        if quiet == 2:
            break
    return add(total, partial)


def moment_convergence(spec):
    """Convergence class of the series behind the moments.

    :return: The class and the error summation would raise, or None
    :rtype: tuple(semiclassical.core.hyper.ConvergenceClass, Exception)
    """
    canonical = spec.canonical()
    series = HyperSeries(canonical.a, tuple(add(b, 1) for b in canonical.b), canonical.z)
    conv = classify_convergence(series)
    if not isinstance(spec.support, Infinite):
        return conv, None
    try:
        _check_poles(series, conv)
        _check_region(series, conv)
    except (DivergentSeries, PoleInDenominator) as e:
        return conv, e
    return conv, None
