"""First-order difference equation of the Stieltjes transform.

    σ(t+1) S(t+1) − η(t) S(t) = ξ(t),   deg ξ = s

ξ is derived as a polynomial in t whose coefficients are linear forms in the
moments ν_0, ν_1, ...
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp

from semiclassical.commons.errors import (
    ConstraintViolated, DegreeMismatch, MissingParameter, NonPolynomialBoundary
)
from semiclassical.core.exact import (
    BiPoly, Poly, absolute, add, div, format_scalar, is_zero, mul, neg, sub, to_approx, tolerance_value
)
from semiclassical.core.functional import class_from_degrees, moments, pearson_pair, stieltjes_eval, support_bound
from semiclassical.core.hyper import DEFAULT_MAX_TERMS, DEFAULT_TOLERANCE

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinearForm:
    """c_0 ν_0 + c_1 ν_1 + ... + const."""

    coeffs: tuple = ()
    const: object = 0

    def __post_init__(self):
        coeffs = list(self.coeffs)
        while coeffs and is_zero(coeffs[-1]):
            coeffs.pop()
        object.__setattr__(self, 'coeffs', tuple(coeffs))

    @classmethod
    def unit(cls, n, c=1):
        return cls((0,) * n + (c,))

    @classmethod
    def constant(cls, c):
        return cls((), c)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def coeff(self, n):
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else 0

    def is_zero(self):
        return not self.coeffs and is_zero(self.const)

    def __add__(self, other):
        size = max(len(self.coeffs), len(other.coeffs))
        return LinearForm(
            tuple(add(self.coeff(n), other.coeff(n)) for n in range(size)), add(self.const, other.const))

    def __neg__(self):
        return LinearForm(tuple(neg(c) for c in self.coeffs), neg(self.const))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return LinearForm(tuple(mul(c, v) for v in self.coeffs), mul(c, self.const))

    def evaluate(self, values):
        if len(self.coeffs) > len(values):
            raise MissingParameter(
                'moments up to nu_{} are required, {} given'.format(self.degree, len(values)))
        total = self.const
        for c, value in zip(self.coeffs, values):
            total = add(total, mul(c, value))
        return total

    def to_dict(self):
        body = {'nu_coeffs': [format_scalar(c) for c in self.coeffs]}
        if not is_zero(self.const):
            body['const'] = format_scalar(self.const)
        return body


def _strip(forms):
    forms = list(forms)
    while forms and forms[-1].is_zero():
        forms.pop()
    return tuple(forms)


def forms_times_poly(forms, poly):
    """Multiply a polynomial with linear-form coefficients by a scalar polynomial."""
    if poly.is_zero() or not forms:
        return ()
    out = [LinearForm()] * (len(forms) + poly.degree)
    for j, form in enumerate(forms):
        for k, c in enumerate(poly.coeffs):
            out[j + k] = out[j + k] + form.scale(c)
    return _strip(out)


def forms_plus(forms, poly, form):
    """Add poly(t)·form."""
    out = list(forms) + [LinearForm()] * max(0, poly.degree + 1 - len(forms))
    for k, c in enumerate(poly.coeffs):
        out[k] = out[k] + form.scale(c)
    return _strip(out)


def forms_shift(forms, h):
    """Substitute t -> t + h."""
    out = [LinearForm()] * len(forms)
    for j, form in enumerate(forms):
        expanded = Poly.monomial(j, var='t').shift(h)
        for k, c in enumerate(expanded.coeffs):
            out[k] = out[k] + form.scale(c)
    return _strip(out)


@dataclass(frozen=True)
class StieltjesEquation:
    sigma_shift: Poly
    eta: Poly
    xi: Poly
    xi_symbolic: tuple = field(default=())
    class_s: int = 0

    def instantiate(self, values):
        return Poly([form.evaluate(values) for form in self.xi_symbolic], 't')

    def shifted(self, h):
        return StieltjesEquation(
            self.sigma_shift.shift(h), self.eta.shift(h), self.xi.shift(h),
            forms_shift(self.xi_symbolic, h), self.class_s)

    def lhs(self, t, S_t, S_t1):
        return sub(mul(self.sigma_shift(t), S_t1), mul(self.eta(t), S_t))

    def to_dict(self):
        return {
            'sigma_shift': [format_scalar(c) for c in self.sigma_shift.coeffs],
            'eta': [format_scalar(c) for c in self.eta.coeffs],
            'xi': [format_scalar(c) for c in self.xi.coeffs],
            'xi_symbolic': [
                dict(form.to_dict(), t_power=k) for k, form in enumerate(self.xi_symbolic)
            ],
            'class': self.class_s,
        }


## derivation

def _quotient(numerator):
    try:
        return numerator.divide_by_t_minus_x()
    except ValueError as e:
        raise NonPolynomialBoundary(str(e))


def derive_xi(pair, moments):
    """Derive ξ(t) as linear forms in the moments and instantiate it.

    λ(t, x) = [σ(t+1)η(x) − η(t)σ(x+1)]/(t − x) = η(x)A(t,x) + σ(x+1)B(t,x) and
    the Pearson identity turn Σ ϱ(x)λ(t,x)/σ(x+1) into L[A(t,x−1)] + L[B(t,x)]
    plus a boundary term at the left endpoint that telescopes to zero.

    :param pair: Pearson pair of the functional
    :type pair: semiclassical.core.functional.PearsonPair
    :param moments: Moments in the basis φ_n(x + shift)
    :type moments: semiclassical.core.functional.MomentTable
    :rtype: StieltjesEquation
    :raises NonPolynomialBoundary: if a division is inexact or the boundary does not telescope
    :raises DegreeMismatch: if the derived degree differs from the class
    """
    shift = moments.basis_shift
    x0 = neg(shift)
    one = Poly.one()
    eta_x, sigma_x = pair.eta, pair.sigma
    sigma_x1 = sigma_x.shift(1)
    sigma_t1 = sigma_x1.with_var('t')
    eta_t = eta_x.with_var('t')

    A = _quotient(BiPoly.outer(sigma_t1, one) - BiPoly([sigma_x1]))
    B = -_quotient(BiPoly.outer(eta_t, one) - BiPoly([eta_x]))
    lam = _quotient(BiPoly.outer(sigma_t1, eta_x) - BiPoly.outer(eta_t, sigma_x1))
    combined = BiPoly([c * eta_x for c in A.coeffs]) + BiPoly([c * sigma_x1 for c in B.coeffs])
    if not lam == combined:
        raise NonPolynomialBoundary('eta/sigma decomposition of the kernel is inconsistent')

    boundary, remainder = sigma_t1.divmod_linear(sub(x0, 1))
    if not is_zero(remainder):
        raise NonPolynomialBoundary('sigma(t+1) is not divisible by (t + 1 - x0)', x0=x0)
    if not (boundary - A.at_x(sub(x0, 1))).is_zero():
        raise NonPolynomialBoundary('boundary terms at x0 = {} do not telescope'.format(x0), x0=x0)
    logger.debug('boundary term at x0 = %s telescopes', x0)

    size = max(A.degree, B.degree) + 1
    forms = []
    for j in range(size):
        from_a = A.coefficient(j).shift(-1).to_falling_basis(shift)
        from_b = B.coefficient(j).to_falling_basis(shift)
        forms.append(LinearForm(tuple(from_a)) + LinearForm(tuple(from_b)))
    forms = _strip(forms)

    degree = len(forms) - 1
    if degree != pair.class_s:
        raise DegreeMismatch(
            'derived xi has degree {} but the class is {}'.format(degree, pair.class_s),
            degree=degree, class_s=pair.class_s)
    eq = StieltjesEquation(sigma_t1, eta_t, Poly(), forms, pair.class_s)
    return StieltjesEquation(sigma_t1, eta_t, eq.instantiate(moments.values), forms, pair.class_s)


def stieltjes_equation(spec, tol=DEFAULT_TOLERANCE, max_terms=DEFAULT_MAX_TERMS):
    """Pearson pair, moments and derived equation of a functional.

    :rtype: tuple(PearsonPair, MomentTable, StieltjesEquation)
    """
    pair = pearson_pair(spec)
    nu = moments(spec, max(pair.eta.degree, pair.sigma.degree) + 1, tol, max_terms)
    return pair, nu, derive_xi(pair, nu)


## numeric oracle and verification

def default_sample_points(spec):
    """Three sample points past a finite support, half-integers otherwise."""
    bound = support_bound(spec)
    if bound is None:
        points = [Fraction(21, 2), Fraction(51, 2), Fraction(81, 2)]
    else:
        points = [bound + Fraction(7, 2), Fraction(bound + 10), bound + Fraction(31, 2)]
    avoid = [mass.omega for mass in spec.masses]
    adjusted = []
    for t in points:
        while any(is_zero(sub(t, w)) or is_zero(sub(add(t, 1), w)) for w in avoid):
            t = t + Fraction(1, 7)
        adjusted.append(t)
    return adjusted


def _lhs_value(spec, eq, t, tol, max_terms):
    S_t = stieltjes_eval(spec, t, tol, max_terms)
    S_t1 = stieltjes_eval(spec, add(t, 1), tol, max_terms)
    return eq.lhs(t, S_t, S_t1)


def interpolate_xi(spec, pair, ts, tol=DEFAULT_TOLERANCE, max_terms=DEFAULT_MAX_TERMS):
    """Recover ξ numerically from s+1 samples of σ(t+1)S(t+1) − η(t)S(t).

    :rtype: Poly
    """
    needed = pair.class_s + 1
    if len(ts) < needed:
        raise MissingParameter('{} sample points are required, {} given'.format(needed, len(ts)))
    ts = list(ts)[:needed]
    homogeneous = StieltjesEquation(pair.sigma_shift(), pair.eta_t(), Poly(), (), pair.class_s)
    values = [_lhs_value(spec, homogeneous, t, tol, max_terms) for t in ts]

    # Newton divided differences, then expand to monomial form
    table = list(values)
    for level in range(1, needed):
        for i in range(needed - 1, level - 1, -1):
            table[i] = div(sub(table[i], table[i - 1]), sub(ts[i], ts[i - level]))
    result = Poly([table[-1]], 't')
    for i in range(needed - 2, -1, -1):
        result = result * Poly.linear(neg(ts[i]), 't') + table[i]
    return result


@dataclass(frozen=True)
class ResidualReport:
    samples: tuple
    passed: bool

    def to_dict(self):
        return {
            'passed': self.passed,
            'samples': [
                {'t': format_scalar(t), 'residual': format_scalar(r), 'bound': format_scalar(b)}
                for t, r, b in self.samples
            ],
        }


def verify_equation(spec, eq, sample_ts=None, tol=DEFAULT_TOLERANCE, max_terms=DEFAULT_MAX_TERMS,
                    residual_tol=None):
    """Check σ(t+1)S(t+1) − η(t)S(t) = ξ(t) at sample points.

    A sample passes when the residual is at most residual_tol·(1 + |ξ(t)|);
    residual_tol defaults to the series tolerance ``tol``.

    :rtype: ResidualReport
    """
    if sample_ts is None:
        sample_ts = default_sample_points(spec)
    tol_value = tolerance_value(tol if residual_tol is None else residual_tol)
    samples = []
    passed = True
    for t in sample_ts:
        xi_t = eq.xi(t)
        residual = absolute(sub(_lhs_value(spec, eq, t, tol, max_terms), xi_t))
        bound = tol_value * (1 + to_approx(absolute(xi_t)))
        ok = is_zero(residual) or to_approx(residual) <= bound
        passed = passed and ok
        samples.append((t, residual, bound))
        logger.debug('residual at t = %s: %s', t, residual)
    return ResidualReport(tuple(samples), passed)


## transformed equations

def _param(params, name):
    value = params.get(name)
    if value is None:
        raise MissingParameter('parameter {!r} is required for this transform'.format(name), name=name)
    return value


def _divide_exact(poly, root):
    quotient, remainder = poly.divmod_linear(root)
    if not is_zero(remainder):
        raise NonPolynomialBoundary('polynomial does not vanish at {}'.format(root), root=root)
    return quotient


def _equation(sigma_shift, eta, xi, forms):
    return StieltjesEquation(sigma_shift, eta, xi, forms, class_from_degrees(eta, sigma_shift.shift(-1)))


def transform_equation(eq, kind, params=None):
    """Closed-form equation of a transformed functional.

    The resulting ξ keeps its linear forms over the original moments; the
    mass M and ν_0^G enter through the constant slot.

    :param eq: Equation of the original functional
    :type eq: StieltjesEquation
    :param kind: uvarov, christoffel, geronimus, symmetrize (name or transform object)
    :param params: omega, M, nu0, nu0_G, m as required
    :type params: dict
    :rtype: StieltjesEquation
    :raises MissingParameter: if a required parameter is absent
    """
    params = dict(params or {})
    name = getattr(kind, 'kind', kind)
    for attr in ('omega', 'M', 'm'):
        if getattr(kind, attr, None) is not None:
            params.setdefault(attr, getattr(kind, attr))
    t = Poly.identity('t')
    sigma1, eta = eq.sigma_shift, eq.eta

    if name == 'uvarov':
        omega, M = _param(params, 'omega'), _param(params, 'M')
        if is_zero(M):
            return eq
        mass = LinearForm.constant(M)
        sigma_root = is_zero(sigma1(sub(omega, 1)))
        eta_root = is_zero(eta(omega))
        left, right = t - omega, t + sub(1, omega)
        if not sigma_root and not eta_root:
            extra = left * sigma1 - right * eta
            factor_sigma, factor_eta, xi_factor = left * right, left * right, left * right
        elif sigma_root and not eta_root:
            extra = left * _divide_exact(sigma1, sub(omega, 1)) - eta
            factor_sigma, factor_eta, xi_factor = left, left, left
        elif eta_root and not sigma_root:
            extra = sigma1 - right * _divide_exact(eta, omega)
            factor_sigma, factor_eta, xi_factor = right, right, right
        else:
            extra = _divide_exact(sigma1, sub(omega, 1)) - _divide_exact(eta, omega)
            factor_sigma = factor_eta = xi_factor = Poly.one('t')
        forms = forms_plus(forms_times_poly(eq.xi_symbolic, xi_factor), extra, mass)
        xi = eq.xi * xi_factor + extra * M
        return _equation(sigma1 * factor_sigma, eta * factor_eta, xi, forms)

    if name == 'christoffel':
        omega, nu0 = _param(params, 'omega'), _param(params, 'nu0')
        left, right = t - omega, t + sub(1, omega)
        extra = left * sigma1 - right * eta
        forms = forms_plus(forms_times_poly(eq.xi_symbolic, left * right), extra, LinearForm.unit(0, -1))
        xi = eq.xi * (left * right) - extra * nu0
        return _equation(sigma1 * left, eta * right, xi, forms)

    if name == 'geronimus':
        omega, nu0_g = _param(params, 'omega'), _param(params, 'nu0_G')
        extra = sigma1 - eta
        forms = forms_plus(eq.xi_symbolic, extra, LinearForm.constant(nu0_g))
        xi = eq.xi + extra * nu0_g
        return _equation(sigma1 * (t + sub(1, omega)), eta * (t - omega), xi, forms)

    if name == 'symmetrize':
        return eq.shifted(_param(params, 'm'))

    if name == 'truncate':
        raise ConstraintViolated('truncation has no closed-form equation transform; derive it from the truncated spec')
    raise ConstraintViolated('unknown transform kind {!r}'.format(name))


def polys_close(p, q, tol=DEFAULT_TOLERANCE):
    """Coefficient-wise agreement relative to the largest coefficient."""
    diff = p - q
    if diff.is_zero():
        return True
    tol = tolerance_value(tol)
    scale = max([to_approx(absolute(c)) for c in p.coeffs + q.coeffs] + [mp.mpf(1)])
    return all(to_approx(absolute(c)) <= tol * scale for c in diff.coeffs)


def equations_equivalent(first, second, tol=DEFAULT_TOLERANCE):
    """Compare two equations up to a common polynomial factor."""
    return (
        polys_close(first.sigma_shift * second.eta, second.sigma_shift * first.eta, tol)
        and polys_close(first.xi * second.sigma_shift, second.xi * first.sigma_shift, tol)
    )
