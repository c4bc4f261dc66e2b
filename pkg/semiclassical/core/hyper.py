"""Generalized hypergeometric series pFq(a; b; z)."""
import logging
from dataclasses import dataclass
from typing import Optional

import mpmath as mp

from semiclassical.commons.errors import ConvergenceFailure, DivergentSeries, PoleInDenominator
from semiclassical.core.exact import (
    absolute, add, all_exact, div, factorial, format_scalar, is_approx, is_exact, is_zero, mul, nonpositive_integer,
    pochhammer_multi, power, sub, to_approx, tolerance_value
)

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = '1e-30'
DEFAULT_MAX_TERMS = 10 ** 6


@dataclass(frozen=True)
class HyperSeries:
    a: tuple
    b: tuple
    z: object

    def __post_init__(self):
        object.__setattr__(self, 'a', tuple(self.a))
        object.__setattr__(self, 'b', tuple(self.b))

    @property
    def p(self):
        return len(self.a)

    @property
    def q(self):
        return len(self.b)

    def is_exact(self):
        return all_exact(self.a + self.b + (self.z,))


@dataclass(frozen=True)
class ConvergenceClass:
    ENTIRE = 'entire'
    UNIT_DISK = 'unit-disk'
    TERMINATING = 'terminating'
    DIVERGENT = 'divergent'

    tag: str
    gamma: object = None
    degree: Optional[int] = None

    def to_dict(self):
        body = {'tag': self.tag}
        if self.tag == self.UNIT_DISK:
            body['gamma'] = format_scalar(self.gamma)
        if self.tag == self.TERMINATING:
            body['degree'] = self.degree
        return body


@dataclass(frozen=True)
class SeriesSum:
    value: object
    exact: bool
    terms: int
    tail_bound: object = 0


def classify_convergence(h):
    """Classify a series as entire, unit-disk, terminating or divergent.

    :param h: The series to classify
    :type h: HyperSeries
    :rtype: ConvergenceClass
    """
    degrees = [k for k in (nonpositive_integer(a) for a in h.a) if k is not None]
    if degrees:
        return ConvergenceClass(ConvergenceClass.TERMINATING, degree=min(degrees))
    if h.p < h.q + 1:
        return ConvergenceClass(ConvergenceClass.ENTIRE)
    if h.p == h.q + 1:
        gamma = 0
        for b in h.b:
            gamma = add(gamma, b)
        for a in h.a:
            gamma = sub(gamma, a)
        return ConvergenceClass(ConvergenceClass.UNIT_DISK, gamma=gamma)
    return ConvergenceClass(ConvergenceClass.DIVERGENT)


def _check_poles(h, conv):
    for b in h.b:
        c = nonpositive_integer(b)
        if c is None:
            continue
        if conv.tag != ConvergenceClass.TERMINATING or c < conv.degree:
            raise PoleInDenominator(
                'denominator parameter {} vanishes before the series terminates'.format(b), b=b)


def _check_region(h, conv):
    if conv.tag == ConvergenceClass.DIVERGENT:
        raise DivergentSeries('{}F{} diverges for every z != 0'.format(h.p, h.q), p=h.p, q=h.q)
    if conv.tag != ConvergenceClass.UNIT_DISK:
        return
    modulus = absolute(h.z)
    if modulus < 1:
        return
    if modulus > 1:
        raise DivergentSeries('|z| > 1 outside the disk of convergence', z=h.z)
    gamma = conv.gamma
    if gamma > 0:
        return
    if gamma > -1 and not is_zero(sub(h.z, 1)):
        logger.warning('boundary series |z| = 1 with gamma = %s converges slowly', gamma)
        return
    raise DivergentSeries('series diverges on |z| = 1 with gamma = {}'.format(gamma), z=h.z, gamma=gamma)


def _term_ratio(a, b, z, k):
    ratio = div(z, k + 1)
    for param in a:
        ratio = mul(ratio, add(param, k))
    for param in b:
        ratio = div(ratio, add(param, k))
    return ratio


def _finite_sum(a, b, z, K):
    term = 1
    total = 1
    for k in range(K):
        term = mul(term, _term_ratio(a, b, z, k))
        total = add(total, term)
    return total


def sum_hyper(h, tol=DEFAULT_TOLERANCE, max_terms=DEFAULT_MAX_TERMS):
    """Sum the series, returning the value with bookkeeping.

    Terminating series are summed exactly. Otherwise the series is summed on the
    mpmath float path until a term and its successor both fall below
    ``tol`` times the partial sum.

    :param h: The series to evaluate
    :type h: HyperSeries
    :param tol: Relative term-smallness threshold
    :param max_terms: Iteration cap
    :type max_terms: int
    :rtype: SeriesSum
    """
    conv = classify_convergence(h)
    _check_poles(h, conv)
    if conv.tag == ConvergenceClass.TERMINATING:
        value = _finite_sum(h.a, h.b, h.z, conv.degree)
        return SeriesSum(value, is_exact(value), conv.degree + 1)
    if is_zero(h.z):
        return SeriesSum(to_approx(1) if is_approx(h.z) else 1, not is_approx(h.z), 1)
    _check_region(h, conv)

    tol = tolerance_value(tol)
    a = [to_approx(v) for v in h.a]
    b = [to_approx(v) for v in h.b]
    z = to_approx(h.z)
    term = mp.mpf(1)
    total = mp.mpf(1)
    small = 0
    for k in range(max_terms):
        term *= _term_ratio(a, b, z, k)
        total += term
        if abs(term) <= tol * abs(total):
            small += 1
            if small == 2:
                ratio = abs(_term_ratio(a, b, z, k + 1))
                tail = abs(term) * ratio / (1 - ratio) if ratio < 1 else mp.inf
                logger.debug('%sF%s summed with %s terms, tail bound %s', h.p, h.q, k + 2, mp.nstr(tail, 5))
                return SeriesSum(total, False, k + 2, tail)
        else:
            small = 0
    raise ConvergenceFailure(
        'tolerance not met after {} terms'.format(max_terms), max_terms=max_terms, partial=mp.nstr(total, 10))


def eval_hyper(h, tol=DEFAULT_TOLERANCE, max_terms=DEFAULT_MAX_TERMS):
    return sum_hyper(h, tol, max_terms).value


def eval_hyper_finite_sum(h, K):
    """Partial sum of the series up to and including the term k = K.

    Denominators are taken as given, so the terminating series equals this
    partial sum at its termination degree.

    :raises PoleInDenominator: if a denominator vanishes within the first K terms
    """
    for b in h.b:
        c = nonpositive_integer(b)
        if c is not None and c < K:
            raise PoleInDenominator('denominator parameter {} vanishes within {} terms'.format(b, K), b=b)
    return _finite_sum(h.a, h.b, h.z, K)


def reversed_finite_sum(h, K):
    """The partial sum up to K rewritten as a reversed terminating series.

    Σ_{k=0}^{K} (a)_k/(c)_k z^k/k!
      = (a)_K/(c)_K · z^K/K! · F(-K, 1, 1-K-c; 1-K-a; (-1)^{p+q+1}/z)
    """
    if is_zero(h.z):
        raise PoleInDenominator('reversed form requires z != 0', z=h.z)
    lead = div(mul(pochhammer_multi(h.a, K), power(h.z, K)), mul(pochhammer_multi(h.b, K), factorial(K)))
    if is_zero(lead):
        # (a)_K vanishes: the reversed denominators hit zero as well
        raise PoleInDenominator('reversed form undefined when (a)_K = 0', K=K)
    sign = -1 if (h.p + h.q + 1) % 2 else 1
    reversed_series = HyperSeries(
        (-K, 1) + tuple(sub(1 - K, c) for c in h.b),
        tuple(sub(1 - K, a) for a in h.a),
        div(sign, h.z),
    )
    return mul(lead, eval_hyper_finite_sum(reversed_series, K))
