"""Monic orthogonal polynomials and their three-term recurrence from moments.

    p_{n+1}(x) = (x − α_n) p_n(x) − β_n p_{n−1}(x),   β_0 = ν_0
"""
import logging
from dataclasses import dataclass

import mpmath as mp
import sympy

from semiclassical.commons.errors import ConstraintViolated, MissingParameter, SingularHankel
from semiclassical.core.exact import (
    Poly, absolute, add, all_exact, div, format_scalar, is_approx, is_symbolic, is_zero, mul, sub,
    to_approx, to_fraction, to_symbolic, tolerance_value
)
from semiclassical.core.functional import moments
from semiclassical.core.hyper import DEFAULT_MAX_TERMS, DEFAULT_TOLERANCE

logger = logging.getLogger(__name__)

HANKEL = 'hankel'
CHEBYSHEV = 'chebyshev'
METHODS = (HANKEL, CHEBYSHEV)


@dataclass(frozen=True)
class Recurrence:
    alpha: tuple
    beta: tuple
    method: str = HANKEL

    def __len__(self):
        return len(self.alpha)

    def to_dict(self):
        return {
            'alpha': [format_scalar(v) for v in self.alpha],
            'beta': [format_scalar(v) for v in self.beta],
            'method': self.method,
        }


def _det(rows):
    values = [v for row in rows for v in row]
    if not rows:
        return 1
    if any(is_approx(v) for v in values) and not any(is_symbolic(v) for v in values):
        return mp.det(mp.matrix([[to_approx(v) for v in row] for row in rows]))
    det = sympy.Matrix([[to_symbolic(v) for v in row] for row in rows]).det(method='bareiss')
    return to_fraction(det) if all_exact(values) else sympy.expand(det)


def _hankel(m, n, shifted=False):
    """Leading n×n Hankel determinant; ``shifted`` moves the last column by one."""
    rows = []
    for i in range(n):
        row = [m[i + j] for j in range(n - 1)]
        if n:
            row.append(m[i + n] if shifted else m[i + n - 1])
        rows.append(row)
    return _det(rows)


def _require(nu, count):
    if len(nu) < count:
        raise MissingParameter('{} moments are required, {} given'.format(count, len(nu)))


def _hankel_recurrence(nu, K):
    m = nu.power_moments()
    deltas = [1]
    primes = [0]
    for n in range(1, K + 1):
        delta = _hankel(m, n)
        if is_zero(delta):
            raise SingularHankel(n - 1)
        deltas.append(delta)
        primes.append(_hankel(m, n, shifted=True))
    alpha = [sub(div(primes[n + 1], deltas[n + 1]), div(primes[n], deltas[n])) for n in range(K)]
    beta = [nu[0]] + [div(mul(deltas[n + 1], deltas[n - 1]), mul(deltas[n], deltas[n])) for n in range(1, K)]
    return alpha, beta


def _chebyshev_recurrence(nu, K):
    """Modified Chebyshev algorithm on the falling-factorial modified moments.

    φ_{l+1}(y) = (y − l)φ_l(y), so the auxiliary recurrence has a_l = l, b_l = 0.
    """
    size = 2 * K
    previous = [0] * size
    current = list(nu.values[:size])
    if is_zero(current[0]):
        raise SingularHankel(0)
    alpha = [div(current[1], current[0]) if K else 0]
    beta = [current[0]]
    for k in range(1, K):
        following = [0] * size
        for l in range(k, size - k):
            value = sub(current[l + 1], mul(sub(alpha[k - 1], l), current[l]))
            following[l] = sub(value, mul(beta[k - 1], previous[l]))
        if is_zero(following[k]):
            raise SingularHankel(k)
        alpha.append(add(k, sub(div(following[k + 1], following[k]), div(current[k], current[k - 1]))))
        beta.append(div(following[k], current[k - 1]))
        previous, current = current, following
    return alpha[:K], beta[:K]


def recurrence_from_moments(nu, K, method=HANKEL):
    """Recurrence coefficients α_0..α_{K−1}, β_0..β_{K−1} in the variable x.

    Moments are taken in the basis φ_n(x + shift); the recurrence is computed in
    y = x + shift and α is shifted back.

    :param nu: Moments ν_0..ν_{2K−1}
    :type nu: semiclassical.core.functional.MomentTable
    :param K: Number of coefficients
    :type K: int
    :param method: hankel or chebyshev
    :type method: str
    :rtype: Recurrence
    :raises SingularHankel: if the functional is not quasi-definite at some level n < K
    """
    if method not in METHODS:
        raise ConstraintViolated('unknown recurrence method {!r}'.format(method), method=method)
    if K == 0:
        return Recurrence((), (), method)
    _require(nu, 2 * K)
    if method == HANKEL:
        alpha, beta = _hankel_recurrence(nu, K)
    else:
        alpha, beta = _chebyshev_recurrence(nu, K)
    shift = nu.basis_shift
    alpha = [sub(a, shift) for a in alpha]
    logger.debug('%s recurrence with %s coefficients', method, K)
    return Recurrence(tuple(alpha), tuple(beta), method)


def monic_polynomials(rec, K=None):
    """p_0..p_K from the recurrence."""
    K = len(rec) if K is None else K
    x = Poly.identity()
    polys = [Poly.one()]
    if K == 0:
        return polys
    polys.append(x - rec.alpha[0])
    for n in range(1, K):
        polys.append((x - rec.alpha[n]) * polys[n] - polys[n - 1] * rec.beta[n])
    return polys


def apply_functional(poly, nu):
    """L[poly] through the falling-factorial expansion."""
    coeffs = poly.to_falling_basis(nu.basis_shift)
    _require(nu, len(coeffs))
    total = 0
    for c, value in zip(coeffs, nu.values):
        total = add(total, mul(c, value))
    return total


@dataclass(frozen=True)
class OrthogonalityReport:
    matrix: tuple
    passed: bool

    def to_dict(self):
        return {
            'passed': self.passed,
            'matrix': [[format_scalar(v) for v in row] for row in self.matrix],
        }


def orthogonality_check(spec, rec, K, tol=DEFAULT_TOLERANCE, max_terms=DEFAULT_MAX_TERMS, nu=None):
    """Gram matrix L[p_i p_j] for i, j ≤ K.

    Passes iff every diagonal entry is nonzero and every off-diagonal entry is
    at most tol·max|diagonal|.

    :rtype: OrthogonalityReport
    """
    if nu is None or len(nu) < 2 * K + 1:
        nu = moments(spec, 2 * K, tol, max_terms)
    polys = monic_polynomials(rec, K)
    matrix = [[apply_functional(polys[i] * polys[j], nu) for j in range(K + 1)] for i in range(K + 1)]
    diagonal = [matrix[i][i] for i in range(K + 1)]
    passed = not any(is_zero(v) for v in diagonal)
    if passed:
        tol_value = tolerance_value(tol)
        scale = max(to_approx(absolute(v)) for v in diagonal)
        for i in range(K + 1):
            for j in range(K + 1):
                if i != j and not is_zero(matrix[i][j]) and to_approx(absolute(matrix[i][j])) > tol_value * scale:
                    passed = False
    return OrthogonalityReport(tuple(tuple(row) for row in matrix), passed)


def compare_recurrences(first, second, tol=DEFAULT_TOLERANCE):
    """Coefficient-wise agreement; exact inputs must agree exactly."""
    if len(first) != len(second):
        return False
    tol_value = tolerance_value(tol)
    for u, v in zip(first.alpha + first.beta, second.alpha + second.beta):
        diff = sub(u, v)
        if is_zero(diff):
            continue
        if all_exact([u, v]):
            return False
        if to_approx(absolute(diff)) > tol_value * (1 + to_approx(absolute(u))):
            return False
    return True
