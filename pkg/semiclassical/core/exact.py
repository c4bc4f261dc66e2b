"""Exact scalar and polynomial arithmetic.

Scalars come in three flavours that never mix implicitly:

* exact rationals (``int`` / ``fractions.Fraction``),
* approximate values (``mpmath.mpf`` at the current working precision),
* symbolic values (``sympy.Expr``), used for identity checks in named parameters.

Every arithmetic helper lifts both operands to the weaker domain first
(exact < approximate < symbolic), so callers can combine values freely.
"""
import itertools
import logging
from fractions import Fraction
from functools import lru_cache

import mpmath as mp
import sympy

logger = logging.getLogger(__name__)

DEFAULT_DIGITS = 50


## scalar domains

def is_symbolic(value):
    return isinstance(value, sympy.Basic)


def is_approx(value):
    return isinstance(value, mp.mpf)


def is_exact(value):
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def all_exact(values):
    return all(is_exact(v) for v in values)


def to_fraction(value):
    """Convert an exact or rational sympy value to :class:`Fraction`.

    :raises TypeError: if the value carries no exact rational meaning
    """
    if is_exact(value):
        return Fraction(value)
    if is_symbolic(value) and value.is_Rational:
        return Fraction(int(value.p), int(value.q))
    raise TypeError('not an exact rational: {!r}'.format(value))


def to_approx(value):
    """Lift a scalar to an mpf at the current working precision."""
    if is_approx(value):
        return value
    if isinstance(value, int):
        return mp.mpf(value)
    if isinstance(value, Fraction):
        return mp.mpf(value.numerator) / value.denominator
    if is_symbolic(value):
        return mp.mpf(str(sympy.N(value, mp.mp.dps + 5)))
    return mp.mpf(value)


def to_symbolic(value):
    if is_symbolic(value):
        return value
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    if is_approx(value):
        return sympy.Float(mp.nstr(value, mp.mp.dps), mp.mp.dps)
    return sympy.sympify(value)


def lift(a, b):
    """Bring two scalars into a common domain."""
    if is_symbolic(a) or is_symbolic(b):
        return to_symbolic(a), to_symbolic(b)
    if is_approx(a) or is_approx(b):
        return to_approx(a), to_approx(b)
    return a, b


def add(a, b):
    a, b = lift(a, b)
    return a + b


def sub(a, b):
    a, b = lift(a, b)
    return a - b


def mul(a, b):
    a, b = lift(a, b)
    if is_symbolic(a):
        return sympy.expand(a * b)
    return a * b


def div(a, b):
    a, b = lift(a, b)
    if is_exact(a):
        if b == 0:
            raise ZeroDivisionError('division of {} by zero'.format(a))
        return Fraction(a) / Fraction(b)
    if is_symbolic(a):
        return sympy.cancel(a / b)
    return a / b


def neg(a):
    return -a


def power(a, n):
    if is_exact(a):
        return Fraction(a) ** n
    return a ** n


def absolute(a):
    if is_symbolic(a):
        return sympy.Abs(a)
    return abs(a)


def is_zero(value):
    if is_symbolic(value):
        return sympy.expand(value) == 0
    return value == 0


def is_equal(a, b):
    return is_zero(sub(a, b))


def integer_value(value):
    """Return ``value`` as int when it is an integer in any domain, else None."""
    if isinstance(value, bool):
        return None
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else None
    if is_approx(value):
        return int(value) if mp.isint(value) else None
    if is_symbolic(value):
        return int(value) if value.is_Integer else None
    return None


def nonpositive_integer(value):
    """Return k ≥ 0 if ``value == -k``, else None."""
    k = integer_value(value)
    if k is None or k > 0:
        return None
    return -k


def nonnegative_integer(value):
    k = integer_value(value)
    if k is None or k < 0:
        return None
    return k


def parse_scalar(value):
    """Parse the JSON representation of a scalar.

    ``"p/q"`` strings, integers and decimal strings become exact rationals;
    ``{"value": ..., "digits": ...}`` objects become mpf values rounded at
    ``digits`` decimal digits (the working precision when absent).
    """
    if is_exact(value) or is_approx(value) or is_symbolic(value):
        return Fraction(value) if isinstance(value, int) else value
    if isinstance(value, dict):
        with mp.workdps(int(value.get('digits', mp.mp.dps))):
            return mp.mpf(value['value'])
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            return mp.mpf(value)
    raise ValueError('cannot parse scalar {!r}'.format(value))


def tolerance_value(tol):
    """A tolerance given as a string, rational or mpf, as an mpf."""
    return to_approx(mp.mpf(tol) if isinstance(tol, str) else tol)


def scalars_agree(expected, actual, tol):
    """Exact equality, or |expected − actual| ≤ tol·(1 + |expected|)."""
    diff = sub(expected, actual)
    if is_zero(diff):
        return True
    return to_approx(absolute(diff)) <= tolerance_value(tol) * (1 + to_approx(absolute(expected)))


def format_scalar(value):
    """JSON form of a scalar; mpf values carry enough digits to parse back unchanged."""
    if is_exact(value):
        return str(Fraction(value))
    if is_approx(value):
        return {'value': mp.nstr(value, mp.mp.dps + 3, strip_zeros=False), 'digits': mp.mp.dps}
    if is_symbolic(value):
        return str(value)
    return str(value)


## combinatorial primitives

def _times(a, b):
    if isinstance(a, Poly) or isinstance(b, Poly):
        return Poly.coerce(a) * b
    return mul(a, b)


def _shifted(x, j):
    if isinstance(x, Poly):
        return x + j
    return add(x, j)


def _one_like(x):
    return Poly.one(x.var) if isinstance(x, Poly) else 1


def pochhammer(x, n):
    """Rising factorial (x)_n = x(x+1)...(x+n-1); accepts a Scalar or a Poly."""
    if n < 0:
        raise ValueError('pochhammer requires n >= 0, got {}'.format(n))
    result = _one_like(x)
    for j in range(n):
        result = _times(result, _shifted(x, j))
    return result


def pochhammer_multi(params, n):
    result = 1
    for param in params:
        result = mul(result, pochhammer(param, n))
    return result


def falling_factorial(x, n):
    """Falling factorial φ_n(x) = x(x-1)...(x-n+1)."""
    if n < 0:
        raise ValueError('falling_factorial requires n >= 0, got {}'.format(n))
    result = _one_like(x)
    for j in range(n):
        result = _times(result, _shifted(x, -j))
    return result


def factorial(n):
    return falling_factorial(n, n)


def elementary_symmetric(vals, k):
    if k > len(vals):
        return 0
    total = 0
    for combo in itertools.combinations(vals, k):
        term = 1
        for value in combo:
            term = mul(term, value)
        total = add(total, term)
    return total


@lru_cache(maxsize=None)
def stirling2(k, n):
    """Stirling numbers of the second kind from the triangle recurrence."""
    if k == n:
        return 1
    if n == 0 or n > k:
        return 0
    return n * stirling2(k - 1, n) + stirling2(k - 1, n - 1)


def stirling_convert(nu):
    """Convert falling-factorial moments ν_n into power moments m_k = Σ S2(k,n)ν_n.

    :param nu: MomentTable or plain sequence of moments
    :return: power moments m_0..m_K
    :rtype: list
    """
    values = list(getattr(nu, 'values', nu))
    power_moments = []
    for k in range(len(values)):
        total = 0
        for n in range(k + 1):
            s = stirling2(k, n)
            if s:
                total = add(total, mul(s, values[n]))
        power_moments.append(total)
    return power_moments


## polynomials

class Poly:
    """Dense univariate polynomial, coefficients in ascending powers."""

    __slots__ = ('coeffs', 'var')

    def __init__(self, coeffs=(), var='x'):
        coeffs = list(coeffs)
        while coeffs and is_zero(coeffs[-1]):
            coeffs.pop()
        self.coeffs = tuple(coeffs)
        self.var = var

    @classmethod
    def coerce(cls, value, var='x'):
        if isinstance(value, Poly):
            return value
        return cls([value], var)

    @classmethod
    def zero(cls, var='x'):
        return cls((), var)

    @classmethod
    def one(cls, var='x'):
        return cls([1], var)

    @classmethod
    def identity(cls, var='x'):
        return cls([0, 1], var)

    @classmethod
    def monomial(cls, k, c=1, var='x'):
        return cls([0] * k + [c], var)

    @classmethod
    def linear(cls, shift, var='x'):
        """The polynomial ``x + shift``."""
        return cls([shift, 1], var)

    @classmethod
    def from_factors(cls, shifts, lead=1, var='x'):
        """``lead · ∏ (x + shift)``."""
        result = cls([lead], var)
        for shift in shifts:
            result = result * cls.linear(shift, var)
        return result

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self):
        return not self.coeffs

    def coeff(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def with_var(self, var):
        return Poly(self.coeffs, var)

    def map(self, func):
        return Poly([func(c) for c in self.coeffs], self.var)

    def __call__(self, value):
        if isinstance(value, Poly):
            result = Poly.zero(value.var)
            for c in reversed(self.coeffs):
                result = result * value + c
            return result
        result = 0
        for c in reversed(self.coeffs):
            result = add(mul(result, value), c)
        return result

    def __add__(self, other):
        other = Poly.coerce(other, self.var)
        size = max(len(self.coeffs), len(other.coeffs))
        return Poly([add(self.coeff(k), other.coeff(k)) for k in range(size)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly([neg(c) for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-Poly.coerce(other, self.var))

    def __rsub__(self, other):
        return Poly.coerce(other, self.var) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly([mul(c, other) for c in self.coeffs], self.var)
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.var)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = add(out[i + j], mul(a, b))
        return Poly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = Poly.one(self.var)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.coerce(other, self.var)
        return (self - other).is_zero()

    __hash__ = None

    def scale(self, c):
        return self * c

    def shift(self, h):
        """Return p(x + h)."""
        if is_zero(h):
            return self
        return self(Poly.linear(h, self.var))

    def divmod_linear(self, root):
        """Synthetic division by ``(x - root)``.

        :return: quotient and remainder (the value p(root))
        :rtype: tuple(Poly, Scalar)
        """
        if self.is_zero():
            return Poly.zero(self.var), 0
        quotient = [0] * self.degree
        carry = 0
        for k in range(self.degree, -1, -1):
            carry = add(self.coeffs[k], mul(carry, root))
            if k > 0:
                quotient[k - 1] = carry
        return Poly(quotient, self.var), carry

    def to_falling_basis(self, shift=0):
        """Coefficients c_n with p(x) = Σ c_n φ_n(x + shift)."""
        q = self.shift(neg(shift)) if not is_zero(shift) else self
        out = [0] * len(q.coeffs)
        for k, c in enumerate(q.coeffs):
            if is_zero(c):
                continue
            for n in range(k + 1):
                s = stirling2(k, n)
                if s:
                    out[n] = add(out[n], mul(s, c))
        return out

    def __repr__(self):
        return 'Poly({!r}, var={!r})'.format(list(self.coeffs), self.var)

    def __str__(self):
        if self.is_zero():
            return '0'
        terms = []
        for k, c in enumerate(self.coeffs):
            if is_zero(c):
                continue
            if k == 0:
                terms.append('({})'.format(c))
            elif k == 1:
                terms.append('({})*{}'.format(c, self.var))
            else:
                terms.append('({})*{}**{}'.format(c, self.var, k))
        return ' + '.join(terms)


class BiPoly:
    """Polynomial in ``t`` whose coefficients are :class:`Poly` in ``x``."""

    __slots__ = ('coeffs',)

    def __init__(self, coeffs=()):
        coeffs = [Poly.coerce(c) for c in coeffs]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @classmethod
    def outer(cls, p_t, q_x):
        """The product p(t)·q(x)."""
        return cls([q_x * c for c in p_t.coeffs])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def coefficient(self, j):
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else Poly.zero()

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        size = max(len(self.coeffs), len(other.coeffs))
        return BiPoly([self.coefficient(j) + other.coefficient(j) for j in range(size)])

    def __neg__(self):
        return BiPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return (self - other).is_zero()

    __hash__ = None

    def diagonal(self):
        """Substitute t := x."""
        x = Poly.identity()
        result = Poly.zero()
        for j, c in enumerate(self.coeffs):
            result = result + c * (x ** j)
        return result

    def at_x(self, value):
        """Fix x to a scalar, leaving a Poly in t."""
        return Poly([c(value) for c in self.coeffs], 't')

    def times_t_minus_x(self):
        x = Poly.identity()
        shifted = [Poly.zero()] + list(self.coeffs)
        scaled = [c * x for c in self.coeffs] + [Poly.zero()]
        return BiPoly([a - b for a, b in zip(shifted, scaled)])

    def divide_by_t_minus_x(self):
        """Exact synthetic division by (t - x).

        :raises ValueError: if the substitution t := x does not vanish
        """
        if self.is_zero():
            return BiPoly()
        x = Poly.identity()
        n = self.degree
        quotient = [Poly.zero()] * n
        carry = Poly.zero()
        for j in range(n, -1, -1):
            carry = self.coeffs[j] + carry * x
            if j > 0:
                quotient[j - 1] = carry
        if not carry.is_zero():
            raise ValueError('bivariate polynomial is not divisible by (t - x)')
        return BiPoly(quotient)

    def __repr__(self):
        return 'BiPoly({!r})'.format(list(self.coeffs))
