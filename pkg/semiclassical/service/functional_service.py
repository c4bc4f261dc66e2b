import dataclasses
import logging

import mpmath as mp

from semiclassical.commons.errors import ConstraintViolated, InputError, MissingParameter, SemiclassicalError
from semiclassical.core.exact import DEFAULT_DIGITS, Poly, nonnegative_integer, parse_scalar
from semiclassical.core.functional import (
    FunctionalSpec, Truncated, brute_force_moments, moment_convergence, moments, pearson_pair
)
from semiclassical.core.hyper import DEFAULT_MAX_TERMS, DEFAULT_TOLERANCE
from semiclassical.core.orthopoly import (
    CHEBYSHEV, HANKEL, compare_recurrences, orthogonality_check, recurrence_from_moments
)
from semiclassical.core.stieltjes import equations_equivalent, stieltjes_equation, verify_equation
from semiclassical.core.transforms import (
    Truncate, apply_transform, parse_transform, transformed_equation, truncated_moments
)

logger = logging.getLogger(__name__)

RESIDUAL_TOLERANCE = '1e-20'
DEFAULT_K = 5
MAX_DEGREE = 12


def _parse_list(values, name):
    if not isinstance(values, list):
        raise InputError('{} must be a list'.format(name), name=name)
    try:
        return [parse_scalar(v) for v in values]
    except (ValueError, TypeError) as e:
        raise InputError('{} holds an invalid scalar: {}'.format(name, e), name=name)


class FunctionalService:

    def __init__(self, conf, catalog_service=None):
        """Create a new instance of FunctionalService.

        :param conf: Configuration to load values from
        :type conf: semiclassical.commons.conf.Conf
        :param catalog_service: Resolves ``{"catalog": id}`` inputs
        :type catalog_service: semiclassical.service.catalog_service.CatalogService
        """
        precision = conf.d.get('precision') or {}
        recurrence = conf.d.get('recurrence') or {}
        self.digits = precision.get('digits', DEFAULT_DIGITS)
        self.tolerance = precision.get('tolerance', DEFAULT_TOLERANCE)
        self.max_terms = precision.get('max_terms', DEFAULT_MAX_TERMS)
        self.residual_tolerance = precision.get('residual_tolerance', RESIDUAL_TOLERANCE)
        self.max_degree = recurrence.get('max_degree', MAX_DEGREE)
        self.method = recurrence.get('method', HANKEL)
        self.catalog_service = catalog_service

    ## input

    def spec_from_body(self, body):
        """The functional of a request body.

        Accepts ``{"catalog": id, "params": {...}}``, ``{"spec": {...}}`` or the
        spec itself.

        :rtype: FunctionalSpec
        :raises InputError: if the body does not describe a functional
        """
        if not isinstance(body, dict):
            raise InputError('request body must be a JSON object')
        if 'catalog' in body:
            if self.catalog_service is None:
                raise InputError('catalog input is not available')
            return self.catalog_service.instantiate(body['catalog'], body.get('params'))
        data = body.get('spec', body)
        if not isinstance(data, dict):
            raise InputError('spec must be a JSON object')
        try:
            return FunctionalSpec.from_dict(data)
        except (KeyError, ValueError, TypeError) as e:
            raise InputError('invalid spec: {}'.format(e))

    def _degree(self, body, name='K', default=DEFAULT_K):
        value = body.get(name, default)
        try:
            K = nonnegative_integer(parse_scalar(value))
        except (ValueError, TypeError):
            K = None
        if K is None:
            raise InputError('{} must be a non-negative integer, got {!r}'.format(name, value), name=name)
        return K

    def _transforms(self, body):
        data = body.get('transform', body.get('transforms'))
        if data is None:
            raise MissingParameter('a transform is required', name='transform')
        if isinstance(data, dict):
            data = [data]
        if not data or not all(isinstance(item, dict) for item in data):
            raise InputError('transform must be an object or a non-empty list of objects')
        return [parse_transform(item) for item in data]

    ## operations

    def classify(self, body):
        """Pearson pair, class and convergence class of the moment series.

        A divergent moment series does not prevent the classification; it is
        reported under ``moments``.
        """
        with mp.workdps(self.digits):
            spec = self.spec_from_body(body)
            pair = pearson_pair(spec)
            conv, error = moment_convergence(spec)
            return {
                'spec': spec.to_dict(),
                'pearson': pair.to_dict(),
                'class': pair.class_s,
                'convergence': conv.to_dict(),
                'moments': error.to_dict() if error is not None else {'status': 'ok'},
            }

    def moments(self, body):
        """ν_0..ν_K, optionally cross-checked by direct summation."""
        K = self._degree(body)
        with mp.workdps(self.digits):
            spec = self.spec_from_body(body)
            nu = moments(spec, K, self.tolerance, self.max_terms)
            result = {'spec': spec.to_dict(), 'moments': nu.to_dict()}
            if body.get('brute_force'):
                result['brute_force'] = brute_force_moments(spec, K, self.tolerance, self.max_terms).to_dict()
            if isinstance(spec.support, Truncated):
                result['truncation'] = truncated_moments(spec, K, self.tolerance, self.max_terms).to_dict()
            return result

    def stieltjes_xi(self, body):
        with mp.workdps(self.digits):
            spec = self.spec_from_body(body)
            pair, nu, eq = stieltjes_equation(spec, self.tolerance, self.max_terms)
            return {
                'spec': spec.to_dict(),
                'pearson': pair.to_dict(),
                'moments': nu.to_dict(),
                'equation': eq.to_dict(),
            }

    def verify(self, body):
        """Residual of the Stieltjes equation at sample points.

        ``xi`` replaces the derived right-hand side, ``samples`` the default
        points and ``tol`` the residual tolerance.
        """
        with mp.workdps(self.digits):
            spec = self.spec_from_body(body)
            _, _, eq = stieltjes_equation(spec, self.tolerance, self.max_terms)
            if body.get('xi') is not None:
                eq = dataclasses.replace(eq, xi=Poly(_parse_list(body['xi'], 'xi'), 't'))
            samples = _parse_list(body['samples'], 'samples') if body.get('samples') is not None else None
            report = verify_equation(
                spec, eq, samples, self.tolerance, self.max_terms, body.get('tol', self.residual_tolerance))
            result = report.to_dict()
            result['equation'] = eq.to_dict()
            return result

    def transform(self, body):
        """Apply one or more transforms and report the transformed functional.

        ``closed_form`` tells whether the equation obtained from the base
        equation by the closed-form law matches the one derived directly; it is
        None for truncation.
        """
        K = self._degree(body)
        with mp.workdps(self.digits):
            base = self.spec_from_body(body)
            transforms = self._transforms(body)
            spec = base
            for step in transforms[:-1]:
                spec = apply_transform(spec, step, self.tolerance, self.max_terms)
            last = transforms[-1]
            transformed = apply_transform(spec, last, self.tolerance, self.max_terms)
            pair, _, eq = stieltjes_equation(transformed, self.tolerance, self.max_terms)
            closed_form = None
            if not isinstance(last, Truncate):
                expected = transformed_equation(spec, transformed, last, self.tolerance, self.max_terms)
                closed_form = equations_equivalent(expected, eq, self.residual_tolerance)
                if not closed_form:
                    logger.warning('closed-form %s equation differs from the derived one', last.kind)
            return {
                'spec': transformed.to_dict(),
                'transforms': [step.to_dict() for step in transforms],
                'pearson': pair.to_dict(),
                'moments': moments(transformed, K, self.tolerance, self.max_terms).to_dict(),
                'equation': eq.to_dict(),
                'closed_form': closed_form,
            }

    def recurrence(self, body):
        """Three-term recurrence of degree K, checked for orthogonality.

        Both algorithms run; ``methods_agree`` is None when the second one fails.
        """
        K = self._degree(body)
        if K > self.max_degree:
            raise ConstraintViolated(
                'K = {} exceeds the recurrence cap {}'.format(K, self.max_degree), K=K, cap=self.max_degree)
        method = body.get('method', self.method)
        if method not in (HANKEL, CHEBYSHEV):
            raise ConstraintViolated('unknown recurrence method {!r}'.format(method), method=method)
        other = CHEBYSHEV if method == HANKEL else HANKEL
        tol = body.get('tol', self.residual_tolerance)
        with mp.workdps(self.digits):
            spec = self.spec_from_body(body)
            nu = moments(spec, 2 * K, self.tolerance, self.max_terms)
            rec = recurrence_from_moments(nu, K, method)
            try:
                agree = compare_recurrences(rec, recurrence_from_moments(nu, K, other), tol)
            except SemiclassicalError as e:
                logger.warning('%s recurrence failed: %s', other, e.message)
                agree = None
            report = orthogonality_check(spec, rec, K, tol, self.max_terms, nu)
            return {
                'spec': spec.to_dict(),
                'recurrence': rec.to_dict(),
                'orthogonality': report.to_dict(),
                'methods_agree': agree,
            }
