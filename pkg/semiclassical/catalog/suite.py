"""Regression suite over the catalog.

Every entry is instantiated at its default parameters (every option of a
reduced-Uvarov entry separately) and run through the Pearson, moment,
ξ-identity, residual and transform checks.
"""
import logging
from dataclasses import dataclass, field

import mpmath as mp
import sympy

from semiclassical.commons.errors import SemiclassicalError
from semiclassical.core.exact import DEFAULT_DIGITS, scalars_agree
from semiclassical.core.functional import (
    Truncated, brute_force_moments, is_support_point, moments, pearson_pair, pearson_residual
)
from semiclassical.core.hyper import DEFAULT_MAX_TERMS, DEFAULT_TOLERANCE
from semiclassical.core.stieltjes import (
    default_sample_points, derive_xi, equations_equivalent, interpolate_xi, polys_close, verify_equation
)
from semiclassical.core.transforms import (
    Christoffel, Geronimus, apply_geronimus, apply_transform, christoffel_moments, compose_check,
    transformed_equation, truncated_moments
)
from semiclassical.catalog.catalog import SYMBOLS, to_scalar

logger = logging.getLogger(__name__)

SUITE_TOLERANCE = '1e-20'
CLOSED_FORM_MAX_N = 8
BRUTE_FORCE_K = 8
COMPOSE_K = 10

PASS = 'PASS'
FAIL = 'FAIL'
XFAIL = 'XFAIL'


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ''

    def to_dict(self):
        body = {'check': self.name, 'passed': self.passed}
        if self.detail:
            body['detail'] = self.detail
        return body


@dataclass
class EntryReport:
    entry_id: str
    anchor: str
    status: str
    option: object = None
    checks: list = field(default_factory=list)
    error: str = ''

    def to_dict(self):
        body = {
            'id': self.entry_id,
            'anchor': self.anchor,
            'status': self.status,
            'checks': [check.to_dict() for check in self.checks],
        }
        if self.option is not None:
            body['option'] = self.option
        if self.error:
            body['error'] = self.error
        return body


@dataclass
class SuiteReport:
    entries: list
    counts: dict
    complete: bool

    @property
    def summary(self):
        totals = {PASS: 0, FAIL: 0, XFAIL: 0}
        for report in self.entries:
            totals[report.status] += 1
        return totals

    @property
    def passed(self):
        return self.complete and self.summary[FAIL] == 0

    def failures(self):
        return [report for report in self.entries if report.status == FAIL]

    def to_dict(self):
        return {
            'passed': self.passed,
            'complete': self.complete,
            'counts': self.counts,
            'summary': self.summary,
            'entries': [report.to_dict() for report in self.entries],
        }


class EntryChecks:
    """The checks of one instantiated catalog entry.

    :param catalog: The loaded catalog
    :type catalog: semiclassical.catalog.catalog.Catalog
    :param entry: The entry under test
    :param option: Index of the ω/Ω option, None for entries without options
    :param tol: Agreement tolerance of the checks
    :param series_tol: Tolerance of series evaluation
    """

    def __init__(self, catalog, entry, option, tol, series_tol, max_terms):
        self.catalog = catalog
        self.entry = entry
        self.option = option
        self.tol = tol
        self.series_tol = series_tol
        self.max_terms = max_terms

        assignments = {} if option is None else {'option': option}
        self.values = catalog.resolve(entry, assignments)
        self.spec = catalog.build(entry, self.values, series_tol, max_terms)
        self.pair = pearson_pair(self.spec)
        K = max(self.pair.eta.degree, self.pair.sigma.degree, CLOSED_FORM_MAX_N) + 1
        self.nu = moments(self.spec, K, series_tol, max_terms)
        self.eq = derive_xi(self.pair, self.nu)

    def checks(self):
        yield 'pearson_residual', self.pearson_residual
        yield 'class', self.class_s
        if self.entry.template is None:
            yield 'special_values_pair', self.special_values_pair
        yield 'brute_force_moments', self.brute_force
        if self.entry.moments is not None:
            yield 'closed_form_moments', self.closed_form
        if self.option in (None, 0):
            if self.catalog.expected_xi(self.entry) is not None:
                yield 'xi_identity', self.xi_identity
            if self.entry.xi_transformed is not None:
                yield 'transformed_xi_identity', self.transformed_xi_identity
            if self.entry.compose:
                yield 'compose_laws', self.compose
        if self.catalog.expected_xi(self.entry) is not None:
            yield 'xi_at_defaults', self.xi_at_defaults
        yield 'xi_interpolated', self.xi_interpolated
        yield 'verify_equation', self.verify
        if isinstance(self.spec.support, Truncated):
            yield 'truncated_moments', self.truncation
        if self.entry.recipe is not None and self.entry.recipe['transforms'][-1]['kind'] != 'truncate':
            yield 'transform_equation', self.transform

    def run(self):
        results = []
        for name, check in self.checks():
            try:
                passed, detail = check()
            except SemiclassicalError as e:
                passed, detail = False, '{}: {}'.format(e.kind, e.message)
            results.append(CheckResult(name, bool(passed), detail))
        return results

    ## individual checks

    def pearson_residual(self):
        x0 = self.spec.left_endpoint
        points = [x for x in range(x0, x0 + 21) if is_support_point(self.spec, x)]
        bad = [x for x in points if not scalars_agree(0, pearson_residual(self.spec, self.pair, x), self.tol)]
        return not bad, 'nonzero at x = {}'.format(bad) if bad else ''

    def class_s(self):
        ok = self.pair.class_s == self.entry.class_s
        return ok, '' if ok else 'class {} expected {}'.format(self.pair.class_s, self.entry.class_s)

    def special_values_pair(self):
        expected = self.catalog.template_pair(self.entry, self.values)
        ok = expected.same_polynomials(self.pair)
        return ok, '' if ok else 'eta {} sigma {} expected eta {} sigma {}'.format(
            self.pair.eta, self.pair.sigma, expected.eta, expected.sigma)

    def brute_force(self):
        direct = brute_force_moments(self.spec, BRUTE_FORCE_K, self.series_tol, self.max_terms)
        bad = [n for n in range(BRUTE_FORCE_K + 1) if not scalars_agree(direct[n], self.nu[n], self.tol)]
        return not bad, 'disagree at n = {}'.format(bad) if bad else ''

    def closed_form(self):
        bad = []
        n_symbol = SYMBOLS['n']
        for n in range(CLOSED_FORM_MAX_N + 1):
            value = sympy.simplify(self.entry.moments.subs(self.values).subs(n_symbol, n))
            if not value.is_finite:
                continue
            if not scalars_agree(to_scalar(value), self.nu[n], self.tol):
                bad.append(n)
        return not bad, 'disagree at n = {}'.format(bad) if bad else ''

    def xi_identity(self):
        return self.catalog.xi_identity(self.entry), ''

    def transformed_xi_identity(self):
        return self.catalog.transformed_xi_identity(self.entry), ''

    def xi_at_defaults(self):
        printed = self.catalog.numeric_xi(self.entry, self.values, self.nu)
        ok = polys_close(printed, self.eq.xi, self.tol)
        return ok, '' if ok else 'printed {} derived {}'.format(printed, self.eq.xi)

    def xi_interpolated(self):
        ts = default_sample_points(self.spec)
        numeric = interpolate_xi(self.spec, self.pair, ts, self.series_tol, self.max_terms)
        ok = polys_close(numeric, self.eq.xi, self.tol)
        return ok, '' if ok else 'interpolated {} derived {}'.format(numeric, self.eq.xi)

    def verify(self):
        report = verify_equation(self.spec, self.eq, None, self.series_tol, self.max_terms, self.tol)
        return report.passed, '' if report.passed else str(report.to_dict())

    def truncation(self):
        report = truncated_moments(self.spec, BRUTE_FORCE_K, self.series_tol, self.max_terms)
        return report.agree, ''

    def compose(self):
        omega = to_scalar(self.values.get(SYMBOLS['omega'], self.catalog.defaults[SYMBOLS['omega']]))
        M = to_scalar(self.values.get(SYMBOLS['M'], self.catalog.defaults[SYMBOLS['M']]))
        report = compose_check(self.spec, omega, M, COMPOSE_K, self.series_tol, self.max_terms)
        return report.passed, '' if report.passed else 'failures {}'.format(report.failures)

    def transform(self):
        """The closed-form transformed equation against the one derived directly."""
        base_entry, base_values, transforms = self.catalog.recipe(self.entry, self.values)
        base = self.catalog.build(base_entry, base_values, self.series_tol, self.max_terms)
        for step in transforms[:-1]:
            base = apply_transform(base, step, self.series_tol, self.max_terms)
        transform = transforms[-1]
        expected = transformed_equation(base, self.spec, transform, self.series_tol, self.max_terms)
        detail = [] if equations_equivalent(expected, self.eq, self.tol) else ['transformed equation differs']

        table = None
        if isinstance(transform, Christoffel):
            base_nu = moments(base, BRUTE_FORCE_K + 1, self.series_tol, self.max_terms)
            table = christoffel_moments(base_nu, transform.omega)
        elif isinstance(transform, Geronimus):
            _, table = apply_geronimus(
                base, transform.omega, transform.M, BRUTE_FORCE_K, self.series_tol, self.max_terms)
        if table is not None and not all(scalars_agree(self.nu[n], table[n], self.tol) for n in range(len(table))):
            detail.append('transformed moments differ')
        return not detail, '; '.join(detail)


def run_entry(catalog, entry, option=None, tol=SUITE_TOLERANCE, series_tol=DEFAULT_TOLERANCE,
              max_terms=DEFAULT_MAX_TERMS):
    """Run every applicable check for one entry and option.

    :rtype: EntryReport
    """
    report = EntryReport(entry.id, entry.anchor, FAIL, option)
    try:
        checks = EntryChecks(catalog, entry, option, tol, series_tol, max_terms)
    except SemiclassicalError as e:
        if entry.expected_failure == e.kind:
            logger.warning('%s: expected failure %s (%s)', entry.id, e.kind, e.message)
            report.status = XFAIL
        else:
            report.error = '{}: {}'.format(e.kind, e.message)
        return report
    if entry.expected_failure:
        report.error = 'expected {} but the entry instantiated'.format(entry.expected_failure)
        return report
    report.checks = checks.run()
    report.status = PASS if all(check.passed for check in report.checks) else FAIL
    logger.debug('%s%s: %s', entry.id, '' if option is None else ' [{}]'.format(option), report.status)
    return report


def regression_suite(catalog, ids=None, tol=SUITE_TOLERANCE, series_tol=DEFAULT_TOLERANCE,
                     max_terms=DEFAULT_MAX_TERMS, digits=DEFAULT_DIGITS):
    """Run the catalog regression suite.

    The suite fails when any entry fails or when the catalog does not hold
    exactly 15 canonical and 42 subcase entries.

    :param catalog: The loaded catalog
    :type catalog: semiclassical.catalog.catalog.Catalog
    :param ids: Restrict the run to these entry ids
    :type ids: list
    :param tol: Agreement tolerance of the numeric checks
    :param series_tol: Tolerance of the series evaluation
    :param digits: Working precision of the approximate path
    :rtype: SuiteReport
    """
    entries = catalog.list() if ids is None else [catalog.get(entry_id) for entry_id in ids]
    reports = []
    with mp.workdps(digits):
        for entry in entries:
            options = range(len(entry.options)) if entry.options else [None]
            for option in options:
                reports.append(run_entry(catalog, entry, option, tol, series_tol, max_terms))
    report = SuiteReport(reports, catalog.counts(), catalog.is_complete())
    if not report.complete:
        logger.error('catalog holds %s, expected 15 canonical and 42 subcase entries', report.counts)
    logger.info('suite finished: %s', report.summary)
    return report
