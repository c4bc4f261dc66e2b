import logging

import mpmath as mp

from semiclassical.catalog.catalog import Catalog
from semiclassical.catalog.suite import SUITE_TOLERANCE, regression_suite
from semiclassical.core.exact import DEFAULT_DIGITS
from semiclassical.core.hyper import DEFAULT_MAX_TERMS, DEFAULT_TOLERANCE

logger = logging.getLogger(__name__)


class CatalogService:

    def __init__(self, conf):
        """Create a new instance of CatalogService.
        The fixture file is loaded on first use.

        :param conf: Configuration to load values from
        :type conf: semiclassical.commons.conf.Conf
        """
        precision = conf.d.get('precision') or {}
        catalog = conf.d.get('catalog') or {}
        self.path = catalog.get('path')
        self.digits = precision.get('digits', DEFAULT_DIGITS)
        self.series_tolerance = precision.get('tolerance', DEFAULT_TOLERANCE)
        self.max_terms = precision.get('max_terms', DEFAULT_MAX_TERMS)
        self.suite_tolerance = precision.get('residual_tolerance', SUITE_TOLERANCE)
        self._catalog = None

    @property
    def catalog(self):
        if self._catalog is None:
            self._catalog = Catalog.load(self.path)
            if not self._catalog.is_complete():
                logger.warning('catalog %s is incomplete: %s', self._catalog.path, self._catalog.counts())
        return self._catalog

    def list(self, kind=None):
        """Summary rows of the catalog entries.

        :param kind: canonical, subcase or variant; all entries when None
        :type kind: str
        :rtype: dict
        """
        return {
            'counts': self.catalog.counts(),
            'complete': self.catalog.is_complete(),
            'entries': [
                {'id': entry.id, 'kind': entry.kind, 'name': entry.name, 'anchor': entry.anchor,
                 'class': entry.class_s}
                for entry in self.catalog.list(kind)
            ],
        }

    def show(self, entry_id):
        return self.catalog.show(entry_id)

    def instantiate(self, entry_id, params=None):
        """Concrete functional of a catalog entry.

        :param entry_id: Catalog id
        :type entry_id: str
        :param params: Parameter values by name, e.g. ``{"z": "1/2"}``
        :type params: dict
        :rtype: semiclassical.core.functional.FunctionalSpec
        """
        with mp.workdps(self.digits):
            return self.catalog.instantiate(entry_id, params, self.series_tolerance, self.max_terms)

    def suite(self, ids=None, tol=None):
        """Run the regression suite, over ``ids`` only when given.

        :rtype: semiclassical.catalog.suite.SuiteReport
        """
        return regression_suite(
            self.catalog, ids, tol or self.suite_tolerance, self.series_tolerance, self.max_terms, self.digits)
