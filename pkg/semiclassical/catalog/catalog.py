"""Catalog of the semiclassical families of class 0, 1 and 2.

The fixtures live in ``families.json``. Canonical families carry a weight
template (a, b, z as expressions in named parameters); subcases point to a
parent canonical family through special values and are built from a base
family by a transform recipe. The printed ξ-polynomials are stored as
expressions in ``t`` and the moments ``nu0``..``nu5``.
"""
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Optional

import sympy
from sympy.parsing.sympy_parser import parse_expr

from semiclassical.commons.errors import CatalogError, ConstraintViolated, MissingParameter
from semiclassical.core.exact import (
    Poly, elementary_symmetric, integer_value, parse_scalar, to_approx, to_fraction, to_symbolic
)
from semiclassical.core.functional import FunctionalSpec, MomentTable, PearsonPair, class_from_degrees
from semiclassical.core.hyper import DEFAULT_MAX_TERMS, DEFAULT_TOLERANCE
from semiclassical.core.stieltjes import derive_xi, transform_equation
from semiclassical.core.transforms import apply_transform, parse_transform

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
PACKAGED_PATH = os.path.join(os.path.dirname(__file__), 'families.json')

CANONICAL = 'canonical'
SUBCASE = 'subcase'
VARIANT = 'variant'
KINDS = (CANONICAL, SUBCASE, VARIANT)

CANONICAL_COUNT = 15
SUBCASE_COUNT = 42

SYMBOL_NAMES = (
    'a', 'b', 'z', 'a1', 'a2', 'a3', 'b1', 'b2', 'b3', 'N', 'm', 'omega', 'Omega', 'M', 't', 'n',
    'nu0', 'nu1', 'nu2', 'nu3', 'nu4', 'nu5', 'nu0_G',
)
SYMBOLS = {name: sympy.Symbol(name) for name in SYMBOL_NAMES}
T = SYMBOLS['t']
NU = tuple(SYMBOLS['nu{}'.format(k)] for k in range(6))


def _elementary(k):
    def e(*values):
        return elementary_symmetric(list(values), k)
    return e


LOCALS = dict(
    SYMBOLS, e1=_elementary(1), e2=_elementary(2), e3=_elementary(3), rf=sympy.rf, ff=sympy.ff, exp=sympy.exp
)


def parse_field(text, where):
    """Parse one fixture expression.

    :raises CatalogError: if the expression is malformed
    """
    try:
        return sympy.sympify(parse_expr(str(text), local_dict=dict(LOCALS)))
    except (SyntaxError, TypeError, ValueError, AttributeError, sympy.SympifyError) as e:
        raise CatalogError('cannot parse {!r} in {}: {}'.format(text, where, e), where=where)


def to_scalar(expr):
    """Turn a closed sympy value into an exact or approximate scalar.

    :raises MissingParameter: if named parameters are left in the expression
    """
    expr = sympy.sympify(expr)
    if expr.free_symbols:
        names = sorted(str(s) for s in expr.free_symbols)
        raise MissingParameter('unassigned parameters {}'.format(', '.join(names)), names=names)
    if expr.is_Integer:
        return int(expr)
    if expr.is_Rational:
        return to_fraction(expr)
    if not expr.is_finite:
        raise ConstraintViolated('value {} is not finite'.format(expr))
    return to_approx(expr)


def _as_symbolic(value):
    if isinstance(value, sympy.Basic):
        return value
    return to_symbolic(parse_scalar(value))


## constraints

@dataclass(frozen=True)
class Constraint:
    text: str
    op: str
    lhs: object
    rhs: object = None

    SUFFIXES = ((' not in N0', 'not_in_N0'), (' in N0', 'in_N0'), (' in N', 'in_N'))

    @classmethod
    def parse(cls, text, where):
        for suffix, op in cls.SUFFIXES:
            if text.endswith(suffix):
                return cls(text, op, parse_field(text[:-len(suffix)], where))
        if '!=' in text:
            lhs, rhs = text.split('!=', 1)
            return cls(text, '!=', parse_field(lhs, where), parse_field(rhs, where))
        raise CatalogError('unknown constraint {!r} in {}'.format(text, where), where=where)

    def holds(self, values):
        lhs = self.lhs.subs(values)
        if self.op == '!=':
            diff = sympy.simplify(lhs - self.rhs.subs(values))
            return not diff.is_finite or diff != 0
        k = integer_value(sympy.simplify(lhs))
        if self.op == 'not_in_N0':
            return k is None or k < 0
        if self.op == 'in_N0':
            return k is not None and k >= 0
        return k is not None and k >= 1


## entries

def _symbol(name, where):
    if name not in SYMBOLS:
        raise CatalogError('unknown parameter {!r} in {}'.format(name, where), where=where)
    return SYMBOLS[name]


def _parse_values(data, where):
    return {_symbol(name, where): parse_field(expr, where) for name, expr in (data or {}).items()}


def _parse_template(data, where):
    if data is None:
        return None
    return {
        'a': tuple(parse_field(v, where) for v in data.get('a', [])),
        'b': tuple(parse_field(v, where) for v in data.get('b', [])),
        'z': parse_field(data.get('z', 1), where),
    }


def _parse_recipe(data, where):
    if data is None:
        return None
    steps = []
    for step in data.get('transforms', []):
        args = {name: parse_field(expr, where) for name, expr in step.items() if name != 'kind'}
        steps.append({'kind': step['kind'], 'args': args})
    return {
        'base': data['base'],
        'base_values': _parse_values(data.get('base_values'), where),
        'transforms': tuple(steps),
    }


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    kind: str
    name: str
    anchor: str
    class_s: int
    params: tuple
    template: Optional[dict] = None
    parent: Optional[str] = None
    recipe: Optional[dict] = None
    special_values: dict = field(default_factory=dict)
    options: tuple = ()
    constraints: tuple = ()
    defaults: dict = field(default_factory=dict)
    xi: object = None
    xi_transformed: object = None
    moments: object = None
    erratum: Optional[str] = None
    expected_failure: Optional[str] = None
    compose: bool = False
    raw: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def symmetrized(self):
        return bool(self.recipe) and any(step['kind'] == 'symmetrize' for step in self.recipe['transforms'])

    @property
    def basis_shift(self):
        """Symbolic basis shift: m for symmetrized entries."""
        return SYMBOLS['m'] if self.symmetrized else 0

    @classmethod
    def from_dict(cls, data):
        """Parse a fixture entry.

        :raises CatalogError: if a required field is missing or malformed
        """
        entry_id = data.get('id', '<unnamed>')
        where = 'entry {!r}'.format(entry_id)
        try:
            kind = data['kind']
            if kind not in KINDS:
                raise CatalogError('unknown entry kind {!r} in {}'.format(kind, where), where=where)
            class_s = int(data['class'])
            if class_s not in (0, 1, 2):
                raise CatalogError('class {} out of range in {}'.format(class_s, where), where=where)
            options = tuple(
                (parse_field(o['omega'], where), parse_field(o['Omega'], where)) for o in data.get('options', [])
            )
            entry = cls(
                id=data['id'],
                kind=kind,
                name=data['name'],
                anchor=data['anchor'],
                class_s=class_s,
                params=tuple(data['params']),
                template=_parse_template(data.get('template'), where),
                parent=data.get('parent'),
                recipe=_parse_recipe(data.get('recipe'), where),
                special_values=_parse_values(data.get('special_values'), where),
                options=options,
                constraints=tuple(Constraint.parse(c, where) for c in data.get('constraints', [])),
                defaults=_parse_values(data.get('defaults'), where),
                xi=parse_field(data['xi'], where) if 'xi' in data else None,
                xi_transformed=parse_field(data['xi_transformed'], where) if 'xi_transformed' in data else None,
                moments=parse_field(data['moments'], where) if 'moments' in data else None,
                erratum=data.get('erratum'),
                expected_failure=data.get('expected_failure'),
                compose=bool(data.get('compose', False)),
                raw=dict(data),
            )
        except KeyError as e:
            raise CatalogError('{} lacks field {}'.format(where, e), where=where)
        for name in entry.params:
            _symbol(name, where)
        if entry.template is None and entry.recipe is None:
            raise CatalogError('{} has neither a template nor a recipe'.format(where), where=where)
        if entry.kind == SUBCASE and entry.parent is None:
            raise CatalogError('{} is a subcase without parent'.format(where), where=where)
        return entry

    def to_dict(self):
        return dict(self.raw)


## catalog

class Catalog:

    def __init__(self, entries, defaults=None, path=None):
        self.entries = list(entries)
        self.defaults = dict(defaults or {})
        self.path = path
        self._by_id = {}
        for entry in self.entries:
            if entry.id in self._by_id:
                raise CatalogError('duplicate entry id {!r}'.format(entry.id), id=entry.id)
            self._by_id[entry.id] = entry
        for entry in self.entries:
            for ref in (entry.parent, entry.recipe and entry.recipe['base']):
                if ref and ref not in self._by_id:
                    raise CatalogError('entry {!r} refers to unknown entry {!r}'.format(entry.id, ref), id=entry.id)

    @classmethod
    def load(cls, path=None):
        """Load a fixture file, the packaged one when ``path`` is None.

        :raises CatalogError: if the file is unreadable or of another format version
        """
        path = path or PACKAGED_PATH
        try:
            with open(path) as f:
                data = json.load(f)
        except (OSError, ValueError) as e:
            raise CatalogError('cannot read catalog {}: {}'.format(path, e), path=path)
        version = data.get('version')
        if version != FORMAT_VERSION:
            raise CatalogError(
                'catalog {} has format version {}, expected {}'.format(path, version, FORMAT_VERSION), path=path)
        entries = [CatalogEntry.from_dict(item) for item in data.get('entries', [])]
        defaults = _parse_values(data.get('defaults'), 'defaults')
        logger.debug('loaded %s catalog entries from %s', len(entries), path)
        return cls(entries, defaults, path)

    def get(self, entry_id):
        try:
            return self._by_id[entry_id]
        except KeyError:
            raise CatalogError('unknown catalog entry {!r}'.format(entry_id), id=entry_id)

    def list(self, kind=None):
        return [entry for entry in self.entries if kind is None or entry.kind == kind]

    def counts(self):
        return {kind: len(self.list(kind)) for kind in KINDS}

    def is_complete(self):
        counts = self.counts()
        return counts[CANONICAL] == CANONICAL_COUNT and counts[SUBCASE] == SUBCASE_COUNT

    def show(self, entry_id):
        entry = self.get(entry_id)
        body = entry.to_dict()
        body['defaults'] = {
            name: str(self._default(entry, SYMBOLS[name])) for name in entry.params
            if self._default(entry, SYMBOLS[name]) is not None
        }
        expected = self.expected_xi(entry)
        if expected is not None:
            body['xi_coefficients'] = xi_coefficients(expected)
        return body

    ## parameters

    def _default(self, entry, symbol):
        if symbol in entry.defaults:
            return entry.defaults[symbol]
        return self.defaults.get(symbol)

    def resolve(self, entry, assignments=None, fill_defaults=True):
        """Collect parameter values for an entry as sympy numbers.

        ``assignments`` maps parameter names to scalars; ``option`` selects one of
        the ω/Ω options of a reduced-Uvarov entry by index, an ``omega`` value
        selects it by location.

        :rtype: dict
        :raises MissingParameter: if a parameter has neither a value nor a default
        :raises ConstraintViolated: on unknown parameters or an unmatched option
        """
        assignments = dict(assignments or {})
        extra = {'option'} | ({'omega'} if entry.options else set())
        unknown = sorted(set(assignments) - set(entry.params) - extra)
        if unknown:
            raise ConstraintViolated(
                'unknown parameters {} for {}'.format(', '.join(unknown), entry.id), names=unknown)
        values = {}
        for name in entry.params:
            symbol = SYMBOLS[name]
            if name in assignments:
                values[symbol] = _as_symbolic(assignments[name])
            elif fill_defaults and self._default(entry, symbol) is not None:
                values[symbol] = self._default(entry, symbol)
            else:
                raise MissingParameter('parameter {!r} is required for {}'.format(name, entry.id), name=name)
        if entry.options:
            omega, Omega = entry.options[self._option_index(entry, values, assignments)]
            values[SYMBOLS['omega']] = sympy.simplify(omega.subs(values))
            values[SYMBOLS['Omega']] = sympy.simplify(Omega.subs(values))
        return values

    def _option_index(self, entry, values, assignments):
        if 'omega' in assignments:
            target = _as_symbolic(assignments['omega'])
            for index, (omega, _) in enumerate(entry.options):
                if sympy.simplify(omega.subs(values) - target) == 0:
                    return index
            raise ConstraintViolated(
                'omega = {} is none of the mass locations of {}'.format(target, entry.id), omega=target)
        index = integer_value(parse_scalar(assignments.get('option', 0)))
        if index is None or not 0 <= index < len(entry.options):
            raise ConstraintViolated(
                'option must be an index below {} for {}'.format(len(entry.options), entry.id))
        return index

    def check_constraints(self, entry, values):
        """:raises ConstraintViolated: naming the first violated condition"""
        for constraint in entry.constraints:
            if not constraint.holds(values):
                raise ConstraintViolated(
                    '{}: constraint {} is violated'.format(entry.id, constraint.text),
                    entry=entry.id, constraint=constraint.text)

    ## instantiation

    def instantiate(self, entry_id, assignments=None, tol=DEFAULT_TOLERANCE, max_terms=DEFAULT_MAX_TERMS,
                    fill_defaults=True):
        """Concrete functional of a catalog entry.

        :param entry_id: Catalog id, e.g. ``"2,1/geronimus"``
        :type entry_id: str
        :param assignments: Parameter values by name; missing ones take the defaults
        :type assignments: dict
        :rtype: semiclassical.core.functional.FunctionalSpec
        :raises ConstraintViolated: with the violated condition named
        """
        entry = self.get(entry_id)
        values = self.resolve(entry, assignments, fill_defaults)
        return self.build(entry, values, tol, max_terms)

    def build(self, entry, values, tol=DEFAULT_TOLERANCE, max_terms=DEFAULT_MAX_TERMS):
        self.check_constraints(entry, values)
        if entry.erratum:
            logger.warning('%s: corrected fixture in use (%s)', entry.id, entry.erratum)
        if entry.recipe is None:
            template = entry.template
            return FunctionalSpec(
                tuple(to_scalar(v.subs(values)) for v in template['a']),
                tuple(to_scalar(v.subs(values)) for v in template['b']),
                to_scalar(template['z'].subs(values)),
            )
        base, base_values, transforms = self.recipe(entry, values)
        spec = self.build(base, base_values, tol, max_terms)
        for transform in transforms:
            spec = apply_transform(spec, transform, tol, max_terms)
        return spec

    def recipe(self, entry, values):
        """Base entry, its parameter values and the transforms of a recipe.

        :rtype: tuple(CatalogEntry, dict, list)
        """
        if entry.recipe is None:
            raise CatalogError('entry {!r} has no recipe'.format(entry.id), id=entry.id)
        base = self.get(entry.recipe['base'])
        base_values = {}
        for name in base.params:
            symbol = SYMBOLS[name]
            if symbol in values:
                base_values[symbol] = values[symbol]
            elif self._default(base, symbol) is not None:
                base_values[symbol] = self._default(base, symbol)
        for symbol, expr in entry.recipe['base_values'].items():
            base_values[symbol] = sympy.simplify(expr.subs(values))
        transforms = []
        for step in entry.recipe['transforms']:
            data = {'kind': step['kind']}
            data.update({name: to_scalar(expr.subs(values)) for name, expr in step['args'].items()})
            transforms.append(parse_transform(data))
        return base, base_values, transforms

    ## templates and symbolic ξ

    def template(self, entry):
        """(a, b, z) of an entry as expressions, special values applied for subcases."""
        if entry.template is not None:
            template = entry.template
            return list(template['a']), list(template['b']), template['z']
        if entry.parent is None:
            raise CatalogError('entry {!r} has no weight template'.format(entry.id), id=entry.id)
        a, b, z = self.template(self.get(entry.parent))

        def substitute(expr):
            return sympy.sympify(expr).subs(entry.special_values, simultaneous=True)
        return [substitute(v) for v in a], [substitute(v) for v in b], substitute(z)

    def template_pair(self, entry, values=None):
        """Pearson pair read off the template, without cancelling parameters.

        With ``values`` the pair is numeric; symmetrized entries are shifted by m.

        :rtype: semiclassical.core.functional.PearsonPair
        """
        a, b, z = self.template(entry)
        shift = entry.basis_shift
        if values is not None:
            a = [to_scalar(v.subs(values)) for v in a]
            b = [to_scalar(v.subs(values)) for v in b]
            z = to_scalar(sympy.sympify(z).subs(values))
            shift = to_scalar(sympy.sympify(shift).subs(values))
        x = Poly.identity()
        eta = Poly.from_factors(a, lead=z)
        sigma = x * Poly.from_factors(b)
        eta, sigma = eta.shift(shift), sigma.shift(shift)
        return PearsonPair(eta, sigma, class_from_degrees(eta, sigma), None)

    def expected_xi(self, entry):
        """Printed ξ of an entry; subcases inherit the parent's at their special values."""
        if entry.xi is not None:
            return entry.xi
        if entry.parent is not None and not entry.symmetrized:
            parent_xi = self.expected_xi(self.get(entry.parent))
            if parent_xi is not None:
                return parent_xi.subs(entry.special_values, simultaneous=True)
        return None

    def derived_xi(self, entry):
        """ξ derived from the symbolic template pair, as an expression in t and ν."""
        pair = self.template_pair(entry)
        eq = derive_xi(pair, MomentTable(NU, entry.basis_shift))
        return forms_to_expr(eq.xi_symbolic)

    def xi_identity(self, entry):
        """Whether the derived ξ equals the printed one identically in all parameters.

        :return: None when the entry prints no ξ
        """
        expected = self.expected_xi(entry)
        if expected is None:
            return None
        return sympy.expand(self.derived_xi(entry) - expected) == 0

    def transformed_xi_identity(self, entry):
        """Compare the closed-form transformed ξ against the printed one.

        :return: None when the entry prints no transformed ξ
        """
        if entry.xi_transformed is None:
            return None
        base = self.get(entry.recipe['base'])
        eq = derive_xi(self.template_pair(base), MomentTable(NU, base.basis_shift))
        params = {
            'omega': SYMBOLS['omega'], 'M': SYMBOLS['M'], 'nu0': NU[0], 'nu0_G': SYMBOLS['nu0_G'],
            'm': SYMBOLS['m'],
        }
        for step in entry.recipe['transforms']:
            eq = transform_equation(eq, step['kind'], params)
        return sympy.expand(forms_to_expr(eq.xi_symbolic) - entry.xi_transformed) == 0

    def numeric_xi(self, entry, values, moments):
        """Printed ξ at numeric parameters and moments, as a Poly in t.

        :return: None when the entry prints no ξ
        """
        expected = self.expected_xi(entry)
        if expected is None:
            return None
        substitutions = dict(values)
        substitutions.update({NU[n]: to_symbolic(moments[n]) for n in range(min(len(NU), len(moments)))})
        expr = sympy.expand(expected.subs(substitutions))
        coeffs = sympy.Poly(expr, T).all_coeffs()
        return Poly([to_scalar(c) for c in reversed(coeffs)], 't')


def forms_to_expr(forms):
    """Σ_k t^k (Σ_n c_kn ν_n + const) as a sympy expression."""
    total = sympy.Integer(0)
    for k, form in enumerate(forms):
        coeff = to_symbolic(form.const)
        for n, c in enumerate(form.coeffs):
            if n >= len(NU):
                raise CatalogError('linear form uses nu_{} beyond the catalog symbols'.format(n))
            coeff = coeff + to_symbolic(c) * NU[n]
        total = total + coeff * T ** k
    return sympy.expand(total)


def xi_coefficients(expr):
    """Coefficient form of a ξ expression: per power of t, the ν-coefficients and the constant."""
    rows = []
    for (k,), coeff in sorted(sympy.Poly(sympy.expand(expr), T).terms()):
        coeff = sympy.expand(coeff)
        used = [n for n in range(len(NU)) if coeff.has(NU[n])]
        nu_coeffs = [coeff.coeff(NU[n]) for n in range(max(used) + 1 if used else 0)]
        const = sympy.expand(coeff - sum(c * NU[n] for n, c in enumerate(nu_coeffs)))
        rows.append({'t_power': k, 'nu_coeffs': [str(c) for c in nu_coeffs], 'const': str(const)})
    return rows
