from fractions import Fraction

from pytest import fixture, raises

from semiclassical.commons.errors import CatalogError
from semiclassical.service.catalog_service import CatalogService


class MockConf:
    d = {
        'precision': {'digits': 40},
    }


@fixture
def catalog_service():
    conf = MockConf()
    return CatalogService(conf)


def test_list(catalog_service):
    result = catalog_service.list()
    assert result['complete']
    assert result['counts'] == {'canonical': 15, 'subcase': 42, 'variant': 2}
    assert len(result['entries']) == 59
    assert result['entries'][0] == {
        'id': '0,0', 'kind': 'canonical', 'name': 'Charlier polynomials',
        'anchor': '(0,0): Charlier polynomials', 'class': 0,
    }


def test_list_by_kind(catalog_service):
    entries = catalog_service.list('variant')['entries']
    assert [entry['id'] for entry in entries] == ['1,0;N', '1,0;N/symmetrized']


def test_show(catalog_service):
    body = catalog_service.show('1,1/geronimus')
    assert body['recipe']['base'] == '0,0'
    assert body['defaults'] == {'z': '1/2', 'omega': '-3/2', 'M': '1'}


def test_show_unknown(catalog_service):
    with raises(CatalogError):
        catalog_service.show('nope')


def test_instantiate(catalog_service):
    spec = catalog_service.instantiate('1,1', {'z': '1/4'})
    assert spec.a == (Fraction(1, 3),)
    assert spec.b == (Fraction(1, 2),)
    assert spec.z == Fraction(1, 4)


def test_suite(catalog_service):
    report = catalog_service.suite(['0,0', '1,0;N/symmetrized'])
    assert report.passed
    assert report.summary == {'PASS': 1, 'FAIL': 0, 'XFAIL': 1}


def test_missing_catalog_file(tmp_path):
    class Conf:
        d = {'catalog': {'path': str(tmp_path / 'missing.json')}}

    with raises(CatalogError):
        catalog_service = CatalogService(Conf())
        catalog_service.list()
