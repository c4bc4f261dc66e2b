import importlib
import sys
from unittest.mock import patch

from pytest import fixture, mark

from semiclassical.commons.conf import Conf
from semiclassical.version import VERSION


@fixture(scope='module')
def client():
    with patch.object(sys, 'argv', ['semiclassical']):
        app_module = importlib.import_module('semiclassical.app')
    app = app_module.create_app(Conf())
    app.config['TESTING'] = True
    return app.test_client()


def test_root(client):
    response = client.get('/')
    assert response.status_code == 200
    assert response.get_json() == {'Hello': 'World'}


def test_version(client):
    assert client.get('/version').get_json() == {'version': VERSION}


def test_classify(client):
    response = client.post('/classify', json={'z': '1/2'})
    assert response.status_code == 200
    assert response.get_json()['class'] == 0


def test_moments(client):
    response = client.post('/moments', json={'spec': {'a': ['-4'], 'z': '-1/2'}, 'K': 1})
    assert response.get_json()['moments']['values'] == ['81/16', '27/4']


def test_stieltjes_xi(client):
    response = client.post('/stieltjes-xi', json={'catalog': '1,0;N', 'params': {'z': '-1/2'}})
    assert response.get_json()['equation']['xi'] == ['243/32']


def test_verify(client):
    assert client.post('/verify', json={'catalog': '0,0'}).get_json()['passed']


def test_transform(client):
    body = {'z': '1/2', 'transform': {'kind': 'symmetrize', 'm': 1}, 'K': 2}
    assert client.post('/transform', json=body).get_json()['moments']['values'] == ['4', '4', '2']


def test_recurrence(client):
    response = client.post('/recurrence', json={'a': ['-4'], 'z': '-1/2', 'K': 3})
    assert response.get_json()['orthogonality']['passed']


def test_catalog_list(client):
    result = client.get('/catalog?kind=variant').get_json()
    assert [entry['id'] for entry in result['entries']] == ['1,0;N', '1,0;N/symmetrized']


def test_catalog_entry_with_slash(client):
    response = client.get('/catalog/1,1/geronimus')
    assert response.status_code == 200
    assert response.get_json()['id'] == '1,1/geronimus'


def test_catalog_suite(client):
    result = client.get('/catalog/suite?id=0,0').get_json()
    assert result['summary'] == {'PASS': 1, 'FAIL': 0, 'XFAIL': 0}


@mark.parametrize('method, url, body, status, error', [
    ('get', '/catalog/nope', None, 400, 'CatalogError'),
    ('post', '/transform', {'z': '1/2', 'transform': {'kind': 'geronimus', 'omega': 2, 'M': 1}}, 400,
     'ConstraintViolated'),
    ('post', '/recurrence', {'scale': 0, 'masses': [{'omega': 0, 'M': 1}], 'K': 2}, 422, 'SingularHankel'),
    ('post', '/classify', [1, 2], 400, 'InputError'),
])
def test_errors(client, method, url, body, status, error):
    response = getattr(client, method)(url, json=body) if body is not None else getattr(client, method)(url)
    assert response.status_code == status
    assert response.get_json()['error'] == error
