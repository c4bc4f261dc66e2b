import json
import sys

from flask import jsonify

from semiclassical.commons.errors import InputError


def create_flask_response(data, status=200):
    """JSON response with the given status code.

    :param data: JSON-ready body
    :type data: dict or list
    :param status: HTTP status code
    :type status: int
    """
    response = jsonify(data)
    response.status_code = status
    return response


def load_json_input(path):
    """Read a JSON document from a file, or from stdin when path is '-'.

    :raises InputError: if the document cannot be read or parsed
    """
    try:
        if path == '-':
            return json.load(sys.stdin)
        with open(path) as f:
            return json.load(f)
    except OSError as e:
        raise InputError('cannot read input {}: {}'.format(path, e), path=path)
    except ValueError as e:
        raise InputError('input {} is not valid JSON: {}'.format(path, e), path=path)


def dump_json(data):
    return json.dumps(data, indent=2, ensure_ascii=False)


def _flatten(data, prefix=''):
    if isinstance(data, dict) and not set(data) == {'value', 'digits'}:
        for key, value in data.items():
            yield from _flatten(value, '{}.{}'.format(prefix, key) if prefix else str(key))
    elif isinstance(data, list) and any(isinstance(v, (dict, list)) for v in data):
        for index, value in enumerate(data):
            yield from _flatten(value, '{}[{}]'.format(prefix, index))
    else:
        if isinstance(data, dict):
            data = data['value']
        elif isinstance(data, list):
            data = ', '.join(str(v) for v in data)
        yield prefix, data


def to_table(data):
    """Aligned key/value rows, nested keys joined with dots."""
    rows = list(_flatten(data))
    if not rows:
        return ''
    width = max(len(key) for key, _ in rows)
    return '\n'.join('{}  {}'.format(key.ljust(width), value) for key, value in rows)


def render(data, output='json'):
    if output == 'table':
        return to_table(data)
    return dump_json(data)
