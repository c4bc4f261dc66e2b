import logging
from argparse import ArgumentParser

from flask import Flask, jsonify

from semiclassical.commons.conf import Conf
from semiclassical.commons.helper import create_flask_response
from semiclassical.routes.routes import semiclassical_routes
from semiclassical.service.catalog_service import CatalogService
from semiclassical.service.functional_service import FunctionalService
from semiclassical.version import VERSION


DESCRIPTION = 'semiclassical webinterface'


def create_app(conf):
    """Flask app serving the computations and the catalog.

    :param conf: Configuration to load values from
    :type conf: semiclassical.commons.conf.Conf
    """
    app = Flask('semiclassical')
    catalog = CatalogService(conf)
    functional = FunctionalService(conf, catalog)

    @app.route('/', methods=['GET'])
    def get_root():
        return jsonify({'Hello': 'World'})


    @app.route('/version', methods=['GET'])
    def get_version():
        return create_flask_response({'version': VERSION})

    semiclassical_routes(app, functional, catalog)
    return app


parser = ArgumentParser(description=DESCRIPTION)
parser.add_argument(
    '-c', '--conf-file', action='store', type=str, metavar='CONF_FILE',
    help='CONF_FILE (yaml) as local path.'
)
args, _ = parser.parse_known_args()

conf = Conf(args.conf_file)
logging.basicConfig(level=(conf.d.get('logging') or {}).get('level', 'INFO'))
app = create_app(conf)
application = app
