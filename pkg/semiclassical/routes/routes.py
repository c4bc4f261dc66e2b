from flask import request

from semiclassical.commons.errors import InputError, SemiclassicalError
from semiclassical.commons.helper import create_flask_response


def _json_body():
    body = request.get_json(silent=True)
    if not isinstance(body, dict):
        raise InputError('request body must be a JSON object')
    return body


def semiclassical_routes(app, functional_service, catalog_service):
    """
    Creates the semiclassical webinterface endpoints.

    :param app: The flask app to attach to
    :param functional_service: Serves the computations on a functional
    :type functional_service: FunctionalService
    :param catalog_service: Serves the catalog of families
    :type catalog_service: CatalogService
    """

    @app.errorhandler(SemiclassicalError)
    def handle_error(e):
        return create_flask_response(e.to_dict(), e.http_status)


    @app.route('/classify', methods=['POST'])
    def classify():
        return create_flask_response(functional_service.classify(_json_body()))


    @app.route('/moments', methods=['POST'])
    def get_moments():
        return create_flask_response(functional_service.moments(_json_body()))


    @app.route('/stieltjes-xi', methods=['POST'])
    def stieltjes_xi():
        return create_flask_response(functional_service.stieltjes_xi(_json_body()))


    @app.route('/verify', methods=['POST'])
    def verify():
        return create_flask_response(functional_service.verify(_json_body()))


    @app.route('/transform', methods=['POST'])
    def transform():
        return create_flask_response(functional_service.transform(_json_body()))


    @app.route('/recurrence', methods=['POST'])
    def recurrence():
        return create_flask_response(functional_service.recurrence(_json_body()))


    ## catalog

    @app.route('/catalog', methods=['GET'])
    def list_catalog():
        return create_flask_response(catalog_service.list(request.args.get('kind')))


    @app.route('/catalog/suite', methods=['GET'])
    def run_suite():
        ids = request.args.getlist('id') or None
        report = catalog_service.suite(ids, request.args.get('tol'))
        return create_flask_response(report.to_dict())


    @app.route('/catalog/<path:entry_id>', methods=['GET'])
    def show_entry(entry_id):
        return create_flask_response(catalog_service.show(entry_id))
