class SemiclassicalError(Exception):
    """Base class of every error raised by the semiclassical package.

    :param message: Human readable description
    :type message: str
    :param details: Machine readable context, serialized into the error body
    :type details: dict
    """

    exit_code = 1
    http_status = 422

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    @property
    def kind(self):
        return type(self).__name__

    def to_dict(self):
        body = {'error': self.kind, 'message': self.message}
        if self.details:
            body['details'] = {key: str(value) for key, value in self.details.items()}
        return body


class InputError(SemiclassicalError):
    """The request itself is invalid: bad parameters, violated constraints."""
    exit_code = 2
    http_status = 400


class ComputationError(SemiclassicalError):
    """The request is well formed but the computation cannot be carried out."""
    exit_code = 1
    http_status = 422


## input errors

class ConstraintViolated(InputError):
    pass


class TruncationAtEtaRoot(InputError):
    pass


class MissingParameter(InputError):
    pass


class OutOfSupport(InputError):
    pass


class RegularityViolation(InputError):
    pass


class ConfigError(InputError):
    pass


class CatalogError(InputError):
    pass


## computational errors

class DivergentSeries(ComputationError):
    pass


class PoleInDenominator(ComputationError):
    pass


class PoleAtSupportPoint(ComputationError):
    pass


class NonPolynomialBoundary(ComputationError):
    pass


class DegreeMismatch(ComputationError):
    pass


class SingularHankel(ComputationError):

    def __init__(self, n, message=None):
        super().__init__(message or 'Hankel determinant vanishes at level {}'.format(n), n=n)
        self.n = n


class DegenerateSymmetrization(ComputationError):
    pass


class ConvergenceFailure(ComputationError):
    pass
