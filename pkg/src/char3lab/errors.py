"""Exception hierarchy shared by the whole package."""


class Char3Error(Exception):
    """Base class for all package errors."""


class ReducibleModulus(Char3Error):
    pass


class DivisionByZero(Char3Error):
    pass


class NotASquare(Char3Error):
    pass


class NoEmbedding(Char3Error):
    pass


class PrecisionExhausted(Char3Error):
    pass


class LimitDoesNotExist(Char3Error):
    pass


class ShapeMismatch(Char3Error):
    pass


class IndexOutOfRange(Char3Error):
    pass


class CoincidentNodes(Char3Error):
    pass


class CoincidentValues(CoincidentNodes):
    pass


class TooLarge(Char3Error):
    pass


class NotSkew(Char3Error):
    pass


class PoleAtPoint(Char3Error):
    pass


class SingularJacobian(Char3Error):
    pass


class SingularSystem(Char3Error):
    pass


class RegionViolation(Char3Error):
    pass


class NotFound(Char3Error):
    pass


class PreconditionFailed(Char3Error):
    """An identity's side conditions could not be satisfied by construction
    at the requested dims/field; reported as a precondition_unmet verdict."""
