"""Exception hierarchy shared by every module."""


class QOscError(Exception):
    pass


class InvalidParameterError(QOscError, ValueError):
    pass


class UnsupportedModeError(QOscError):
    """Operation not defined for the deformation regime of the parameter."""


class NumericError(QOscError, ArithmeticError):
    pass


class ResourceError(QOscError):
    """Requested representation exceeds the configured dimension cap."""


class UnknownSymbolError(QOscError, KeyError):
    pass


class DimensionMismatchError(QOscError, ValueError):
    pass


class NegativePowerError(InvalidParameterError):
    """A negative power of a non-invertible creation operator was requested."""


class IntegrityError(QOscError):
    pass
