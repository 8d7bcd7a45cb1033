"""
Exception types shared by the BSDE laboratory modules
"""


class LabError(Exception):
    """Base class for every operational error raised by the laboratory"""


class InvalidArgumentError(LabError, ValueError):
    """An argument is outside its documented domain"""


class ResourceError(LabError, MemoryError):
    """A request would exceed a configured resource budget"""


class IndexOutOfRangeError(LabError, IndexError):
    """A path or time index is outside the bundle"""


class ContractError(LabError, ValueError):
    """A generator lacks the assumption flags an operation requires"""


class UnsupportedDimensionError(LabError, ValueError):
    """The Brownian dimension is not supported by the requested operation"""


class ConfigurationError(LabError, ValueError):
    """An experiment or solver configuration is inconsistent"""


class EvaluationError(LabError, ArithmeticError):
    """A generator evaluation produced a non-finite value"""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class StepFailureError(LabError, RuntimeError):
    """The implicit backward step did not converge"""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class BasisError(LabError, RuntimeError):
    """The regression design matrix is ill-conditioned"""

    def __init__(self, message, step=None, condition_number=None):
        super().__init__(message)
        self.step = step
        self.condition_number = condition_number


class UsageError(LabError, ValueError):
    """Command-line or configuration-file input is malformed"""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class ExpressionSyntaxError(LabError, ValueError):
    """A generator or terminal expression could not be parsed"""

    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column
