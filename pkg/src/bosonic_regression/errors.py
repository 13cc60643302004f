"""Exception hierarchy shared by every module of the package."""


class BosonicRegressionError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDimensionError(BosonicRegressionError, ValueError):
    pass


class ModeIndexError(BosonicRegressionError, IndexError):
    pass


class DimensionMismatchError(BosonicRegressionError, ValueError):
    pass


class NonHermitianError(BosonicRegressionError, ValueError):
    pass


class SchemaError(BosonicRegressionError, ValueError):
    pass


class EmptyDatasetError(BosonicRegressionError, ValueError):
    pass


class IllConditionedError(BosonicRegressionError, ValueError):
    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class ScheduleError(BosonicRegressionError, ValueError):
    pass


class IntegrationUnstableError(BosonicRegressionError, RuntimeError):
    """Norm drift exceeded the accepted bound; ``result`` holds the run."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class CapacityError(BosonicRegressionError, ValueError):
    pass


class TruncationNotConvergedError(BosonicRegressionError, RuntimeError):
    def __init__(self, message, last_delta=None, last_d=None):
        super().__init__(message)
        self.last_delta = last_delta
        self.last_d = last_d


class ConfigError(BosonicRegressionError, ValueError):
    pass
