"""Exception hierarchy. Every error raised by the package derives from TSGraphError."""


class TSGraphError(Exception):
    pass


class ParseError(TSGraphError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnsupportedDatasetError(TSGraphError, ValueError):
    pass


class DataError(TSGraphError, ValueError):
    pass


class SplitError(TSGraphError, ValueError):
    pass


class IncompatibleLengthsError(TSGraphError, ValueError):
    pass


class EmptySeriesError(TSGraphError, ValueError):
    pass


class WindowTooLargeError(TSGraphError, ValueError):
    pass


class PairwiseDistanceError(TSGraphError):
    """A single pair failed while filling a distance matrix."""

    def __init__(self, i, j, cause):
        super().__init__(f"distance between series {i} and {j} failed: {cause}")
        self.pair = (i, j)
        self.cause = cause


class CacheFormatError(TSGraphError, ValueError):
    pass


class ParameterError(TSGraphError, ValueError):
    pass


class DegenerateDatasetError(TSGraphError, ValueError):
    pass


class IsolatedNodeError(TSGraphError, ValueError):
    pass


class NumericalError(TSGraphError, ArithmeticError):
    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations


class TrainingError(NumericalError):
    pass


class MetricError(TSGraphError, ValueError):
    pass
