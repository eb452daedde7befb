"""Exception hierarchy shared by every pipeline stage.

Exit-code mapping (see cli): config -> 2, data -> 3, numeric/training -> 4.
"""


class SumrulesError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(SumrulesError):
    """Bad run configuration (flags, config file, missing prerequisites)."""


class DataError(SumrulesError):
    """Malformed or invalid input data."""


class ParseError(DataError):
    """Document file could not be parsed; message names the offending path."""


class ValidationError(DataError):
    """Structurally parsed input violates an invariant."""


class LabelingError(DataError):
    """A document cannot be labeled (e.g. missing abstract)."""


class TopicError(DataError):
    """User-interest topic construction produced no usable words."""


class TrainingError(SumrulesError):
    """A learner cannot be trained on the given data."""


class NumericError(TrainingError):
    """Numerical failure during training (e.g. singular scatter matrix)."""


class ClassificationError(SumrulesError):
    """A model was applied to a vector missing a referenced feature."""
