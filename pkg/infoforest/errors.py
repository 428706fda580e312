"""
Exception hierarchy and CLI exit codes

Library code raises these; only the CLI maps them onto process exit codes.
"""

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_MALFORMED_DATA = 4
EXIT_NON_FINITE = 5
EXIT_SINGLE_CLASS = 6
EXIT_MODEL_COMPAT = 7


class InfoForestError(Exception):
    """Base class for all toolkit errors"""
    exit_code = 1


class InvalidInputError(InfoForestError, ValueError):
    """Input violates a documented precondition"""
    exit_code = EXIT_MALFORMED_DATA


class DatasetFormatError(InvalidInputError):
    """CSV dataset could not be parsed into features and binary labels"""
    exit_code = EXIT_MALFORMED_DATA


class NonFiniteFeatureError(InvalidInputError):
    exit_code = EXIT_NON_FINITE


class SingleClassError(InvalidInputError):
    """Training data carries only one of the two labels"""
    exit_code = EXIT_SINGLE_CLASS


class DimensionMismatchError(InvalidInputError):
    exit_code = EXIT_MODEL_COMPAT


class ModelFormatError(InfoForestError, ValueError):
    """Serialized model document is malformed"""
    exit_code = EXIT_MODEL_COMPAT


class ModelVersionError(ModelFormatError):
    exit_code = EXIT_MODEL_COMPAT


class ModelDimensionError(ModelFormatError):
    """Model document is internally inconsistent about feature dimension"""
    exit_code = EXIT_MODEL_COMPAT
