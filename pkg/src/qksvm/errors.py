"""Exception types shared across the package."""


class QksvmError(Exception):
    """Base class for all package-specific errors."""


class ResourceError(QksvmError):
    """A requested computation exceeds the configured resource guard."""


class ConfigError(QksvmError, ValueError):
    """A spec, kernel, or run configuration is invalid."""


class DataError(QksvmError, ValueError):
    """A dataset file or array is malformed or degenerate."""


class TrainingError(QksvmError, RuntimeError):
    """Training cannot proceed (e.g. single-class labels, no support vectors)."""


class GenerationError(QksvmError, RuntimeError):
    """A synthetic-data generator could not produce the requested sample."""
