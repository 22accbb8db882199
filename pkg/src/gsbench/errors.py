"""Exception hierarchy shared across the package."""


class BenchmarkError(Exception):
    """Base class for every error this package raises on purpose."""


class UsageError(BenchmarkError):
    """The command line was malformed: unknown flag, missing flag, bad value."""


class PatternError(BenchmarkError):
    """Pattern text or generator parameters were rejected."""


class ConfigError(BenchmarkError):
    """A run configuration or a config file entry was rejected."""


class EngineError(BenchmarkError):
    """Kernel execution violated an internal invariant."""
