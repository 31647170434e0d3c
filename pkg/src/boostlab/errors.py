"""Exception types shared across boostlab.

The CLI maps each family to its own exit code.
"""


class BoostlabError(Exception):
    """Base class for all boostlab errors."""


class ConfigError(BoostlabError, ValueError):
    """Invalid experiment or model configuration (exit code 1)."""


class DataError(BoostlabError, ValueError):
    """Unreadable, malformed or unusable input data (exit code 2)."""


class TrainingError(BoostlabError, RuntimeError):
    """A model could not be fitted (exit code 3)."""
