"""Error hierarchy shared by all modules.

Exit-code mapping used by the CLI:
    2 -> ConfigError (bad config / validation)
    3 -> NumericError (domain / numeric failure)
    4 -> BudgetError (resource budget exceeded)
"""


class SinterBenchError(Exception):
    exit_code = 1


class ConfigError(SinterBenchError):
    """Malformed or inconsistent configuration."""

    exit_code = 2


class NumericError(SinterBenchError):
    """Numeric or domain failure (log of non-positive value, non-finite input, ...)."""

    exit_code = 3


class BudgetError(SinterBenchError):
    """A configured resource budget (memory, expansion size) would be exceeded."""

    exit_code = 4
