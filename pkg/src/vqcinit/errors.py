"""Exception types shared across the package.

Validation problems (bad config keys, malformed files, out-of-range
arguments) raise ``ConfigError`` or plain ``ValueError``; the CLI maps those
to exit code 1. Numerical failures (non-Hermitian expectation residuals,
eigensolver non-convergence, oracle disagreement) raise ``NumericalError``,
which the CLI maps to exit code 2.
"""


class ConfigError(ValueError):
    """A config file or experiment description failed validation."""


class NumericalError(RuntimeError):
    """A numerical routine produced an untrustworthy result."""
