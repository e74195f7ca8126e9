"""Exception hierarchy shared across the package.

Each class carries the process exit code the CLI maps it to.
"""


class PuwaveletError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ConfigurationError(PuwaveletError):
    """Invalid parameters, grid geometry, or Nyquist violations."""

    exit_code = 2


class DataError(PuwaveletError):
    """Non-finite inputs, empty payloads, or corrupt files."""

    exit_code = 3


class InvariantFailure(PuwaveletError):
    """A self-test invariant did not hold."""

    exit_code = 4
