"""Exception hierarchy and the process exit codes the CLI maps them to."""

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SERVICE = 3
EXIT_INTERNAL = 4


class SentinelError(Exception):
    """Base class for all toolkit errors."""

    exit_code = EXIT_INTERNAL


class ValidationError(SentinelError):
    """Bad input: malformed files, impossible arguments, broken invariants."""

    exit_code = EXIT_VALIDATION


class ArgumentError(ValidationError):
    """An operation was called with arguments that violate its contract."""


class SessionError(ValidationError):
    """An annotation session could not be resumed (corpus mismatch, corrupt file)."""


class DegenerateTableError(ArgumentError):
    """A contingency table has a zero expected cell; the test is undefined."""


class ZeroVarianceError(ArgumentError):
    """A t statistic is undefined because both samples have zero variance."""


class ModelError(SentinelError):
    """Model misuse: predicting with an empty model, mismatched feature width."""

    exit_code = EXIT_VALIDATION


class CredentialError(SentinelError):
    """Missing or rejected API credentials."""

    exit_code = EXIT_SERVICE


class ServiceUnavailableError(SentinelError):
    """A reputation service kept failing after every configured retry."""

    exit_code = EXIT_SERVICE

    def __init__(self, message: str, url: str | None = None):
        super().__init__(message)
        self.url = url


class MocknetStartupError(SentinelError):
    """The mock reputation server could not bind its port."""

    exit_code = EXIT_SERVICE
