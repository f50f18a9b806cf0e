"""Exception types shared across the package."""


class SteamrecError(Exception):
    """Base class for all package-specific errors."""


class ParseError(SteamrecError):
    """A raw input line could not be parsed at all.

    Carries the 1-based line number of the offending line.
    """

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class FieldError(ParseError):
    """A parsed record is missing a required field or holds an invalid value."""


class ConfigError(SteamrecError):
    """A configuration value violates its contract (rank, split fraction, paths...)."""


class SolveError(SteamrecError):
    """A least-squares half-step hit a singular normal matrix."""


class EvaluationError(SteamrecError):
    """An evaluation could not produce a number (e.g. every test triple was cold)."""


class PipelineError(SteamrecError):
    """A pipeline stage failed; carries the stage name for error reporting."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {cause}")
