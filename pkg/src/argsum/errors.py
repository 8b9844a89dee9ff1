"""Exception hierarchy shared across the toolkit."""


class ArgsumError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(ArgsumError):
    """Input violates a documented precondition or invariant."""


class DataFormatError(ArgsumError):
    """A data file could not be parsed; message names the offending line."""


class ScorerTransportError(ArgsumError):
    """A scorer backend could not be reached. Retryable."""


class ScoreContractError(ArgsumError):
    """A backend returned a score outside [0, 1]. Never clamped silently."""


class CacheMissError(ArgsumError):
    """A cache-only backend was asked for a pair it has never seen."""


class LlmTransportError(ArgsumError):
    """A chat backend failed after exhausting retries."""


class ParseFailure(ArgsumError):
    """A model transcript did not contain the expected structured payload."""


class UndefinedCorrelationError(ArgsumError):
    """Pearson correlation is undefined (zero variance or too few points)."""
