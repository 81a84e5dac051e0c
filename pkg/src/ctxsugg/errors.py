"""Exception hierarchy shared by every ctxsugg module."""


class CtxSuggError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CtxSuggError, ValueError):
    """A record could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(CtxSuggError, ValueError):
    """A value lies outside its declared domain (ratings, weights)."""


class DuplicateIdError(CtxSuggError, ValueError):
    """An identifier that must be unique appeared twice."""


class NormalizationEmpty(CtxSuggError, ValueError):
    """A tag normalized down to the empty string."""


class UnknownUserError(CtxSuggError, LookupError):
    """A request references a user with no loaded profile."""

    def __init__(self, user_ids):
        self.user_ids = sorted(set(user_ids))
        super().__init__("unknown user(s): " + ", ".join(self.user_ids))


class EmptyRunError(CtxSuggError, ValueError):
    """An evaluation was asked for a run with no requests."""


class FormatError(CtxSuggError, ValueError):
    """A value cannot be written in the run-file format."""
