"""Exception types shared across laclab."""


class LaclabError(ValueError):
    """Base class for rejected input."""


class UsageError(LaclabError):
    """Malformed request: unknown catalog name, empty input, bad parameters."""


class SchemeError(LaclabError):
    """A cut list that is not a valid lacunary scheme."""


class DataError(LaclabError):
    """Input data that cannot be used: unreadable files, malformed rows."""


class InsufficientData(DataError):
    """The available prefix is too short for the requested computation."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class DomainError(LaclabError):
    """A sequence value falls outside a declared interval."""

    def __init__(self, message, label=None, index=None):
        super().__init__(message)
        self.label = label
        self.index = index
