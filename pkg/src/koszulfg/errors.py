"""Exception hierarchy shared by every module."""


class KoszulFgError(Exception):
    """Base class; ``stage`` names the pipeline stage when known."""

    stage = None


class StructuralError(KoszulFgError):
    """Input violates a structural invariant (composability, homogeneity, ...)."""


class ParameterError(KoszulFgError, ValueError):
    """A bound or parameter is out of range for the requested computation."""


class InconclusiveError(KoszulFgError):
    """The computation window is too small to decide; ``suggestion`` may hold a larger bound."""

    def __init__(self, message, suggestion=None):
        super().__init__(message)
        self.suggestion = suggestion


class IncompletePresentationError(KoszulFgError):
    def __init__(self, message, degree):
        super().__init__(message)
        self.degree = degree


class ParseError(KoszulFgError, ValueError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position
