"""Exception and warning types raised across the package."""


class ToricError(Exception):
    """Base class for every error raised by this package."""


class ValidationFailure(ToricError):
    """Input data violates a standing assumption; carries the report when available."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class EmptyGeneratorSet(ToricError):
    pass


class NotFiniteIndex(ToricError):
    pass


class DimensionLimitExceeded(ToricError):
    pass


class NotUpwardClosed(ValidationFailure):
    pass


class ExtendedVectorOutsideSupport(ValidationFailure):
    pass


class NonSimplicial(ValidationFailure):
    pass


class NotPureFullDimensional(ToricError):
    pass


class BijectionFailure(ToricError):
    pass


class NonvanishingAboveCap(ToricError):
    pass


class InconsistentOnSharedFace(ToricError):
    pass


class UnboundedPolytope(ToricError):
    pass


class CenterNotCone(ValidationFailure):
    pass


class CenterMeetsExtendedSet(ValidationFailure):
    pass


class OmegaOnWall(ValidationFailure):
    pass


class ChamberChanged(ValidationFailure):
    pass


class NoCommonWall(ToricError):
    pass


class ParseError(ToricError):
    def __init__(self, message, line=None, column=None):
        where = "" if line is None else f" (line {line}, column {column})"
        super().__init__(message + where)
        self.line = line
        self.column = column


class SchemaError(ToricError):
    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class UnknownPreset(ToricError):
    pass


class NonCrepantWall(UserWarning):
    """Emitted when the characters do not sum to zero against the wall normal."""
