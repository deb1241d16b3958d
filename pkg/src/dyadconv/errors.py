"""Exception types shared across the toolkit."""


class DyadconvError(Exception):
    """Base class; the CLI maps these to exit code 1."""


class SchemaError(DyadconvError):
    """A transcript document violates the schema; message names the record."""


class DegenerateDataError(DyadconvError):
    """Constant series, zero variance, zero range, or single-class input."""


class InsufficientDataError(DyadconvError):
    """Too few observations for the requested analysis."""


class RankDeficientError(DyadconvError):
    """Collinear regression design."""


class MissingEventsError(DyadconvError):
    """A required strategy track is absent or an event series is empty."""
