"""Error taxonomy: everything user-facing derives from PlotError."""


class PlotError(Exception):
    """Base class for expected failures."""


class SchemaMismatch(PlotError):
    """A CSV or figure spec does not match the documented schema."""


class IoError(PlotError):
    """A referenced file cannot be read or written."""
