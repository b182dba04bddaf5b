class CornellQESError(Exception):
    """Base class for package errors."""


class InvalidParameter(CornellQESError, ValueError):
    pass


class DegenerateScale(CornellQESError, ValueError):
    """gamma^2 <= 0: neither the harmonic term nor the field confines."""


class UnknownPreset(CornellQESError, KeyError):
    pass


class MissingQuarkMass(CornellQESError, ValueError):
    pass


class GridTooCoarse(CornellQESError, RuntimeError):
    pass


class NonConvergent(CornellQESError, RuntimeError):
    pass
