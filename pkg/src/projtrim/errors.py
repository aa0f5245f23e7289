"""Exception types carrying machine-readable context."""

from __future__ import annotations


class ProjTrimError(Exception):
    """Base error with a stable ``code`` and a ``context`` dict."""

    code = "error"

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.message = message
        self.context = context

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "context": self.context}


class EmptyRegionError(ProjTrimError, ValueError):
    """The requested depth region (or trimmed set) contains no points."""

    code = "empty_region"


class GeneralPositionError(ProjTrimError, ValueError):
    """Data are not in general position."""

    code = "general_position"


class UndefinedInfluenceError(ProjTrimError, ValueError):
    """Influence function requested on its exclusion set."""

    code = "if_undefined"


class InputError(ProjTrimError, ValueError):
    """Malformed input data or configuration."""

    code = "invalid_input"
