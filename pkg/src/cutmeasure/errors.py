"""Exception hierarchy.

Every error carries a short machine-readable ``code``; parser errors also
carry a source offset.
"""


class MeasureError(Exception):
    code = "error"

    def __init__(self, message: str = "", *, pos: int | None = None):
        super().__init__(message)
        self.message = message
        self.pos = pos

    def to_dict(self) -> dict:
        d = {"error": self.code, "message": self.message}
        if self.pos is not None:
            d["pos"] = self.pos
        return d


class NotFinite(MeasureError):
    code = "not_finite"


class NotMonomial(MeasureError):
    code = "not_monomial"


class OutOfDomain(MeasureError):
    code = "out_of_domain"


class OutOfRange(MeasureError):
    code = "out_of_range"


class ClassViolation(MeasureError):
    code = "class_violation"


class NoStdInterior(MeasureError):
    code = "no_std_interior"


class BracketDiverged(MeasureError):
    code = "bracket_diverged"

    def __init__(self, message: str = "", *, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class ToleranceUnreachable(MeasureError):
    code = "tolerance_unreachable"


class UnsupportedImage(MeasureError):
    code = "unsupported_image"


class DslSyntaxError(MeasureError):
    code = "syntax_error"
