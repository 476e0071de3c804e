"""Exception hierarchy.  Every error carries a short machine-readable ``code``."""


class LabError(Exception):
    code = "error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details

    def as_dict(self) -> dict:
        return {"code": self.code, "message": str(self), **{k: repr(v) for k, v in self.details.items()}}


class DomainError(LabError, ValueError):
    code = "domain"


class CellUndecidable(LabError):
    code = "cell-undecidable"


class ReconstructionDegenerate(LabError):
    code = "reconstruction-degenerate"


class NotCommuting(LabError):
    code = "not-commuting"


class SpectrumDegenerate(LabError):
    code = "spectrum-degenerate"


class PoleError(LabError, ValueError):
    code = "pole"


class NoConvergence(LabError):
    code = "no-convergence"


class TransformedUnsolved(LabError):
    code = "transformed-unsolved"


class PathStuck(LabError):
    code = "path-stuck"


class SpectralMismatch(LabError):
    code = "spectral-mismatch"


class LimitUnresolved(LabError):
    code = "limit-unresolved"


class CollisionError(LabError):
    code = "collision"


class DegenerateCriticalPoint(LabError):
    """The subspace exists but its root polynomials have roots on marked points or on each other."""

    code = "bethe-degenerate"
