"""Exception hierarchy shared by every module."""


class GWaveletsError(Exception):
    """Base class for all library errors."""


class NotEpimorphism(GWaveletsError):
    pass


class InvalidModel(GWaveletsError):
    pass


class Unsupported(GWaveletsError):
    pass


class CapacityExceeded(GWaveletsError):
    pass


class AdmissibilityFailed(GWaveletsError):
    pass


class ModelMismatch(GWaveletsError):
    pass


class EmptySequence(GWaveletsError):
    pass


class InconsistentRatio(GWaveletsError):
    pass


class ZeroGamma(GWaveletsError):
    pass


class NotUnitRow(GWaveletsError):
    pass


class NotOrthonormal(GWaveletsError):
    pass


class RowNormMismatch(GWaveletsError):
    pass


class NotInVJ(GWaveletsError):
    """Raised when a signal has energy outside the target space V_J."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class IndexMismatch(GWaveletsError):
    pass
