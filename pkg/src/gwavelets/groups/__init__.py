"""Concrete (G, A) models: tori with integer matrices and Cantor groups."""

from __future__ import annotations

from ..errors import InvalidModel
from .base import DEFAULT_CAP, GroupModel, RationalPhase, unit
from .cantor import BandSpec, CantorModel, CantorPoint
from .checks import check_standing_assumptions, check_torus_admissible
from .torus import TorusModel

__all__ = [
    "DEFAULT_CAP", "GroupModel", "RationalPhase", "unit",
    "BandSpec", "CantorModel", "CantorPoint", "TorusModel",
    "torus_model", "cantor_model", "kernel_elements", "pair", "ahat_apply",
    "ahat_preimage", "check_torus_admissible", "check_standing_assumptions",
    "model_from_json",
]


def torus_model(matrix, cap=DEFAULT_CAP):
    """Model of ``T^d`` with the dilation ``x -> Ax``.

    Examples
    --------
    >>> torus_model([[2]]).m
    2
    >>> torus_model([[1, -1], [1, 1]]).m
    2
    """
    return TorusModel(matrix, cap=cap)


def cantor_model(N, band, cap=DEFAULT_CAP):
    """Model of ``(Z_N)^N`` with a band-matrix dilation.

    Examples
    --------
    >>> cantor_model(2, BandSpec.shift()).m
    2
    >>> cantor_model(2, BandSpec.constant(2, [1])).m
    4
    """
    return CantorModel(N, band, cap=cap)


def kernel_elements(model, j):
    """All ``m^j`` elements of ``ker A^j``."""
    return model.kernel_elements(j)


def pair(model, chi, a):
    """Exact phase ``theta`` with ``chi(a) = exp(2 pi i theta)``."""
    return model.pair(chi, a)


def ahat_apply(model, chi):
    return model.ahat(chi)


def ahat_preimage(model, chi, j=1):
    if j < 1:
        raise ValueError("power must be at least 1")
    return model.ahat_preimage(chi, j)


def model_from_json(obj, cap=DEFAULT_CAP):
    """Rebuild a model from its JSON description."""
    try:
        kind = obj["kind"]
        if kind == "torus":
            return TorusModel(obj["matrix"], cap=cap)
        if kind == "cantor":
            coeffs = obj.get("coeffs") or {}
            k = int(obj["bandwidth"])
            band = BandSpec(
                k,
                tuple(tuple(int(v) for v in r) for r in coeffs.get("preperiod", [])),
                tuple(tuple(int(v) for v in r) for r in coeffs.get("period", [[0] * (k - 1)])),
                obj.get("truncation"),
            )
            return CantorModel(int(obj["N"]), band, cap=cap)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidModel(f"malformed model description: {exc}") from None
    raise InvalidModel(f"unknown model kind {obj.get('kind')!r}")
