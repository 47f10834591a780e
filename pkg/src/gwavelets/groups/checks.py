"""Admissibility and standing-assumption checks."""

from __future__ import annotations

import numpy as np

from .. import intmat
from ..errors import NotEpimorphism
from ..reports import ACCEPT, REJECT, Report
from .cantor import CantorModel, CantorPoint
from .torus import TorusModel


def _poly_str(coeffs):
    terms = []
    for power in range(len(coeffs) - 1, -1, -1):
        c = coeffs[power]
        if c == 0:
            continue
        mono = "" if power == 0 else ("x" if power == 1 else f"x^{power}")
        if mono and abs(c) == 1:
            coef = "-" if c < 0 else "+"
        else:
            coef = f"{c:+d}"
        terms.append(f"{coef}{mono}")
    text = "".join(terms).lstrip("+")
    return text or "0"


def check_torus_admissible(matrix):
    """Decide whether ``x -> Ax`` on ``T^d`` has a dense union of kernels.

    The pair is admissible exactly when no eigenvalue of ``A`` is an
    integral algebraic unit, i.e. when no monic irreducible integer factor
    of the characteristic polynomial has constant term ``+-1``.

    Returns
    -------
    Report
        ``ACCEPT`` or ``REJECT``; the certificate lists the factorization,
        the offending factor on rejection and whether ``A`` is expansive
        (all eigenvalues of modulus greater than one, which is sufficient
        but not necessary for acceptance).

    Raises
    ------
    NotEpimorphism
        If ``det A = 0``.
    Unsupported
        If the characteristic polynomial could not be factored.
    """
    a = intmat.as_matrix(matrix)
    if intmat.det(a) == 0:
        raise NotEpimorphism("det A = 0")
    poly, factors = intmat.factor_charpoly(a)
    units = [f for f in factors if abs(f[0]) == 1]
    eig = np.linalg.eigvals(np.array(a, dtype=float))
    moduli = sorted(float(abs(v)) for v in eig)
    certificate = {
        "charpoly": list(poly),
        "charpoly_text": _poly_str(poly),
        "factors": [list(f) for f in factors],
        "factors_text": [_poly_str(f) for f in factors],
        "expansive": bool(min(moduli) > 1.0),
        "eigenvalue_moduli": moduli,
    }
    if units:
        certificate["offending_factor"] = list(units[0])
        certificate["offending_factor_text"] = _poly_str(units[0])
        return Report(REJECT, certificate,
                      {"reason": "an irreducible factor has constant term +-1, so A has a unit eigenvalue"})
    return Report(ACCEPT, certificate,
                  {"reason": "no irreducible factor of the characteristic polynomial is a unit"})


def _probe_survivors(model, J, radius):
    """Nonzero probe characters annihilating ``ker A^J``.

    Since ``Â^J(Ĝ)`` is contained in every ``Â^j(Ĝ)`` with ``j <= J``, these
    are the probe points of the finite-level intersection of annihilators.
    """
    zero_key = model.coset_key(model.dual_zero(), J)
    probe = model.probe_box(radius)
    survivors = [chi for chi in probe if chi != model.dual_zero() and model.coset_key(chi, J) == zero_key]
    return {
        "probe_level": J,
        "probe_radius": radius,
        "probe_size": len(probe),
        "survivors": [model.encode_dual(c) for c in survivors],
    }


def check_standing_assumptions(model, J=3, probe_radius=2):
    """Check the standing assumptions for a model up to level ``J``.

    For the torus this is :func:`check_torus_admissible`, which is exact.
    For band matrices the certificate is that each unit vector supported at
    a position ``n <= j`` is sent to zero by ``A^j`` for every ``j <= J``;
    these points generate the finitely supported part of ``ker A^j``, whose
    union over ``j`` is dense. Both kinds also record the finite-level
    intersection of annihilators restricted to a probe box.
    """
    if J < 1:
        raise ValueError("probe level must be at least 1")
    evidence = _probe_survivors(model, J, probe_radius)
    if isinstance(model, TorusModel):
        report = check_torus_admissible(model.A)
        report.details.update(evidence)
        return report
    if not isinstance(model, CantorModel):
        raise TypeError("unknown model type")
    checked = []
    failures = []
    for j in range(1, J + 1):
        for n in range(1, j + 1):
            x = model.point([0] * (n - 1) + [1])
            for _ in range(j):
                x = model.apply(x)
            checked.append([j, n])
            if x != CantorPoint():
                failures.append([j, n])
    certificate = {"unit_vectors_annihilated": checked, "levels": J}
    details = dict(evidence)
    if failures:
        details["failures"] = failures
        return Report(REJECT, certificate, details)
    return Report(ACCEPT, certificate, details)
