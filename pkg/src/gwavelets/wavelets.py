"""Wavelets from an orthonormal scaling sequence via unitary completion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .digits import digit_set
from .errors import NotOrthonormal, NotUnitRow, RowNormMismatch
from .fourier import EPS, FourierExpansion
from .jsonio import complex_parts
from .mra import check_orthonormal, gram_matrix, mu_table, translates
from .reports import FAIL, PASS, Report

BASIS_TOL = 1e-12


@dataclass
class UnitaryCompletion:
    """An ``m x m`` unitary matrix ``B`` whose first row was prescribed."""

    matrix: np.ndarray
    provenance: str

    @property
    def m(self):
        return self.matrix.shape[0]

    def to_json(self):
        return {"provenance": self.provenance,
                "matrix": [[complex_parts(v) for v in row] for row in self.matrix]}


def _fix_phase(row, tol=BASIS_TOL):
    """Rotate ``row`` so its first non-negligible entry is real and positive."""
    for v in row:
        if abs(v) > tol:
            return row * (abs(v) / v)
    return row


def unitary_completion(row, order=None):
    """Extend a unit row vector to a unitary matrix with that first row.

    A row within ``1e-12`` of ``c * e_k`` is completed by the remaining
    standard basis vectors, taken in ``order`` (default ascending). Any
    other row is completed by a complex Householder reflector: with
    ``v = conj(row)`` and ``s = -exp(i arg v_0)``, the reflector ``H``
    swapping ``v`` and ``s e_0`` gives ``Q = H diag(s, 1, ..., 1)`` with
    first column ``v``, and ``B = Q^*``. Every completed row is then
    rotated so its first non-negligible entry is real and positive.

    Examples
    --------
    >>> B = unitary_completion([2 ** -0.5, 2 ** -0.5]).matrix
    >>> bool(np.allclose(B[1], [2 ** -0.5, -2 ** -0.5]))
    True
    """
    r = np.asarray(row, dtype=complex).ravel()
    m = r.size
    if m == 0 or abs(np.linalg.norm(r) - 1.0) > 1e-9:
        raise NotUnitRow(f"row norm {np.linalg.norm(r) if m else 0.0} is not 1")
    k = int(np.argmax(np.abs(r)))
    basis = np.zeros(m, dtype=complex)
    basis[k] = r[k] / abs(r[k])
    if np.max(np.abs(r - basis)) <= BASIS_TOL:
        rest = [i for i in (order if order is not None else range(m)) if i != k]
        if sorted(rest + [k]) != list(range(m)):
            raise ValueError("order must be a permutation of range(m)")
        B = np.zeros((m, m), dtype=complex)
        B[0] = r
        for nu, i in enumerate(rest, start=1):
            B[nu, i] = 1.0
        provenance = "identity" if np.array_equal(B, np.eye(m)) else "permutation"
        return UnitaryCompletion(B, provenance)
    return UnitaryCompletion(_householder(r), "householder")


def _householder(r):
    """Householder completion of the unit row ``r`` (never degenerate).

    With ``v = conj(r)`` and ``s = -exp(i arg v_0)`` the vector
    ``u = s e_0 - v`` has ``|u_0| = 1 + |v_0| > 0``.
    """
    m = r.size
    v = np.conj(r)
    s = -np.exp(1j * np.angle(v[0])) if abs(v[0]) > 0 else -1.0 + 0j
    x = np.zeros(m, dtype=complex)
    x[0] = s
    u = x - v
    H = np.eye(m, dtype=complex) - 2.0 * np.outer(u, np.conj(u)) / np.vdot(u, u).real
    D = np.eye(m, dtype=complex)
    D[0, 0] = s
    B = (H @ D).conj().T
    B[0] = r
    for nu in range(1, m):
        B[nu] = _fix_phase(B[nu])
    return B


@dataclass
class WaveletSystem:
    """Scaling sequence plus the wavelets ``psi^nu_j`` for ``j < J``.

    ``psis[j]`` lists ``psi^1_j .. psi^{m-1}_j``; ``completions[j]`` holds
    the per-digit unitary matrices used at level ``j``.
    """

    model: object
    seq: object
    psis: dict
    completions: dict = field(default_factory=dict)
    _phase_cache: dict = field(default_factory=dict, repr=False)

    @property
    def J(self):
        return self.seq.J

    def to_json(self):
        return {
            "model": self.model.to_json(),
            "scaling": self.seq.to_json()["levels"],
            "levels": [
                {"j": j,
                 "psis": [p.to_json()["coeffs"] for p in self.psis[j]],
                 "completions": [c.to_json() for c in self.completions.get(j, [])]}
                for j in sorted(self.psis)
            ],
        }

    @classmethod
    def from_json(cls, obj, model=None):
        from .groups import model_from_json
        from .mra import ScalingSequence
        model = model or model_from_json(obj["model"])
        phis = [FourierExpansion.from_json({"coeffs": lv}, model) for lv in obj["scaling"]]
        psis, comps = {}, {}
        for level in obj["levels"]:
            j = int(level["j"])
            psis[j] = [FourierExpansion.from_json({"coeffs": p}, model) for p in level["psis"]]
            comps[j] = [
                UnitaryCompletion(
                    np.array([[complex(e["re"], e["im"]) for e in row] for row in c["matrix"]]),
                    c["provenance"])
                for c in level.get("completions", [])
            ]
        return cls(model, ScalingSequence(model, phis), psis, comps)


def _child_order(seq, j, r, m):
    """Children ``k`` of level-``j`` digit ``r`` ordered by their supports.

    Child ``k`` is the level-``(j+1)`` coset with digit index ``r m + k``;
    children are sorted by the canonically least point of
    ``supp phi_{j+1}`` they contain, empty children last.
    """
    model = seq.model
    best = {}
    for chi in seq[j + 1].support():
        idx = digit_set(model, j + 1).index_of_key(model.coset_key(chi, j + 1))
        if idx // m == r:
            k = idx % m
            key = model.sort_key(chi)
            if k not in best or key < best[k]:
                best[k] = key
    present = sorted(best, key=best.get)
    return present + [k for k in range(m) if k not in best]


def build_wavelets(seq, j, completion="auto", eps=EPS):
    """Wavelets ``psi^1_j .. psi^{m-1}_j`` from an orthonormal scaling sequence.

    For each digit ``eta`` of ``D(A^j)`` the row
    ``b_{0k} = mu^{j+1}_{eta + Â^j pi_k} / sqrt(m)`` is completed to a
    unitary ``B``, and ``psi^nu_j^(chi) = sqrt(m) b_{nu,k} phi_{j+1}^(chi)``
    for ``chi`` in the child coset ``k`` of ``eta``.

    Parameters
    ----------
    seq : ScalingSequence
    j : int
        Level, ``0 <= j < J``.
    completion : {"auto", "householder"}
        ``"auto"`` uses permutation completions whenever a row is a
        standard basis vector (always the case for MSF input);
        ``"householder"`` reflects every row.

    Returns
    -------
    psis : list of FourierExpansion
    completions : list of UnitaryCompletion
        One per digit of ``D(A^j)``.
    """
    model = seq.model
    m = model.m
    if not 0 <= j < seq.J:
        raise ValueError(f"wavelets need 0 <= j < {seq.J}")
    for level in (j, j + 1):
        if not check_orthonormal(seq[level], level, eps):
            raise NotOrthonormal(f"phi_{level} translates are not orthonormal")
    mus = mu_table(seq, j + 1, eps)
    n_digits = m ** j
    alphas = np.zeros((m, n_digits * m), dtype=complex)
    completions = []
    for r in range(n_digits):
        row = np.array([mus[r * m + k] for k in range(m)]) / math.sqrt(m)
        if abs(np.sum(np.abs(row) ** 2) - 1.0) > eps:
            raise RowNormMismatch(f"row {r} at level {j} has squared norm {np.sum(np.abs(row) ** 2)}")
        row = row / np.linalg.norm(row)
        if completion == "householder":
            comp = UnitaryCompletion(_householder(row), "householder")
        else:
            comp = unitary_completion(row, _child_order(seq, j, r, m))
        completions.append(comp)
        alphas[:, r * m:(r + 1) * m] = math.sqrt(m) * comp.matrix
    ds = digit_set(model, j + 1)
    psis = []
    for nu in range(1, m):
        coeffs = {chi: alphas[nu, ds.index_of_key(model.coset_key(chi, j + 1))] * c
                  for chi, c in seq[j + 1].items()}
        psis.append(FourierExpansion(model, coeffs))
    return psis, completions


def build_wavelet_system(seq, completion="auto", eps=EPS):
    """Wavelets at every level ``j < J`` of the scaling sequence."""
    psis, comps = {}, {}
    for j in range(seq.J):
        psis[j], comps[j] = build_wavelets(seq, j, completion, eps)
    return WaveletSystem(seq.model, seq, psis, comps)


def verify_decomposition(seq, psis, j, eps=EPS):
    """Certify ``V_{j+1} = V_j ⊕ W^(1)_j ⊕ ... ⊕ W^(m-1)_j`` on Gram data.

    The ``m^{j+1}`` functions ``T_a phi_j`` and ``T_a psi^nu_j`` must have
    identity Gram matrix, live inside ``supp phi_{j+1}^`` and number
    ``dim V_{j+1}``.
    """
    model = seq.model
    funcs = translates(seq[j], j)
    for psi in psis:
        funcs.extend(translates(psi, j))
    G = gram_matrix(funcs)
    err = float(np.max(np.abs(G - np.eye(len(G))), initial=0.0))
    universe = set(seq[j + 1].support())
    outside = [f for f in [seq[j]] + list(psis) if not set(f.support()) <= universe]
    count_ok = len(funcs) == model.m ** (j + 1)
    checks = {"gram_identity": err <= eps, "support_inside": not outside, "dimension": count_ok}
    verdict = PASS if all(checks.values()) else FAIL
    return Report(verdict,
                  {"functions": len(funcs), "dimension": model.m ** (j + 1), "max_gram_error": err},
                  {"checks": checks, "level": j})
