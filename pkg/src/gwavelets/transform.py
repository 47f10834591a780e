"""Wavelet analysis and synthesis against a :class:`WaveletSystem`."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import IndexMismatch, ModelMismatch, NotInVJ
from .fourier import EPS, FourierExpansion, inner_product
from .groups.base import unit
from .jsonio import complex_parts


@dataclass
class CoefficientTree:
    """Output of :func:`analyze`.

    Attributes
    ----------
    c0 : complex
        ``<f, phi_0>``.
    details : dict
        ``details[j]`` is an ``(m - 1, m^j)`` array whose entry
        ``[nu - 1, i]`` is ``<f, T_a psi^nu_j>`` for the ``i``-th element
        ``a`` of ``ker A^j``.
    """

    model: object
    c0: complex
    details: dict = field(default_factory=dict)

    @property
    def J(self):
        return len(self.details)

    def energy(self):
        return abs(self.c0) ** 2 + sum(float(np.sum(np.abs(d) ** 2)) for d in self.details.values())

    def to_json(self):
        model = self.model
        rows = []
        for j in sorted(self.details):
            kernel = model.kernel_elements(j)
            for nu_idx, row in enumerate(self.details[j]):
                for a, v in zip(kernel, row):
                    rows.append(dict(j=j, nu=nu_idx + 1, a=model.encode_point(a), **complex_parts(v)))
        return {"model": model.to_json(), "levels": self.J, "c0": complex_parts(self.c0), "details": rows}

    @classmethod
    def from_json(cls, obj, model=None):
        from .groups import model_from_json
        model = model or model_from_json(obj["model"])
        m = model.m
        J = int(obj.get("levels", 1 + max((int(r["j"]) for r in obj["details"]), default=-1)))
        details = {j: np.zeros((m - 1, m ** j), dtype=complex) for j in range(J)}
        index = {j: {a: i for i, a in enumerate(model.kernel_elements(j))} for j in range(J)}
        for r in obj["details"]:
            j, nu = int(r["j"]), int(r["nu"])
            if j not in details or not 1 <= nu < m:
                raise IndexMismatch(f"detail index (j={j}, nu={nu}) out of range")
            a = model.decode_point(r["a"])
            if a not in index[j]:
                raise IndexMismatch(f"{r['a']} is not in ker A^{j}")
            details[j][nu - 1, index[j][a]] = complex(r["re"], r["im"])
        c0 = complex(obj["c0"]["re"], obj["c0"]["im"])
        return cls(model, c0, details)


def _phase_block(system, j, psi_index):
    """Support keys of ``psi`` and the matrix ``E[a, chi] = chi(a)``."""
    cache = system._phase_cache
    key = (j, psi_index)
    if key not in cache:
        model = system.model
        psi = system.psis[j][psi_index]
        chis = psi.support()
        kernel = model.kernel_elements(j)
        E = np.array([[unit(model.pair(chi, a)) for chi in chis] for a in kernel], dtype=complex)
        vals = np.array([psi[chi] for chi in chis], dtype=complex)
        cache[key] = (chis, E, vals)
    return cache[key]


def _threads():
    try:
        n = int(os.environ.get("GWAVELETS_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def project(f, system, j):
    """Orthogonal projection of ``f`` onto ``V_j``.

    ``V_j`` is spanned by the coset restrictions ``omega^j_eta phi_j``,
    which have disjoint supports, so the Gram system is diagonal and the
    projection is computed coset by coset. For MSF systems this is the
    restriction of ``f^`` to ``K_j``.
    """
    model = f.model
    phi = system.seq[j]
    num, den = {}, {}
    for chi, c in phi.items():
        key = model.coset_key(chi, j)
        den[key] = den.get(key, 0.0) + abs(c) ** 2
        num.setdefault(key, 0j)
    for chi, c in f.items():
        key = model.coset_key(chi, j)
        if key in num and chi in phi:
            num[key] += c * np.conj(phi[chi])
    return FourierExpansion(model, {chi: num[model.coset_key(chi, j)] / den[model.coset_key(chi, j)] * c
                                    for chi, c in phi.items()})


def analyze(f, system, J=None, eps=EPS):
    """Wavelet coefficients of ``f`` in ``V_J``.

    Raises
    ------
    NotInVJ
        If ``||f - P_J f|| > eps * max(1, ||f||)``; the residual is attached.
    """
    if f.model is not system.model and f.model != system.model:
        raise ModelMismatch("signal and wavelet system use different models")
    J = system.J if J is None else J
    if not 0 <= J <= system.J:
        raise IndexMismatch(f"J must lie in [0, {system.J}]")
    residual = (f - project(f, system, J)).norm()
    if residual > eps * max(1.0, f.norm()):
        raise NotInVJ(f"signal is not in V_{J}: residual {residual:.3e}", residual)
    m = system.model.m
    c0 = inner_product(f, system.seq[0])

    def level(j):
        out = np.zeros((m - 1, m ** j), dtype=complex)
        for nu_idx in range(m - 1):
            chis, E, vals = _phase_block(system, j, nu_idx)
            fv = np.array([f[chi] for chi in chis], dtype=complex)
            out[nu_idx] = E @ (fv * np.conj(vals))
        return j, out

    threads = min(_threads(), max(J, 1))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            details = dict(pool.map(level, range(J)))
    else:
        details = dict(map(level, range(J)))
    return CoefficientTree(system.model, complex(c0), details)


def synthesize(tree, system):
    """Rebuild ``c0 phi_0 + sum d^nu_{j,a} T_a psi^nu_j`` as an expansion."""
    model = system.model
    if tree.model is not model and tree.model != model:
        raise IndexMismatch("tree and wavelet system use different models")
    if tree.J > system.J:
        raise IndexMismatch(f"tree has {tree.J} levels, system only {system.J}")
    m = model.m
    acc = {chi: tree.c0 * c for chi, c in system.seq[0].items()}
    for j, d in tree.details.items():
        if d.shape != (m - 1, m ** j):
            raise IndexMismatch(f"detail block at level {j} has shape {d.shape}")
        for nu_idx in range(m - 1):
            chis, E, vals = _phase_block(system, j, nu_idx)
            contrib = vals * (np.conj(E).T @ d[nu_idx])
            for chi, v in zip(chis, contrib):
                acc[chi] = acc.get(chi, 0j) + v
    return FourierExpansion(model, acc)
