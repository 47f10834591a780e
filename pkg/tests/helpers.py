"""Test fixtures that are not part of the library: a smooth-window
scaling sequence and small utilities shared by several test modules."""

from __future__ import annotations

import math

import numpy as np

from gwavelets.fourier import FourierExpansion
from gwavelets.mra import ScalingSequence, gram_matrix, translates


def window(xi, m):
    """Even window equal to 1 near 0 with ``sum_l window(xi + l)^2 = 1``.

    It is 1 on ``|xi| <= 1/(m+1)``, 0 beyond ``m/(m+1)``, and a quarter
    cosine in between, so ``window(m xi) = H(xi) window(xi)`` for a
    1-periodic ``H``.
    """
    lo, hi = 1 / (m + 1), m / (m + 1)
    x = abs(xi)
    if x <= lo:
        return 1.0
    if x >= hi:
        return 0.0
    return math.cos(math.pi / 2 * (x - lo) / (hi - lo))


def smooth_sequence(model, J):
    """Orthonormal non-MSF scaling sequence for the torus model ``A = [m]``.

    ``phi_j^(k) = m^(-j/2) window(k / m^j)``. Its transition rows are not
    standard basis vectors, so wavelet construction goes through the
    Householder completion.
    """
    (m,), = model.A
    phis = []
    for j in range(J + 1):
        n = m ** j
        coeffs = {}
        for k in range(-n, n + 1):
            v = window(k / n, m)
            if v:
                coeffs[(k,)] = n ** -0.5 * v
        phis.append(FourierExpansion(model, coeffs))
    return ScalingSequence(model, phis)


def combined_basis(system, J=None):
    """``[phi_0] + [T_a psi^nu_j for j < J, nu, a]``."""
    J = system.J if J is None else J
    funcs = [system.seq[0]]
    for j in range(J):
        for psi in system.psis[j]:
            funcs.extend(translates(psi, j))
    return funcs


def max_gram_error(funcs):
    G = gram_matrix(funcs)
    return float(np.max(np.abs(G - np.eye(len(G))), initial=0.0))


def random_subset(model, rng, radius, size):
    box = model.probe_box(radius)
    idx = rng.choice(len(box), size=min(size, len(box)), replace=False)
    return [box[i] for i in sorted(idx)]
