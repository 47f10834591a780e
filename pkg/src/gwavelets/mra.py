"""Scaling-sequence validation, transition coefficients and Gram oracles."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .digits import digit_set
from .errors import EmptySequence, InconsistentRatio, ModelMismatch, ZeroGamma
from .fourier import EPS, FourierExpansion, inner_product
from .jsonio import complex_parts
from .reports import FAIL, PASS, Condition, ConditionReport


@dataclass
class ScalingSequence:
    """Fourier-side description of ``phi_0, ..., phi_J``."""

    model: object
    phis: list

    def __post_init__(self):
        if not self.phis:
            raise EmptySequence("a scaling sequence needs at least phi_0")
        for phi in self.phis:
            if phi.model is not self.model and phi.model != self.model:
                raise ModelMismatch("all scaling functions must share the model")

    @property
    def J(self):
        return len(self.phis) - 1

    def __getitem__(self, j):
        return self.phis[j]

    def to_json(self):
        return {"model": self.model.to_json(),
                "levels": [phi.to_json()["coeffs"] for phi in self.phis]}

    @classmethod
    def from_json(cls, obj, model=None):
        from .groups import model_from_json
        model = model or model_from_json(obj["model"])
        phis = [FourierExpansion.from_json({"coeffs": level}, model) for level in obj["levels"]]
        return cls(model, phis)


@dataclass
class RatioTable:
    """Per-digit transition coefficients at one level."""

    level: int
    digits: tuple
    values: list

    def __getitem__(self, i):
        return self.values[i]

    def to_json(self):
        return {"level": self.level,
                "values": {str(i): complex_parts(v) for i, v in enumerate(self.values)}}


class MuTable(RatioTable):
    """``mu^j_eta`` with ``phi_{j-1}^ = mu phi_j^`` on each coset."""


class GammaTable(RatioTable):
    """``gamma^j_eta`` with ``phi_{j+1}^(Â chi) = gamma phi_j^(chi)`` on each coset."""


@dataclass
class ValidationReport(ConditionReport):
    mu_tables: dict = field(default_factory=dict)
    gamma_tables: dict = field(default_factory=dict)

    def to_json(self):
        out = super().to_json()
        out["mu"] = {str(j): t.to_json() for j, t in self.mu_tables.items()}
        out["gamma"] = {str(j): t.to_json() for j, t in self.gamma_tables.items()}
        return out


def close(x, y, eps=EPS):
    """Relative comparison on the larger modulus, absolute near zero."""
    scale = max(abs(x), abs(y))
    return scale <= eps or abs(x - y) <= eps * scale


def _group_by_digit(model, points, j):
    ds = digit_set(model, j)
    groups = {}
    for chi in points:
        groups.setdefault(ds.index_of_key(model.coset_key(chi, j)), []).append(chi)
    return ds, groups


def _coset_ratio(pairs, eps):
    """Find ``r`` with ``num = r * den`` for all pairs, or report the first misfit.

    Returns ``(ratio, bad_index)``; ``ratio`` is ``None`` when the
    denominator vanishes on the coset while a numerator does not.
    """
    dens = [abs(b) for _, b in pairs]
    if not dens or max(dens) <= eps:
        for i, (a, _) in enumerate(pairs):
            if abs(a) > eps:
                return None, i
        return None, None
    star = int(np.argmax(dens))
    ratio = pairs[star][0] / pairs[star][1]
    for i, (a, b) in enumerate(pairs):
        if not close(a, ratio * b, eps):
            return ratio, i
    return ratio, None


def _mu_level(seq, j, eps):
    model = seq.model
    prev, cur = seq[j - 1], seq[j]
    points = set(prev.support()) | set(cur.support())
    ds, groups = _group_by_digit(model, points, j)
    values = [0j] * len(ds)
    failure = None
    for idx in range(len(ds)):
        chis = sorted(groups.get(idx, []), key=model.sort_key)
        ratio, bad = _coset_ratio([(prev[c], cur[c]) for c in chis], eps)
        if bad is not None:
            failure = failure or {"j": j, "eta": model.encode_dual(ds[idx]),
                                  "chi": model.encode_dual(chis[bad])}
        values[idx] = 0j if ratio is None else complex(ratio)
    return MuTable(j, ds.digits, values), failure


def _gamma_level(seq, j, eps):
    model = seq.model
    cur, nxt = seq[j], seq[j + 1]
    points = set(cur.support())
    for chi in nxt.support():
        xi = model.ahat_preimage(chi, 1)
        if xi is not None:
            points.add(xi)
    ds, groups = _group_by_digit(model, points, j)
    values = [0j] * len(ds)
    failure = None
    zero = None
    for idx in range(len(ds)):
        chis = sorted(groups.get(idx, []), key=model.sort_key)
        pairs = [(nxt[model.ahat(c)], cur[c]) for c in chis]
        ratio, bad = _coset_ratio(pairs, eps)
        if bad is not None:
            failure = failure or {"j": j, "eta": model.encode_dual(ds[idx]),
                                  "chi": model.encode_dual(chis[bad])}
        if ratio is None:
            ratio = 1.0  # both sides vanish on the coset: any non-zero gamma works
        elif abs(ratio) <= eps:
            zero = zero or {"j": j, "eta": model.encode_dual(ds[idx]), "chi": None}
        values[idx] = complex(ratio)
    return GammaTable(j, ds.digits, values), failure, zero


def mu_table(seq, j, eps=EPS):
    """Per-digit ``mu^j_eta`` with ``phi_{j-1}^ = mu^j_eta phi_j^`` on each coset.

    Raises
    ------
    InconsistentRatio
        If no single ratio fits some coset.
    """
    if not 1 <= j <= seq.J:
        raise ValueError(f"mu needs 1 <= j <= {seq.J}")
    table, failure = _mu_level(seq, j, eps)
    if failure:
        raise InconsistentRatio(f"no single mu on coset {failure}")
    return table


def gamma_table(seq, j, eps=EPS):
    """Per-digit ``gamma^j_eta``; every entry must be non-zero."""
    if not 0 <= j < seq.J:
        raise ValueError(f"gamma needs 0 <= j < {seq.J}")
    table, failure, zero = _gamma_level(seq, j, eps)
    if failure:
        raise InconsistentRatio(f"no single gamma on coset {failure}")
    if zero:
        raise ZeroGamma(f"gamma vanishes on coset {zero}")
    return table


def check_scaling_conditions(seq, probe=(), eps=EPS):
    """Check the five scaling-sequence conditions up to level ``J``.

    Conditions (1), (2), (4) and (5) involve finitely many cosets at each
    level and are decided exactly (to tolerance ``eps``). Condition (3)
    quantifies over all of the dual group; here it is verified on the union
    of supports together with ``probe``, and the report says so.

    Every condition is evaluated even after a failure, each with the first
    counterexample found in canonical order.
    """
    model = seq.model
    J = seq.J
    conds = {}

    bad = next((c for c in seq[0].support() if c != model.dual_zero()), None)
    conds["1"] = Condition(PASS) if bad is None else Condition(
        FAIL, {"j": 0, "eta": None, "chi": model.encode_dual(bad)})

    witness = None
    for j in range(J + 1):
        hit = {model.coset_key(c, j) for c, v in seq[j].items() if abs(v) > eps}
        ds = digit_set(model, j)
        if len(hit) < len(ds):
            missing = next(d for d in ds if model.coset_key(d, j) not in hit)
            witness = {"j": j, "eta": model.encode_dual(missing), "chi": None}
            break
    conds["2"] = Condition(PASS if witness is None else FAIL, witness)

    universe = set(probe)
    for phi in seq.phis:
        universe.update(phi.support())
    witness = None
    for chi in sorted(universe, key=model.sort_key):
        if not any(abs(seq[j][chi]) > eps for j in range(J + 1)):
            witness = {"j": None, "eta": None, "chi": model.encode_dual(chi)}
            break
    conds["3"] = Condition(PASS if witness is None else FAIL, witness,
                           f"verified on {len(universe)} probe points up to level {J}")

    mus, gammas = {}, {}
    witness = None
    for j in range(1, J + 1):
        table, failure = _mu_level(seq, j, eps)
        mus[j] = table
        witness = witness or failure
    conds["4"] = Condition(PASS if witness is None else FAIL, witness)

    witness = None
    for j in range(J):
        table, failure, zero = _gamma_level(seq, j, eps)
        gammas[j] = table
        witness = witness or failure or zero
    conds["5"] = Condition(PASS if witness is None else FAIL, witness)

    return ValidationReport(conds, {"levels": J, "probe_size": len(universe)}, mus, gammas)


def mu_relation_defects(table, m):
    """``|sum_pi |mu^j_{eta + Â^{j-1} pi}|^2 - m|`` for each level ``j - 1`` digit.

    Level-``j`` digits are laid out in blocks of ``m`` sharing the same
    level-``(j - 1)`` digit, so each block is one sum.
    """
    vals = np.abs(np.asarray(table.values)) ** 2
    return np.abs(vals.reshape(-1, m).sum(axis=1) - m)


def coset_norms(f, j):
    """``||omega^j_eta f||^2`` for each digit ``eta`` of ``D(A^j)``, in digit order."""
    model = f.model
    ds = digit_set(model, j)
    out = np.zeros(len(ds))
    for chi, c in f.items():
        out[ds.index_of_key(model.coset_key(chi, j))] += abs(c) ** 2
    return out


def check_orthonormal(phi, j, eps=EPS):
    """Whether the ``ker A^j`` translates of ``phi`` are orthonormal.

    Uses the coset criterion ``||omega^j_eta phi||^2 = m^-j`` for every
    digit ``eta``, which needs no translates at all.
    """
    target = phi.model.m ** (-j)
    return bool(np.all(np.abs(coset_norms(phi, j) - target) <= eps))


def check_linear_independence(f, j, eps=EPS):
    """Whether every coset restriction ``omega^j_eta f`` is non-zero."""
    model = f.model
    hit = {model.coset_key(chi, j) for chi, c in f.items() if abs(c) > eps}
    return len(hit) == model.m ** j


def gram_matrix(functions):
    """Matrix of pairwise inner products ``G[i, k] = <f_i, f_k>``."""
    functions = list(functions)
    if not functions:
        return np.zeros((0, 0), dtype=complex)
    model = functions[0].model
    for f in functions[1:]:
        if f.model is not model and f.model != model:
            raise ModelMismatch("Gram matrix of functions on different models")
    keys = sorted({chi for f in functions for chi in f}, key=model.sort_key)
    col = {chi: i for i, chi in enumerate(keys)}
    F = np.zeros((len(functions), len(keys)), dtype=complex)
    for i, f in enumerate(functions):
        for chi, c in f.items():
            F[i, col[chi]] = c
    G = F @ F.conj().T
    return (G + G.conj().T) / 2


def gram_is_identity(G, eps=EPS):
    G = np.asarray(G)
    return bool(np.max(np.abs(G - np.eye(len(G))), initial=0.0) <= eps)


def translates(f, j):
    """``[T_a f for a in ker A^j]`` in kernel enumeration order."""
    from .fourier import translate
    return [translate(f, a) for a in f.model.kernel_elements(j)]


__all__ = [
    "ScalingSequence", "MuTable", "GammaTable", "ValidationReport", "close",
    "check_scaling_conditions", "mu_table", "gamma_table", "mu_relation_defects",
    "coset_norms", "check_orthonormal", "check_linear_independence",
    "gram_matrix", "gram_is_identity", "translates",
]
