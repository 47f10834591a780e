"""Minimally supported frequency (MSF) ladders, scaling functions and wavelets."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .digits import digit_set
from .errors import AdmissibilityFailed, CapacityExceeded
from .fourier import FourierExpansion
from .groups import check_standing_assumptions, model_from_json
from .mra import ScalingSequence
from .reports import FAIL, PASS, Condition, ConditionReport

# Largest grade the greedy search will scan before giving up.
MAX_GRADE = 4096


class Enumeration:
    """Lazy enumeration of ``Ĝ \\ Â(Ĝ)``, graded by the model's size grade.

    Within a grade elements come in canonical order, or in an order
    shuffled by ``numpy.random.default_rng(seed)`` when a seed is given.
    The list is memoized so that every level of the greedy construction
    scans the same sequence.
    """

    def __init__(self, model, seed=None, max_grade=MAX_GRADE):
        self.model = model
        self.seed = seed
        self.max_grade = max_grade
        self._rng = None if seed is None else np.random.default_rng(seed)
        self._items = []
        self._grade = 0

    @property
    def kind(self):
        return "canonical" if self.seed is None else "seeded"

    def _extend(self):
        self._grade += 1
        if self._grade > self.max_grade:
            raise CapacityExceeded("greedy search ran past the maximum grade")
        batch = [chi for chi in self.model.grade_elements(self._grade)
                 if not self.model.in_image(chi, 1)]
        if self._rng is not None:
            batch = [batch[i] for i in self._rng.permutation(len(batch))]
        self._items.extend(batch)

    def __iter__(self):
        i = 0
        while True:
            while i >= len(self._items):
                self._extend()
            yield self._items[i]
            i += 1


@dataclass
class MsfLadder:
    """Nested frequency sets ``K_0 ⊂ K_1 ⊂ ... ⊂ K_J``.

    ``audit`` records, in order, every element adjoined by the greedy step
    together with the level it was adjoined at.
    """

    model: object
    levels: list
    enumeration: dict = field(default_factory=lambda: {"kind": "canonical", "seed": None})
    audit: list = field(default_factory=list)

    @property
    def J(self):
        return len(self.levels) - 1

    def K(self, j):
        return self.levels[j]

    def to_json(self):
        enc = self.model.encode_dual
        return {
            "model": self.model.to_json(),
            "levels": [[enc(c) for c in K] for K in self.levels],
            "enumeration": dict(self.enumeration),
            "audit": [{"level": lvl, "chi": enc(c)} for lvl, c in self.audit],
        }

    @classmethod
    def from_json(cls, obj, model=None):
        model = model or model_from_json(obj["model"])
        dec = model.decode_dual
        return cls(
            model,
            [[dec(c) for c in K] for K in obj["levels"]],
            dict(obj.get("enumeration") or {"kind": "canonical", "seed": None}),
            [(int(a["level"]), dec(a["chi"])) for a in obj.get("audit", [])],
        )


@dataclass
class WaveletPartition:
    """``K_{j+1}`` split into ``K^(0)_j = K_j`` and ``K^(1)_j, ..., K^(m-1)_j``."""

    level: int
    parts: list

    def __getitem__(self, nu):
        return self.parts[nu]


def build_msf_ladder(model, J, seed=None, check=True):
    """Greedy construction of an MSF ladder up to level ``J``.

    Level ``j + 1`` starts from ``K_j ∪ Â(K_j)`` and then scans the fixed
    enumeration of ``Ĝ \\ Â(Ĝ)`` once, adjoining each element whose coset
    modulo ``Â^{j+1}(Ĝ)`` is still uncovered, until ``m^{j+1}`` cosets are
    hit.

    Parameters
    ----------
    model : GroupModel
    J : int
        Number of levels to build.
    seed : int, optional
        Shuffle the enumeration within grades.
    check : bool
        Refuse models that fail the standing-assumption check.

    Raises
    ------
    AdmissibilityFailed
        If ``check`` is set and the model is rejected.
    CapacityExceeded
        If ``m^J`` exceeds the model's enumeration cap.

    Examples
    --------
    >>> from gwavelets.groups import torus_model
    >>> [sorted(K) for K in build_msf_ladder(torus_model([[2]]), 2).levels]
    [[(0,)], [(0,), (1,)], [(-1,), (0,), (1,), (2,)]]
    """
    if J < 0:
        raise ValueError("J must be non-negative")
    model.check_capacity(J)
    if check:
        report = check_standing_assumptions(model, J=max(J, 1), probe_radius=1)
        if not report.ok:
            raise AdmissibilityFailed(f"model fails the standing assumptions: {report.certificate}")
    enum = Enumeration(model, seed)
    levels = [[model.dual_zero()]]
    audit = []
    for j in range(J):
        K = levels[-1]
        nxt = list(dict.fromkeys(list(K) + [model.ahat(c) for c in K]))
        covered = {model.coset_key(c, j + 1) for c in nxt}
        target = model.m ** (j + 1)
        if len(covered) != len(nxt):
            raise AssertionError("K_j ∪ Â(K_j) hit a coset twice")
        if len(covered) < target:
            for chi in enum:
                key = model.coset_key(chi, j + 1)
                if key not in covered:
                    covered.add(key)
                    nxt.append(chi)
                    audit.append((j + 1, chi))
                    if len(covered) == target:
                        break
        levels.append(sorted(nxt, key=model.sort_key))
    return MsfLadder(model, levels, {"kind": enum.kind, "seed": seed}, audit)


def check_msf_conditions(ladder, coverage_probe=()):
    """Check the MSF ladder properties (i)-(v) on the stored levels.

    (i)-(iv) are exact set identities. (v) is only checked on
    ``coverage_probe``: every probe element must lie in some stored
    ``K_j``. The identity ``Â(Ĝ) ∩ K_j = Â(K_{j-1})`` kept by the greedy
    construction is reported under ``"i4"``.
    """
    model = ladder.model
    levels = ladder.levels
    enc = model.encode_dual
    conds = {}

    ok = len(levels) > 0 and list(levels[0]) == [model.dual_zero()]
    conds["i"] = Condition(PASS) if ok else Condition(
        FAIL, {"j": 0, "eta": None, "chi": [enc(c) for c in (levels[0] if levels else [])]})

    witness = None
    for j, K in enumerate(levels):
        ds = digit_set(model, j)
        counts = {}
        first = {}
        for chi in K:
            key = model.coset_key(chi, j)
            counts[key] = counts.get(key, 0) + 1
            first.setdefault(key, chi)
        for d in ds:
            key = model.coset_key(d, j)
            if counts.get(key, 0) != 1:
                witness = {"j": j, "eta": enc(d),
                           "chi": enc(first[key]) if key in first else None,
                           "count": counts.get(key, 0)}
                break
        if witness is None and len(K) != len(ds):
            extra = next(c for c in K if list(K).count(c) > 1)
            witness = {"j": j, "eta": None, "chi": enc(extra), "count": len(K)}
        if witness:
            break
    conds["ii"] = Condition(PASS if witness is None else FAIL, witness)

    witness = None
    for j in range(len(levels) - 1):
        nxt = set(levels[j + 1])
        bad = next((c for c in levels[j] if c not in nxt), None)
        if bad is not None:
            witness = {"j": j, "eta": None, "chi": enc(bad)}
            break
    conds["iii"] = Condition(PASS if witness is None else FAIL, witness)

    witness = None
    for j in range(len(levels) - 1):
        nxt = set(levels[j + 1])
        bad = next((c for c in levels[j] if model.ahat(c) not in nxt), None)
        if bad is not None:
            witness = {"j": j, "eta": None, "chi": enc(bad)}
            break
    conds["iv"] = Condition(PASS if witness is None else FAIL, witness)

    union = set().union(*map(set, levels)) if levels else set()
    bad = next((c for c in sorted(set(coverage_probe), key=model.sort_key) if c not in union), None)
    conds["v"] = Condition(
        PASS if bad is None else FAIL,
        None if bad is None else {"j": None, "eta": None, "chi": enc(bad)},
        f"finite-level coverage of {len(set(coverage_probe))} probe points by K_0..K_{len(levels) - 1}")

    witness = None
    for j in range(1, len(levels)):
        in_image = {c for c in levels[j] if model.in_image(c, 1)}
        pushed = {model.ahat(c) for c in levels[j - 1]}
        if in_image != pushed:
            diff = sorted(in_image ^ pushed, key=model.sort_key)
            witness = {"j": j, "eta": None, "chi": enc(diff[0])}
            break
    conds["i4"] = Condition(PASS if witness is None else FAIL, witness)

    return ConditionReport(conds, {"levels": len(levels) - 1})


def msf_scaling_sequence(ladder):
    """``phi_j^ = m^{-j/2} 1_{K_j}`` for every stored level."""
    model = ladder.model
    phis = [FourierExpansion.indicator(model, K, model.m ** (-j / 2)) for j, K in enumerate(ladder.levels)]
    return ScalingSequence(model, phis)


def msf_wavelet_partition(ladder, j):
    """Split ``K_{j+1}`` into ``m`` sets meeting each level-``j`` coset once.

    In each coset the point of ``K_j`` goes to part 0 and the remaining
    ``m - 1`` points, in canonical order, go to parts ``1..m-1``.
    """
    if not 0 <= j < ladder.J:
        raise ValueError(f"partition needs 0 <= j < {ladder.J}")
    model = ladder.model
    m = model.m
    current = set(ladder.levels[j])
    ds = digit_set(model, j)
    buckets = [[] for _ in range(len(ds))]
    for chi in ladder.levels[j + 1]:
        buckets[ds.index_of_key(model.coset_key(chi, j))].append(chi)
    parts = [[] for _ in range(m)]
    for bucket in buckets:
        base = [c for c in bucket if c in current]
        rest = sorted((c for c in bucket if c not in current), key=model.sort_key)
        if len(base) != 1 or len(rest) != m - 1:
            raise ValueError("ladder does not have m points of K_{j+1} per level-j coset")
        for nu, chi in enumerate(base + rest):
            parts[nu].append(chi)
    return WaveletPartition(j, [sorted(p, key=model.sort_key) for p in parts])


def msf_wavelets(ladder, j):
    """``psi^nu_j^ = m^{-j/2} 1_{K^(nu)_j}`` for ``nu = 1..m-1``."""
    model = ladder.model
    part = msf_wavelet_partition(ladder, j)
    scale = model.m ** (-j / 2)
    return [FourierExpansion.indicator(model, part[nu], scale) for nu in range(1, model.m)]
