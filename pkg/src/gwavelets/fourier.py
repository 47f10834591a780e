"""Finitely supported Fourier expansions and the operators acting on them."""

from __future__ import annotations

import numpy as np

from .digits import same_coset
from .errors import ModelMismatch
from .groups.base import unit

EPS = 1e-9
PRUNE = 1e-14


class FourierExpansion:
    """A function on ``G`` given by finitely many Fourier coefficients.

    Coefficients of modulus at most ``prune`` are dropped at construction.
    Instances are treated as immutable values; every operator returns a new
    expansion.

    Parameters
    ----------
    model : GroupModel
    coeffs : mapping
        Dual element -> complex coefficient.
    prune : float, optional
        Threshold below which coefficients are discarded.
    """

    __slots__ = ("model", "_coeffs")

    def __init__(self, model, coeffs=None, prune=PRUNE):
        self.model = model
        items = {}
        for chi, c in (coeffs or {}).items():
            c = complex(c)
            if abs(c) > prune:
                items[chi] = c
        self._coeffs = dict(sorted(items.items(), key=lambda kv: model.sort_key(kv[0])))

    @classmethod
    def delta(cls, model, chi, value=1.0):
        return cls(model, {chi: value})

    @classmethod
    def indicator(cls, model, support, value=1.0):
        return cls(model, {chi: value for chi in support})

    def __getitem__(self, chi):
        return self._coeffs.get(chi, 0j)

    def __contains__(self, chi):
        return chi in self._coeffs

    def __len__(self):
        return len(self._coeffs)

    def __iter__(self):
        return iter(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def support(self):
        return list(self._coeffs)

    def __repr__(self):
        return f"FourierExpansion({self.model!r}, {self._coeffs!r})"

    def _check(self, other):
        if not isinstance(other, FourierExpansion):
            raise TypeError("expected a FourierExpansion")
        if other.model is not self.model and other.model != self.model:
            raise ModelMismatch("expansions belong to different models")

    def __add__(self, other):
        self._check(other)
        out = dict(self._coeffs)
        for chi, c in other.items():
            out[chi] = out.get(chi, 0j) + c
        return FourierExpansion(self.model, out)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __neg__(self):
        return (-1.0) * self

    def __mul__(self, scalar):
        return FourierExpansion(self.model, {chi: scalar * c for chi, c in self.items()})

    __rmul__ = __mul__

    def norm(self):
        return float(np.sqrt(sum(abs(c) ** 2 for c in self._coeffs.values())))

    def restrict(self, points):
        points = set(points)
        return FourierExpansion(self.model, {chi: c for chi, c in self.items() if chi in points})

    def allclose(self, other, tol=EPS):
        self._check(other)
        keys = set(self._coeffs) | set(other._coeffs)
        return all(abs(self[k] - other[k]) <= tol for k in keys)

    def to_json(self):
        from .jsonio import complex_parts
        model = self.model
        return {
            "model": model.to_json(),
            "coeffs": [dict(chi=model.encode_dual(chi), **complex_parts(c)) for chi, c in self.items()],
        }

    @classmethod
    def from_json(cls, obj, model=None):
        from .groups import model_from_json
        model = model or model_from_json(obj["model"])
        coeffs = {}
        for entry in obj["coeffs"]:
            chi = model.decode_dual(entry["chi"])
            coeffs[chi] = coeffs.get(chi, 0j) + complex(float(entry["re"]), float(entry["im"]))
        return cls(model, coeffs)


def inner_product(f, g):
    """Plancherel inner product ``sum f^(chi) conj(g^(chi))``.

    Examples
    --------
    >>> from gwavelets.groups import torus_model
    >>> t = torus_model([[2]])
    >>> inner_product(FourierExpansion.delta(t, (0,)), FourierExpansion.delta(t, (0,)))
    (1+0j)
    """
    f._check(g)
    small, big = (f, g) if len(f) <= len(g) else (g, f)
    total = 0j
    for chi in small:
        if chi in big:
            total += f[chi] * np.conj(g[chi])
    return complex(total)


def translate(f, a):
    """``T_a f``: multiply each coefficient by ``conj(chi(a))``."""
    model = f.model
    return FourierExpansion(model, {chi: c * unit(-model.pair(chi, a)) for chi, c in f.items()})


def dilate(f):
    """``D_A f``: push the coefficients forward along ``Â``."""
    model = f.model
    return FourierExpansion(model, {model.ahat(chi): c for chi, c in f.items()})


def periodize(f):
    """Periodization: ``(P f)^(chi) = m f^(Â chi)``."""
    model = f.model
    out = {}
    for chi, c in f.items():
        xi = model.ahat_preimage(chi, 1)
        if xi is not None:
            out[xi] = model.m * c
    return FourierExpansion(model, out)


def omega(f, j, eta):
    """Restriction of ``f^`` to the coset ``eta + Â^j(Ĝ)``."""
    if j == 0:
        return f
    model = f.model
    key = model.coset_key(eta, j)
    return FourierExpansion(model, {chi: c for chi, c in f.items() if model.coset_key(chi, j) == key})


def omega_exact(f, j, eta):
    """Same as :func:`omega`, deciding membership by solving for a preimage."""
    model = f.model
    return FourierExpansion(model, {chi: c for chi, c in f.items() if same_coset(model, chi, eta, j)})


def evaluate(f, x):
    """Point value ``sum f^(chi) chi(x)``.

    ``x`` is a tuple of ``Fraction`` or float coordinates on the torus, or
    a :class:`CantorPoint` (or finite digit tuple) on a Cantor group.
    """
    model = f.model
    return complex(sum(c * unit(model.phase_at(chi, x)) for chi, c in f.items()))


def random_expansion(model, support, seed=0):
    """Seeded complex Gaussian coefficients on the given support."""
    rng = np.random.default_rng(seed)
    keys = sorted(set(support), key=model.sort_key)
    if not keys:
        return FourierExpansion(model, {})
    vals = rng.standard_normal(len(keys)) + 1j * rng.standard_normal(len(keys))
    return FourierExpansion(model, dict(zip(keys, vals)))
