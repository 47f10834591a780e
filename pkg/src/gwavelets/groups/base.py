"""Shared machinery for concrete (G, A) models."""

from __future__ import annotations

import cmath
import math
from abc import ABC, abstractmethod
from fractions import Fraction

from ..errors import CapacityExceeded

DEFAULT_CAP = 2 ** 20


class RationalPhase(Fraction):
    """An element of Q/Z, stored as a reduced fraction in ``[0, 1)``.

    A character value is ``exp(2*pi*i*theta)``; keeping ``theta`` exact means
    orthogonality sums only round at the final exponential.
    """

    def __new__(cls, numerator=0, denominator=None):
        f = Fraction(numerator, denominator) % 1
        return super().__new__(cls, f.numerator, f.denominator)

    def __add__(self, other):
        return RationalPhase(Fraction(self) + Fraction(other))

    __radd__ = __add__

    def __sub__(self, other):
        return RationalPhase(Fraction(self) - Fraction(other))

    def __neg__(self):
        return RationalPhase(-Fraction(self))

    def __repr__(self):
        return f"RationalPhase({self.numerator}, {self.denominator})"

    def value(self):
        """The unimodular complex number ``exp(2*pi*i*theta)``."""
        return unit(self)


def unit(theta):
    """``exp(2*pi*i*theta)`` with exact values at multiples of 1/4."""
    if isinstance(theta, Fraction):
        theta = theta % 1
        if 4 % theta.denominator == 0:
            return (1, 1j, -1, -1j)[int(theta * 4)] + 0j
        theta = float(theta)
    return cmath.exp(2j * math.pi * theta)


class GroupModel(ABC):
    """A compact abelian group ``G`` with an epimorphism ``A`` of finite kernel.

    Subclasses supply the dual-group arithmetic (``Ĝ`` and ``Â``), kernel
    enumeration, coset keys for ``Ĝ / Â^j(Ĝ)`` and a canonical ordering of
    dual elements. Models are immutable; the internal caches only memoize
    pure functions of the model data.
    """

    kind: str
    m: int

    def __init__(self, cap=DEFAULT_CAP):
        self.cap = int(cap)
        self._kernel_cache = {0: [self.kernel_zero()]}
        self._digit_cache = {}

    # --- dual group ------------------------------------------------------
    @abstractmethod
    def dual_zero(self):
        ...

    @abstractmethod
    def dual_add(self, a, b):
        ...

    @abstractmethod
    def dual_neg(self, a):
        ...

    def dual_sub(self, a, b):
        return self.dual_add(a, self.dual_neg(b))

    @abstractmethod
    def ahat(self, chi):
        """Apply the dual endomorphism ``Â`` once."""

    def ahat_power(self, chi, j):
        for _ in range(j):
            chi = self.ahat(chi)
        return chi

    @abstractmethod
    def ahat_preimage(self, chi, j=1):
        """The unique ``xi`` with ``Â^j xi = chi``, or ``None``."""

    @abstractmethod
    def coset_key(self, chi, j):
        """Hashable invariant identifying the coset ``chi + Â^j(Ĝ)``."""

    @abstractmethod
    def level_one_digits(self):
        """Canonical representatives of ``Ĝ / Â(Ĝ)``, starting with 0."""

    @abstractmethod
    def sort_key(self, chi):
        ...

    @abstractmethod
    def grade(self, chi):
        """Size grade used by the canonical enumeration (0 only for 0)."""

    @abstractmethod
    def grade_elements(self, r):
        """All dual elements of grade ``r`` in canonical order."""

    def probe_box(self, radius):
        """Every dual element of grade at most ``radius``, canonically ordered."""
        out = []
        for r in range(radius + 1):
            out.extend(self.grade_elements(r))
            if len(out) > self.cap:
                raise CapacityExceeded(f"probe box of radius {radius} exceeds cap {self.cap}")
        return out

    @abstractmethod
    def encode_dual(self, chi):
        ...

    @abstractmethod
    def decode_dual(self, obj):
        ...

    # --- group side ------------------------------------------------------
    @abstractmethod
    def kernel_zero(self):
        ...

    @abstractmethod
    def kernel_add(self, a, b):
        ...

    @abstractmethod
    def _kernel_level(self, j):
        ...

    @abstractmethod
    def pair(self, chi, a):
        """Exact phase of ``chi(a)`` for a kernel element ``a``."""

    @abstractmethod
    def phase_at(self, chi, x):
        """Phase of ``chi(x)`` at an arbitrary representable point."""

    @abstractmethod
    def encode_point(self, a):
        ...

    @abstractmethod
    def decode_point(self, obj):
        ...

    @abstractmethod
    def to_json(self):
        ...

    # --- shared ----------------------------------------------------------
    def check_capacity(self, j):
        if self.m ** j > self.cap:
            raise CapacityExceeded(
                f"m^j = {self.m}^{j} exceeds the enumeration cap {self.cap}")

    def kernel_elements(self, j):
        if j < 0:
            raise ValueError("level must be non-negative")
        if j not in self._kernel_cache:
            self.check_capacity(j)
            self._kernel_cache[j] = self._kernel_level(j)
        return list(self._kernel_cache[j])

    def in_image(self, chi, j):
        return self.coset_key(chi, j) == self.coset_key(self.dual_zero(), j)

    def canonical_order(self, elements):
        return sorted(elements, key=self.sort_key)

    def __eq__(self, other):
        return type(self) is type(other) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash(repr(self.to_json()))
