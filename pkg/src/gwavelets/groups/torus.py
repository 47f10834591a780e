"""The torus T^d with the endomorphism x -> A x mod Z^d."""

from __future__ import annotations

import itertools
from fractions import Fraction

from ..errors import InvalidModel, NotEpimorphism
from .. import intmat
from .base import DEFAULT_CAP, GroupModel, RationalPhase


class TorusModel(GroupModel):
    """``G = R^d / Z^d`` dilated by a non-singular integer matrix ``A``.

    The dual group is ``Z^d`` and ``Â`` is multiplication by ``A^T``. Dual
    elements are tuples of ints; kernel elements are tuples of ``Fraction``
    in ``[0, 1)``.

    Parameters
    ----------
    matrix : sequence of sequence of int
        Square integer matrix with non-zero determinant.
    cap : int, optional
        Upper bound on ``m^j`` for enumerations.
    """

    kind = "torus"

    def __init__(self, matrix, cap=DEFAULT_CAP):
        try:
            self.A = intmat.as_matrix(matrix)
        except (TypeError, ValueError) as exc:
            raise InvalidModel(f"torus matrix must be square and integer: {exc}") from None
        for row, raw in zip(self.A, matrix):
            if any(int(v) != v for v in raw):
                raise InvalidModel("torus matrix entries must be integers")
        self.d = len(self.A)
        det = intmat.det(self.A)
        if det == 0:
            raise NotEpimorphism("det A = 0, so x -> Ax is not onto the torus")
        self.det = det
        self.m = abs(det)
        self.At = intmat.transpose(self.A)
        self._dual_smith = {}
        self._kernel_smith = {}
        super().__init__(cap)

    def __repr__(self):
        return f"TorusModel({[list(r) for r in self.A]})"

    # --- Smith forms, cached per power -----------------------------------
    def dual_smith(self, j):
        """Smith form of ``(A^T)^j``, whose column lattice is ``Â^j(Z^d)``."""
        if j not in self._dual_smith:
            self._dual_smith[j] = intmat.smith_normal_form(intmat.matpow(self.At, j))
        return self._dual_smith[j]

    def kernel_smith(self, j):
        if j not in self._kernel_smith:
            self._kernel_smith[j] = intmat.smith_normal_form(intmat.matpow(self.A, j))
        return self._kernel_smith[j]

    # --- dual group ------------------------------------------------------
    def dual(self, values):
        chi = tuple(int(v) for v in values)
        if len(chi) != self.d:
            raise ValueError(f"expected a dual vector of length {self.d}")
        return chi

    def dual_zero(self):
        return (0,) * self.d

    def dual_add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def dual_neg(self, a):
        return tuple(-x for x in a)

    def ahat(self, chi):
        return intmat.matvec(self.At, chi)

    def ahat_power(self, chi, j):
        if j == 0:
            return tuple(chi)
        return intmat.matvec(intmat.matpow(self.At, j), chi)

    def ahat_preimage(self, chi, j=1):
        if j == 0:
            return tuple(chi)
        return self.dual_smith(j).solve(tuple(chi))

    def coset_key(self, chi, j):
        if j == 0:
            return ()
        return self.dual_smith(j).residue(tuple(chi))

    def coset_witness(self, chi, digit, j):
        return self.ahat_preimage(self.dual_sub(chi, digit), j)

    def level_one_digits(self):
        sf = self.dual_smith(1)
        return [intmat.matvec(sf.U, r) for r in itertools.product(*(range(di) for di in sf.d))]

    def sort_key(self, chi):
        return (max((abs(v) for v in chi), default=0), tuple((abs(v), v < 0) for v in chi))

    def grade(self, chi):
        return max((abs(v) for v in chi), default=0)

    def grade_elements(self, r):
        if r == 0:
            return [self.dual_zero()]
        out = [v for v in itertools.product(range(-r, r + 1), repeat=self.d)
               if max(abs(x) for x in v) == r]
        return sorted(out, key=self.sort_key)

    def encode_dual(self, chi):
        return list(chi)

    def decode_dual(self, obj):
        return self.dual(obj)

    # --- group side ------------------------------------------------------
    def kernel_zero(self):
        return (Fraction(0),) * self.d

    def kernel_add(self, a, b):
        return tuple((x + y) % 1 for x, y in zip(a, b))

    def _kernel_level(self, j):
        sf = self.kernel_smith(j)
        out = []
        for r in itertools.product(*(range(di) for di in sf.d)):
            w = [Fraction(ri, di) for ri, di in zip(r, sf.d)]
            x = tuple(sum((c * wi for c, wi in zip(row, w)), Fraction(0)) % 1 for row in sf.V_inv)
            out.append(x)
        return out

    def apply(self, x):
        """Apply ``A`` to a point of the torus (exact for rational points)."""
        return tuple(sum((c * v for c, v in zip(row, x)), Fraction(0)) % 1 for row in self.A)

    def pair(self, chi, a):
        return RationalPhase(sum((int(k) * Fraction(x) for k, x in zip(chi, a)), Fraction(0)))

    def phase_at(self, chi, x):
        if all(isinstance(v, (int, Fraction)) for v in x):
            return self.pair(chi, x)
        return sum(float(k) * float(v) for k, v in zip(chi, x)) % 1.0

    def encode_point(self, a):
        return [str(Fraction(v)) for v in a]

    def decode_point(self, obj):
        return tuple(Fraction(v) % 1 for v in obj)

    def to_json(self):
        return {"kind": "torus", "matrix": [list(r) for r in self.A]}
