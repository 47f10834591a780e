"""The Cantor group (Z_N)^N with a band-matrix epimorphism."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from ..errors import CapacityExceeded, InvalidModel
from .base import DEFAULT_CAP, GroupModel, RationalPhase

# Guard for the canonical search of level-one digits.
MAX_DIGIT_SEARCH_GRADE = 24


@dataclass(frozen=True)
class CantorPoint:
    """An eventually periodic point ``(x_1, x_2, ...)`` of ``(Z_N)^N``.

    The coordinate ``x_n`` is the residue ``x_n / N`` in ``Z_N``. The point
    is ``head`` followed by ``cycle`` repeated forever; use :meth:`make` to
    get the canonical form (minimal period, shortest head). Finitely
    supported points have ``cycle == (0,)``.
    """

    head: tuple = ()
    cycle: tuple = (0,)

    @classmethod
    def make(cls, head=(), cycle=(0,)):
        cycle = tuple(int(v) for v in cycle) or (0,)
        n = len(cycle)
        for p in range(1, n + 1):
            if n % p == 0 and cycle == cycle[:p] * (n // p):
                cycle = cycle[:p]
                break
        head = [int(v) for v in head]
        while head and head[-1] == cycle[-1]:
            head.pop()
            cycle = (cycle[-1],) + cycle[:-1]
        return cls(tuple(head), cycle)

    @classmethod
    def from_support(cls, pairs):
        pairs = [(int(p), int(v)) for p, v in pairs]
        top = max((p for p, _ in pairs), default=0)
        head = [0] * top
        for p, v in pairs:
            head[p - 1] = v
        return cls.make(head)

    def coord(self, n):
        """The ``n``-th coordinate, 1-based."""
        h = len(self.head)
        if n <= h:
            return self.head[n - 1]
        return self.cycle[(n - 1 - h) % len(self.cycle)]

    @property
    def is_finite(self):
        return self.cycle == (0,)

    def support(self):
        if not self.is_finite:
            raise ValueError("point is not finitely supported")
        return tuple((i + 1, v) for i, v in enumerate(self.head) if v)

    def truncate(self, depth):
        return tuple(self.coord(n) for n in range(1, depth + 1))

    def combine(self, other, op, modulus):
        q = max(len(self.head), len(other.head))
        per = math.lcm(len(self.cycle), len(other.cycle))
        vals = [op(self.coord(n), other.coord(n)) % modulus for n in range(1, q + per + 1)]
        return CantorPoint.make(vals[:q], vals[q:])


@dataclass(frozen=True)
class BandSpec:
    """Finite description of a band matrix with unit superdiagonal.

    Row ``i`` of the matrix has ``a_{i,i+1} = 1`` and extra coefficients
    ``(a_{i,i+2}, ..., a_{i,i+k})`` for upper bandwidth ``k``; those
    ``k - 1`` numbers are the row tuple stored here. Rows ``1..P`` come from
    ``preperiod`` and later rows cycle through ``period``.

    Build instances with :meth:`shift`, :meth:`constant`, :meth:`periodic`
    or :meth:`finite` rather than by hand.
    """

    bandwidth: int
    preperiod: tuple = ()
    period: tuple = ((),)
    truncation: int | None = None

    @classmethod
    def shift(cls):
        return cls(1, (), ((),))

    @classmethod
    def constant(cls, bandwidth, row):
        return cls(int(bandwidth), (), (tuple(int(v) for v in row),))

    @classmethod
    def periodic(cls, bandwidth, period, preperiod=()):
        return cls(int(bandwidth),
                   tuple(tuple(int(v) for v in r) for r in preperiod),
                   tuple(tuple(int(v) for v in r) for r in period))

    @classmethod
    def finite(cls, bandwidth, table, truncation=None):
        """Rows ``1..T`` from ``table`` (zero padded), zero beyond depth ``T``."""
        rows = [tuple(int(v) for v in r) for r in table]
        t = len(rows) if truncation is None else int(truncation)
        if t < len(rows):
            raise InvalidModel("truncation depth is shorter than the coefficient table")
        zero = (0,) * (int(bandwidth) - 1)
        rows += [zero] * (t - len(rows))
        return cls(int(bandwidth), tuple(rows), (zero,), t)

    def validated(self, n):
        """Check shapes and reduce every coefficient modulo ``n``."""
        k = self.bandwidth
        if not isinstance(k, int) or k < 1:
            raise InvalidModel("bandwidth must be a positive integer")
        if not self.period:
            raise InvalidModel("band specification needs a non-empty period")
        for row in self.preperiod + self.period:
            if len(row) != k - 1:
                raise InvalidModel(
                    f"each row needs bandwidth - 1 = {k - 1} coefficients, got {len(row)}")
        reduce = lambda rows: tuple(tuple(v % n for v in r) for r in rows)
        return BandSpec(k, reduce(self.preperiod), reduce(self.period), self.truncation)

    def row(self, i):
        p = len(self.preperiod)
        if i <= p:
            return self.preperiod[i - 1]
        return self.period[(i - p - 1) % len(self.period)]

    def to_json(self):
        return {"preperiod": [list(r) for r in self.preperiod],
                "period": [list(r) for r in self.period]}


class CantorModel(GroupModel):
    """``G = (Z_N)^N`` dilated by a band matrix with unit superdiagonal.

    Dual elements are finitely supported sequences over ``Z_N``, stored as
    tuples of ``(position, value)`` pairs with increasing positions and no
    zero values. Kernel elements are :class:`CantorPoint` values; when the
    band is genuinely periodic they may have infinite support.

    ``m = |ker A|`` is found by enumerating the kernel.
    """

    kind = "cantor"

    def __init__(self, N, band, cap=DEFAULT_CAP):
        if not isinstance(N, int) or N < 2:
            raise InvalidModel("alphabet size N must be an integer >= 2")
        if not isinstance(band, BandSpec):
            raise InvalidModel("band must be a BandSpec")
        self.N = N
        self.band = band.validated(N)
        self.k = self.band.bandwidth
        self._gens = {}
        self.m = None
        super().__init__(cap)
        self.m = len(self.kernel_elements(1))
        if self.m > N ** self.k:
            raise InvalidModel("kernel enumeration exceeded the N^k bound")

    def __repr__(self):
        return f"CantorModel(N={self.N}, band={self.band})"

    def check_capacity(self, j):
        if self.m is not None:
            super().check_capacity(j)

    # --- dual group ------------------------------------------------------
    def dual(self, pairs):
        acc = {}
        for p, v in pairs:
            p = int(p)
            if p < 1:
                raise ValueError("positions start at 1")
            acc[p] = (acc.get(p, 0) + int(v)) % self.N
        return tuple(sorted((p, v) for p, v in acc.items() if v))

    def from_dense(self, values):
        return tuple((i + 1, v % self.N) for i, v in enumerate(values) if v % self.N)

    def dense(self, chi, length=None):
        top = chi[-1][0] if chi else 0
        out = [0] * max(top, length or 0)
        for p, v in chi:
            out[p - 1] = v
        return out

    def dual_zero(self):
        return ()

    def dual_add(self, a, b):
        return self.dual(a + b)

    def dual_neg(self, a):
        return tuple((p, (-v) % self.N) for p, v in a)

    def ahat(self, chi):
        acc = []
        for p, v in chi:
            acc.append((p + 1, v))
            for t, c in enumerate(self.band.row(p), start=2):
                if c:
                    acc.append((p + t, v * c))
        return self.dual(acc)

    def _preimage_one(self, chi):
        c = dict(chi)
        if c.get(1, 0):
            return None
        N, k = self.N, self.k
        top = chi[-1][0] if chi else 0
        P, per = len(self.band.preperiod), len(self.band.period)
        xi = [0]  # xi[n] for n >= 1; index 0 unused
        seen = set()
        n = 1
        while True:
            state = tuple(xi[max(1, n - k + 1):n])
            if n + 1 > top and not any(state):
                return self.from_dense(xi[1:])
            if n + 1 > top and n + 1 - k > P:
                node = ((n - P) % per, state)
                if node in seen:
                    return None
                seen.add(node)
            val = c.get(n + 1, 0)
            for t in range(2, k + 1):
                i = n + 1 - t
                if i >= 1:
                    val -= self.band.row(i)[t - 2] * xi[i]
            xi.append(val % N)
            n += 1

    def ahat_preimage(self, chi, j=1):
        for _ in range(j):
            chi = self._preimage_one(chi)
            if chi is None:
                return None
        return chi

    def _generators(self, j):
        """Generators of ``ker A^j``: kernel elements plus iterated lifts.

        If ``x`` is in ``ker A^j`` then ``Ax`` lies in ``ker A^(j-1)``, so
        lifting a generating set of ``ker A^(j-1)`` through ``A`` and adding
        ``ker A`` generates ``ker A^j``.
        """
        if j not in self._gens:
            if j == 1:
                layer = [a for a in self.kernel_elements(1) if a != self.kernel_zero()]
                self._gens[1] = (layer, layer)
            else:
                self._generators(j - 1)
                prev_layer, prev_all = self._gens[j - 1]
                layer = [self.solve(g)[0] for g in prev_layer]
                self._gens[j] = (layer, prev_all + layer)
        return self._gens[j][1]

    def coset_key(self, chi, j):
        if j == 0:
            return ()
        return tuple(sum(v * g.coord(p) for p, v in chi) % self.N for g in self._generators(j))

    def level_one_digits(self):
        found = {}
        for r in range(MAX_DIGIT_SEARCH_GRADE + 1):
            for chi in self.grade_elements(r):
                key = self.coset_key(chi, 1)
                if key not in found:
                    found[key] = chi
                    if len(found) == self.m:
                        return list(found.values())
        raise CapacityExceeded("no complete set of level-one digits found within the search grade")

    def sort_key(self, chi):
        top = chi[-1][0] if chi else 0
        return (top, tuple(self.dense(chi)))

    def grade(self, chi):
        return chi[-1][0] if chi else 0

    def grade_elements(self, r):
        if r == 0:
            return [()]
        if (self.N - 1) * self.N ** (r - 1) > self.cap:
            raise CapacityExceeded(f"grade {r} has more than {self.cap} elements")
        return [self.from_dense(rest + (last,))
                for rest in itertools.product(range(self.N), repeat=r - 1)
                for last in range(1, self.N)]

    def encode_dual(self, chi):
        return [[p, v] for p, v in chi]

    def decode_dual(self, obj):
        return self.dual((p, v) for p, v in obj)

    # --- group side ------------------------------------------------------
    def kernel_zero(self):
        return CantorPoint()

    def kernel_add(self, a, b):
        return a.combine(b, lambda x, y: x + y, self.N)

    def point(self, head=(), cycle=(0,)):
        return CantorPoint.make([v % self.N for v in head], [v % self.N for v in cycle])

    def apply(self, x):
        """Apply the band matrix to an eventually periodic point."""
        q = max(len(self.band.preperiod), len(x.head))
        per = math.lcm(len(self.band.period), len(x.cycle))
        vals = []
        for i in range(1, q + per + 1):
            s = x.coord(i + 1)
            for t, c in enumerate(self.band.row(i), start=2):
                s += c * x.coord(i + t)
            vals.append(s % self.N)
        return CantorPoint.make(vals[:q], vals[q:])

    def solve(self, y):
        """All eventually periodic ``x`` with ``A x = y``, in search order.

        ``x_1`` never enters the equations, so it is free. For bandwidth
        ``k >= 2`` the remaining coordinates are found by a depth-first
        search over the states ``(x_{i+1}, ..., x_{i+k-1})``; row ``i``
        fixes ``a_{i,i+k} x_{i+k}`` and a state revisited at the same phase
        of the (eventually periodic) rows and right-hand side closes a
        cycle of the solution.
        """
        N, k = self.N, self.k
        if k == 1:
            return [CantorPoint.make((c,) + y.head, y.cycle) for c in range(N)]
        Q = max(len(self.band.preperiod), len(y.head))
        L = math.lcm(len(self.band.period), len(y.cycle))

        def norm(i):
            return i if i <= Q else Q + 1 + (i - Q - 1) % L

        tails = []
        for start in itertools.product(range(N), repeat=k - 1):
            self._search(y, list((0,) + start), norm, tails)
        out = [_set_first(t, c, N) for c in range(N) for t in tails]
        if len(out) > N ** k:
            raise InvalidModel("solution count exceeded the N^k bound")
        return out

    def _search(self, y, xs, norm, out):
        N, k = self.N, self.k
        on_path = {}
        stack = []
        i = 1
        while True:
            key = (norm(i), tuple(xs[i:i + k - 1]))
            if key in on_path:
                i1 = on_path[key]
                out.append(CantorPoint.make(xs[:i1], xs[i1:i]))
            else:
                on_path[key] = i
                row = self.band.row(i)
                rhs = y.coord(i) - xs[i]
                for t in range(2, k):
                    rhs -= row[t - 2] * xs[i + t - 1]
                lead = row[k - 2]
                cands = [v for v in range(N) if (lead * v - rhs) % N == 0]
                stack.append((key, iter(cands)))
            while stack:
                top_key, cands = stack[-1]
                v = next(cands, None)
                if v is None:
                    stack.pop()
                    del on_path[top_key]
                    continue
                depth = len(stack)
                del xs[depth + k - 1:]
                xs.append(v)
                i = depth + 1
                break
            else:
                return

    def _kernel_level(self, j):
        if j == 1:
            return self.solve(CantorPoint())
        out = []
        for y in self.kernel_elements(j - 1):
            out.extend(self.solve(y))
        return out

    def pair(self, chi, a):
        if not isinstance(a, CantorPoint):
            a = CantorPoint.make(a)
        return RationalPhase(sum(v * a.coord(p) for p, v in chi), self.N)

    def phase_at(self, chi, x):
        return self.pair(chi, x)

    def encode_point(self, a):
        if a.is_finite:
            return [[p, v] for p, v in a.support()]
        return {"head": list(a.head), "cycle": list(a.cycle)}

    def decode_point(self, obj):
        if isinstance(obj, dict):
            return self.point(obj.get("head", ()), obj.get("cycle", (0,)))
        head = [0] * max((p for p, _ in obj), default=0)
        for p, v in obj:
            head[p - 1] = v
        return self.point(head)

    def to_json(self):
        return {"kind": "cantor", "N": self.N, "bandwidth": self.k,
                "coeffs": self.band.to_json(), "truncation": self.band.truncation}


def _set_first(point, c, n):
    """``point`` with its first coordinate replaced by ``c``."""
    h = len(point.head)
    depth = max(h, 1)
    vals = [point.coord(i) for i in range(1, depth + len(point.cycle) + 1)]
    vals[0] = c % n
    return CantorPoint.make(vals[:depth], vals[depth:])
