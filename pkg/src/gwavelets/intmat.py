"""Exact integer matrix and polynomial helpers.

Matrices are tuples of row tuples of Python ints. Everything here is exact;
floating point appears only in :func:`factor_charpoly`, where numerically
located root clusters propose candidate factors that are then confirmed by
exact polynomial division.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from .errors import Unsupported

MAX_FACTOR_DEGREE = 8


def as_matrix(rows):
    mat = tuple(tuple(int(v) for v in row) for row in rows)
    n = len(mat)
    if n == 0 or any(len(row) != n for row in mat):
        raise ValueError("expected a non-empty square matrix")
    return mat


def identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(a):
    return tuple(zip(*a))


def matmul(a, b):
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def matpow(a, j):
    result = identity(len(a))
    base = a
    while j:
        if j & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        j >>= 1
    return result


def det(a):
    """Determinant by fraction-free Bareiss elimination."""
    m = [list(row) for row in a]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def inverse(a):
    """Exact inverse over the rationals, as a tuple of Fraction rows."""
    n = len(a)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def integer_inverse(a):
    inv = inverse(a)
    if any(v.denominator != 1 for row in inv for v in row):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(int(v) for v in row) for row in inv)


class SmithForm:
    """Smith normal form ``M = U @ diag(d) @ V`` with unimodular ``U``, ``V``.

    ``U_inv`` and ``V_inv`` are kept alongside so callers can reduce vectors
    modulo the lattice ``M Z^n`` without recomputing inverses.
    """

    __slots__ = ("d", "U", "V", "U_inv", "V_inv")

    def __init__(self, d, U, V, U_inv, V_inv):
        self.d = d
        self.U = U
        self.V = V
        self.U_inv = U_inv
        self.V_inv = V_inv

    def residue(self, v):
        """Mixed-radix residue of ``v`` modulo the lattice ``M Z^n``."""
        w = matvec(self.U_inv, v)
        return tuple(x % di for x, di in zip(w, self.d))

    def solve(self, v):
        """Integer ``z`` with ``M z = v``, or ``None`` if ``v`` is off-lattice."""
        w = matvec(self.U_inv, v)
        if any(x % di for x, di in zip(w, self.d)):
            return None
        return matvec(self.V_inv, tuple(x // di for x, di in zip(w, self.d)))


def smith_normal_form(mat):
    """Smith normal form of a non-singular square integer matrix.

    Row and column operations are accumulated into ``S`` and ``T`` so that
    ``S @ M @ T = diag(d)``; the returned form stores ``U = S^-1`` and
    ``V = T^-1``.
    """
    n = len(mat)
    a = [list(row) for row in mat]
    S = [list(row) for row in identity(n)]
    T = [list(row) for row in identity(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        S[i], S[j] = S[j], S[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in T:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        S[dst] = [x + q * y for x, y in zip(S[dst], S[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in T:
            row[dst] += q * row[src]

    for t in range(n):
        while True:
            entries = [(abs(a[i][j]), i, j) for i in range(t, n) for j in range(t, n) if a[i][j]]
            if not entries:
                raise ZeroDivisionError("singular matrix has no Smith form here")
            _, pi, pj = min(entries)
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = a[t][t]
            clean = True
            for i in range(t + 1, n):
                q = a[i][t] // p
                if q:
                    add_row(i, t, -q)
                if a[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    add_col(j, t, -q)
                if a[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next((i for i in range(t + 1, n)
                        for j in range(t + 1, n) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            S[t] = [-x for x in S[t]]

    S = tuple(tuple(r) for r in S)
    T = tuple(tuple(r) for r in T)
    d = tuple(a[i][i] for i in range(n))
    return SmithForm(d, integer_inverse(S), integer_inverse(T), S, T)


# --- polynomials: coefficient tuples, lowest degree first -----------------

def charpoly(a):
    """Characteristic polynomial ``det(xI - A)`` by Faddeev-LeVerrier."""
    n = len(a)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    M = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        c_prev = coeffs[n - k + 1]
        AM = matmul(a, M)
        M = [[AM[i][j] + (c_prev if i == j else 0) for j in range(n)] for i in range(n)]
        AM = matmul(a, M)
        tr = sum(AM[i][i] for i in range(n))
        coeffs[n - k] = -tr // k
    return tuple(coeffs)


def poly_divmod(num, den):
    """Exact division of integer polynomials by a monic divisor."""
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    rem = list(num)
    dq = len(den) - 1
    if len(rem) - 1 < dq:
        return (0,), tuple(rem)
    quot = [0] * (len(rem) - dq)
    for i in range(len(rem) - 1, dq - 1, -1):
        c = rem[i]
        quot[i - dq] = c
        if c:
            for k in range(dq + 1):
                rem[i - dq + k] -= c * den[k]
    rem = rem[:dq] or [0]
    while len(rem) > 1 and rem[-1] == 0:
        rem.pop()
    return tuple(quot), tuple(rem)


def _round_monic(roots, tol=1e-6):
    coeffs = np.poly(np.asarray(roots))[::-1]
    out = []
    for c in coeffs:
        if abs(c.imag) > tol * (1 + abs(c)):
            return None
        r = round(c.real)
        if abs(c.real - r) > tol * (1 + abs(c.real)):
            return None
        out.append(int(r))
    return tuple(out)


def factor_charpoly(a, max_degree=MAX_FACTOR_DEGREE):
    """Factor the characteristic polynomial of ``a`` into irreducibles over Z.

    Subsets of the numerically computed eigenvalues are tried smallest first;
    a subset whose monic polynomial rounds to integers and divides the
    remaining polynomial exactly is accepted. Taking the smallest dividing
    subset each round makes every accepted factor irreducible.

    Returns
    -------
    poly : tuple of int
        The characteristic polynomial, lowest degree first.
    factors : list of tuple of int
        Monic irreducible factors (with multiplicity).
    """
    n = len(a)
    if n > max_degree:
        raise Unsupported(f"factorization supported up to degree {max_degree}, got {n}")
    poly = charpoly(a)
    roots = list(np.linalg.eigvals(np.array(a, dtype=float)))
    remaining = poly
    factors = []
    idx = list(range(n))
    while len(idx) > 0:
        found = None
        for size in range(1, len(idx) + 1):
            for subset in itertools.combinations(idx, size):
                cand = _round_monic([roots[i] for i in subset])
                if cand is None:
                    continue
                quot, rem = poly_divmod(remaining, cand)
                if rem == (0,):
                    found = subset, cand, quot
                    break
            if found:
                break
        if found is None:
            raise Unsupported("could not split characteristic polynomial numerically")
        subset, cand, quot = found
        factors.append(cand)
        remaining = quot
        idx = [i for i in idx if i not in subset]
    if remaining != (1,):
        raise Unsupported("numerical factor search did not exhaust the polynomial")
    return poly, factors
