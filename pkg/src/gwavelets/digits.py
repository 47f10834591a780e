"""Digit sets: canonical representatives of the cosets of Â^j(Ĝ) in Ĝ."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class DigitSet:
    """The ordered digit set ``D(A^j)``.

    Attributes
    ----------
    level : int
        The power ``j``.
    digits : tuple
        ``m^j`` dual elements, one per coset of ``Â^j(Ĝ)``, with the zero
        digit first. Index ``r * m + p`` holds ``Â^j pi_p + r_r`` where
        ``r_r`` is the ``r``-th digit of level ``j`` and ``pi_p`` the
        ``p``-th digit of level one.
    """

    level: int
    digits: tuple
    _index: dict = field(repr=False, compare=False, hash=False, default_factory=dict)

    def __len__(self):
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def index_of_key(self, key):
        return self._index[key]

    def to_json(self, model):
        return {"level": self.level, "digits": [model.encode_dual(d) for d in self.digits]}


def digit_set(model, j):
    """Digit set ``D(A^j)`` built by the recursion from level one.

    Examples
    --------
    >>> from gwavelets.groups import torus_model
    >>> list(digit_set(torus_model([[2]]), 2))
    [(0,), (2,), (1,), (3,)]
    """
    if j < 0:
        raise ValueError("level must be non-negative")
    cache = model._digit_cache
    if j not in cache:
        model.check_capacity(j)
        if j == 0:
            digits = [model.dual_zero()]
        else:
            prev = digit_set(model, j - 1).digits
            first = digit_set(model, 1).digits if j > 1 else model.level_one_digits()
            digits = [model.dual_add(model.ahat_power(pi, j - 1), r) for r in prev for pi in first]
        index = {model.coset_key(d, j): i for i, d in enumerate(digits)}
        if len(index) != len(digits):
            raise AssertionError("digit recursion produced repeated cosets")
        cache[j] = DigitSet(j, tuple(digits), index)
    return cache[j]


def coset_index(model, chi, j):
    """Position in ``D(A^j)`` of the digit congruent to ``chi``."""
    return digit_set(model, j).index_of_key(model.coset_key(chi, j))


def coset_reduce(model, chi, j):
    """Split ``chi = r + Â^j(xi)`` with ``r`` in ``D(A^j)``.

    Returns
    -------
    digit, witness : dual elements
        The digit ``r`` and the unique ``xi``.
    """
    digit = digit_set(model, j)[coset_index(model, chi, j)]
    witness = model.ahat_preimage(model.dual_sub(chi, digit), j)
    if witness is None:
        raise AssertionError("coset reduction failed to produce a witness")
    return digit, witness


def same_coset(model, chi, eta, j):
    """Whether ``chi - eta`` lies in ``Â^j(Ĝ)``."""
    if j == 0:
        return True
    return model.ahat_preimage(model.dual_sub(chi, eta), j) is not None
