"""Permutations and the three distances to the identity.

Positions and labels are 0-based. ``forward[i]`` is the label at position
``i``; ``inverse`` is kept consistent by every mutating operation.

* inversions: the word length in adjacent transpositions
* ``n - cycle_count``: the word length in arbitrary transpositions
* ``ceil(log2(Des + 1))``: the riffle-shuffle distance
"""

from __future__ import annotations

from typing import Iterable

import numba
import numpy as np

__all__ = [
    "Permutation",
    "identity",
    "from_array",
    "apply_adjacent_swap",
    "apply_transposition",
    "inversion_count",
    "inversion_count_naive",
    "cycle_count",
    "transposition_distance",
    "descent_count",
    "riffle_distance",
    "riffle_distance_from_descents",
]


class Permutation:
    """Bijection on ``{0..n-1}`` with a cached inverse."""

    __slots__ = ("forward", "inverse")

    def __init__(self, forward: Iterable[int]):
        fwd = np.array(forward, dtype=np.int64)
        if fwd.ndim != 1 or fwd.size == 0:
            raise ValueError("a permutation needs n >= 1 entries")
        n = fwd.size
        inv = np.full(n, -1, dtype=np.int64)
        if fwd.min() < 0 or fwd.max() >= n:
            raise ValueError("entries must lie in 0..n-1")
        inv[fwd] = np.arange(n, dtype=np.int64)
        if (inv < 0).any():
            raise ValueError("entries are not a bijection")
        self.forward = fwd
        self.inverse = inv

    @property
    def n(self) -> int:
        return int(self.forward.size)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and np.array_equal(self.forward, other.forward)

    def __repr__(self) -> str:
        if self.n <= 16:
            return f"Permutation({self.forward.tolist()})"
        return f"Permutation(n={self.n})"

    def copy(self) -> "Permutation":
        p = Permutation.__new__(Permutation)
        p.forward = self.forward.copy()
        p.inverse = self.inverse.copy()
        return p

    def is_consistent(self) -> bool:
        """True when ``inverse`` really inverts ``forward``."""
        n = self.n
        return bool(
            self.inverse.size == n
            and np.array_equal(self.inverse[self.forward], np.arange(n))
        )


def identity(n: int) -> Permutation:
    if n < 1:
        raise ValueError("identity needs n >= 1")
    return Permutation(np.arange(n))


def from_array(values) -> Permutation:
    return Permutation(values)


def apply_adjacent_swap(p: Permutation, i: int) -> None:
    """Exchange the labels at positions ``i`` and ``i + 1`` in place."""
    if not 0 <= i <= p.n - 2:
        raise IndexError(f"adjacent swap position {i} outside 0..{p.n - 2}")
    _swap_positions(p, i, i + 1)


def apply_transposition(p: Permutation, a: int, b: int) -> None:
    """Exchange the labels at positions ``a`` and ``b`` in place."""
    n = p.n
    if not (0 <= a < n and 0 <= b < n):
        raise IndexError("transposition positions out of range")
    if a == b:
        raise ValueError("a transposition needs two distinct positions")
    _swap_positions(p, a, b)


def _swap_positions(p: Permutation, a: int, b: int) -> None:
    fwd, inv = p.forward, p.inverse
    x, y = fwd[a], fwd[b]
    fwd[a], fwd[b] = y, x
    inv[x], inv[y] = b, a


# -- counting kernels -----------------------------------------------------


@numba.njit(cache=True, nogil=True)
def _inversions_fenwick(fwd):
    n = fwd.shape[0]
    tree = np.zeros(n + 1, dtype=np.int64)
    total = 0
    # scan right to left; count labels already seen that are smaller
    for pos in range(n - 1, -1, -1):
        k = fwd[pos]
        s = 0
        while k > 0:
            s += tree[k]
            k -= k & (-k)
        total += s
        k = fwd[pos] + 1
        while k <= n:
            tree[k] += 1
            k += k & (-k)
    return total


@numba.njit(cache=True, nogil=True)
def _inversions_naive(fwd):
    n = fwd.shape[0]
    total = 0
    for i in range(n):
        for j in range(i + 1, n):
            if fwd[i] > fwd[j]:
                total += 1
    return total


@numba.njit(cache=True, nogil=True)
def _cycles(fwd):
    n = fwd.shape[0]
    seen = np.zeros(n, dtype=np.bool_)
    count = 0
    for start in range(n):
        if not seen[start]:
            count += 1
            j = start
            while not seen[j]:
                seen[j] = True
                j = fwd[j]
    return count


def inversion_count(p: Permutation) -> int:
    """Number of pairs ``i < j`` with ``p(i) > p(j)``, O(n log n)."""
    return int(_inversions_fenwick(p.forward))


def inversion_count_naive(p: Permutation) -> int:
    return int(_inversions_naive(p.forward))


def cycle_count(p: Permutation) -> int:
    return int(_cycles(p.forward))


def transposition_distance(p: Permutation) -> int:
    return p.n - cycle_count(p)


def descent_count(p: Permutation) -> int:
    """Number of positions ``i`` with ``p(i) > p(i + 1)``."""
    f = p.forward
    return int(np.count_nonzero(f[:-1] > f[1:]))


def riffle_distance_from_descents(des):
    """``ceil(log2(des + 1))`` computed exactly on integers (scalar or array)."""
    d = np.asarray(des, dtype=np.int64)
    if (d < 0).any():
        raise ValueError("descent counts are nonnegative")
    # bit_length(des) == ceil(log2(des + 1)) for des >= 0
    out = np.zeros_like(d)
    v = d.copy()
    while (v > 0).any():
        out += v > 0
        v >>= 1
    return int(out) if out.ndim == 0 else out


def riffle_distance(p: Permutation) -> int:
    return int(descent_count(p)).bit_length()
