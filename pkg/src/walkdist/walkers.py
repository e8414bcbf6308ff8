"""Simulators for the distance-from-start process.

Continuous-time walks are Poissonized: one Poisson draw fixes the number of
moves up to the last query time, and binomial splitting (the law of the
order statistics of uniform event times) maps every query time to an event
index. Distances are updated by +-1 per move and only recorded at query
times; every ``recount_every`` moves the distance is recomputed from
scratch and a mismatch raises ``DriftError``.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numba
import numpy as np

from .perm_core import Permutation, _cycles, _inversions_fenwick, riffle_distance_from_descents
from .stats import RngStream, as_generator, derive_stream, stream_id_for

__all__ = [
    "Model",
    "DistanceTrajectory",
    "DriftError",
    "poissonize",
    "event_counts",
    "simulate_hypercube",
    "simulate_random_transpositions",
    "simulate_adjacent_transpositions",
    "simulate_riffle",
    "a_shuffle",
    "replicate",
]

CHUNK = 1 << 22
RECOUNT_EVERY = 1 << 16


class Model(str, enum.Enum):
    HYPERCUBE = "hypercube"
    RANDOM_TRANSPOSITION = "transposition"
    ADJACENT_TRANSPOSITION = "adjacent"
    CUBIC_GRAPH = "cubic"
    RIFFLE = "riffle"

    @property
    def code(self) -> int:
        return list(Model).index(self)


class DriftError(RuntimeError):
    """Incrementally tracked distance disagrees with a full recount."""


@dataclass
class DistanceTrajectory:
    model: Model
    n: int
    query_times: np.ndarray
    distances: np.ndarray
    seed_info: Optional[tuple] = None
    event_counts: Optional[np.ndarray] = None
    descents: Optional[np.ndarray] = None
    final_state: Optional[np.ndarray] = field(default=None, repr=False)

    def normalized(self, scale: float) -> np.ndarray:
        return self.distances / scale


def _seed_info(rng) -> Optional[tuple]:
    if isinstance(rng, RngStream):
        return (rng.master_seed, rng.stream_id)
    return None


def _check_times(query_times) -> np.ndarray:
    q = np.asarray(query_times, dtype=float).ravel()
    if q.size == 0:
        raise ValueError("query_times is empty")
    if not np.all(np.isfinite(q)) or (q < 0).any():
        raise ValueError("query_times must be finite and nonnegative")
    if (np.diff(q) < 0).any():
        raise ValueError("query_times must be sorted")
    return q


def poissonize(rate: float, horizon: float, rng) -> int:
    """Number of events of a rate-``rate`` Poisson clock on ``[0, horizon]``.

    A zero horizon is an empty interval and gives 0 events.
    """
    if not rate > 0:
        raise ValueError("rate must be positive")
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    if horizon == 0:
        return 0
    return int(as_generator(rng).poisson(rate * horizon))


def event_counts(query_times, rate: float, rng) -> np.ndarray:
    """Cumulative number of events at each query time, sharing one clock."""
    q = _check_times(query_times)
    gen = as_generator(rng)
    horizon = float(q[-1])
    remaining = poissonize(rate, horizon, gen)
    out = np.zeros(q.size, dtype=np.int64)
    done, prev = 0, 0.0
    for k, tq in enumerate(q):
        span = horizon - prev
        if remaining > 0 and span > 0 and tq > prev:
            take = int(gen.binomial(remaining, min(1.0, (tq - prev) / span)))
            done += take
            remaining -= take
            prev = float(tq)
        out[k] = done
    return out


# -- kernels --------------------------------------------------------------
#
# acc[0]: current distance, acc[1]: next record slot.
# Return 0 on success, otherwise 1 + number of completed moves at the
# failed recount.


@numba.njit(cache=True, nogil=True)
def _hypercube_kernel(bits, coords, offset, record_at, out, acc, recount_every):
    dist = acc[0]
    rec = acc[1]
    nrec = record_at.shape[0]
    m = coords.shape[0]
    for e in range(m):
        while rec < nrec and record_at[rec] == offset + e:
            out[rec] = dist
            rec += 1
        c = coords[e]
        dist += 1 - 2 * np.int64(bits[c])
        bits[c] ^= 1
        done = offset + e + 1
        if done % recount_every == 0:
            full = 0
            for b in bits:
                full += b
            if full != dist:
                acc[0] = dist
                acc[1] = rec
                return done + 1
    while rec < nrec and record_at[rec] == offset + m:
        out[rec] = dist
        rec += 1
    acc[0] = dist
    acc[1] = rec
    return 0


@numba.njit(cache=True, nogil=True)
def _same_cycle(fwd, a, b):
    # walk both cycles in lockstep; stops after min(cycle lengths) steps
    pa = a
    pb = b
    while True:
        pa = fwd[pa]
        if pa == b:
            return True
        if pa == a:
            return False
        pb = fwd[pb]
        if pb == a:
            return True
        if pb == b:
            return False


@numba.njit(cache=True, nogil=True)
def _transposition_kernel(fwd, first, second, offset, record_at, out, acc, recount_every):
    n = fwd.shape[0]
    dist = acc[0]
    rec = acc[1]
    nrec = record_at.shape[0]
    m = first.shape[0]
    for e in range(m):
        while rec < nrec and record_at[rec] == offset + e:
            out[rec] = dist
            rec += 1
        a = np.int64(first[e])
        b = np.int64(second[e])
        if b >= a:
            b += 1
        if _same_cycle(fwd, a, b):
            dist -= 1
        else:
            dist += 1
        x = fwd[a]
        fwd[a] = fwd[b]
        fwd[b] = x
        done = offset + e + 1
        if done % recount_every == 0:
            if n - _cycles(fwd) != dist:
                acc[0] = dist
                acc[1] = rec
                return done + 1
    while rec < nrec and record_at[rec] == offset + m:
        out[rec] = dist
        rec += 1
    acc[0] = dist
    acc[1] = rec
    return 0


@numba.njit(cache=True, nogil=True)
def _adjacent_kernel(fwd, moves, offset, record_at, out, acc, recount_every):
    dist = acc[0]
    rec = acc[1]
    nrec = record_at.shape[0]
    m = moves.shape[0]
    for e in range(m):
        while rec < nrec and record_at[rec] == offset + e:
            out[rec] = dist
            rec += 1
        i = moves[e]
        x = fwd[i]
        y = fwd[i + 1]
        if x < y:
            dist += 1
        else:
            dist -= 1
        fwd[i] = y
        fwd[i + 1] = x
        done = offset + e + 1
        if done % recount_every == 0:
            if _inversions_fenwick(fwd) != dist:
                acc[0] = dist
                acc[1] = rec
                return done + 1
    while rec < nrec and record_at[rec] == offset + m:
        out[rec] = dist
        rec += 1
    acc[0] = dist
    acc[1] = rec
    return 0


def _drive(kernel, state, draw: Callable[[int], tuple], record_at: np.ndarray,
           recount_every: int, label: str) -> np.ndarray:
    out = np.zeros(record_at.size, dtype=np.int64)
    acc = np.zeros(2, dtype=np.int64)
    total = int(record_at[-1])
    done = 0
    while True:
        m = min(CHUNK, total - done)
        status = kernel(*state, *draw(m), done, record_at, out, acc, recount_every)
        if status:
            raise DriftError(f"{label}: incremental distance drifted at move {status - 1}")
        done += m
        if done >= total:
            break
    return out


def _recount(recount_every: int) -> int:
    if recount_every < 1:
        raise ValueError("recount_every must be >= 1")
    return int(recount_every)


def simulate_hypercube(n: int, query_times, rng, recount_every: int = RECOUNT_EVERY) -> DistanceTrajectory:
    """Rate-1 walk on {0,1}^n flipping one uniform coordinate per jump.

    The distance is the Hamming weight of the displacement; ``final_state``
    holds the coordinates at the last query time.
    """
    if n < 1:
        raise ValueError("hypercube needs n >= 1")
    q = _check_times(query_times)
    gen = as_generator(rng)
    record_at = event_counts(q, 1.0, gen)
    bits = np.zeros(n, dtype=np.uint8)
    dist = _drive(_hypercube_kernel, (bits,),
                  lambda m: (gen.integers(0, n, size=m, dtype=np.uint32),),
                  record_at, _recount(recount_every), "hypercube")
    return DistanceTrajectory(Model.HYPERCUBE, n, q, dist, _seed_info(rng), record_at,
                              final_state=bits)


def simulate_random_transpositions(n: int, query_times, rng,
                                   recount_every: int = RECOUNT_EVERY) -> DistanceTrajectory:
    """Rate-1 walk on S_n by uniformly random transpositions ``a != b``.

    The distance ``n - #cycles`` moves by -1 when ``a`` and ``b`` share a
    cycle (it splits) and by +1 otherwise (two cycles merge).
    """
    if n < 2:
        raise ValueError("random transpositions need n >= 2")
    q = _check_times(query_times)
    gen = as_generator(rng)
    record_at = event_counts(q, 1.0, gen)
    fwd = np.arange(n, dtype=np.int64)

    def draw(m):
        return (gen.integers(0, n, size=m, dtype=np.uint32),
                gen.integers(0, n - 1, size=m, dtype=np.uint32))

    dist = _drive(_transposition_kernel, (fwd,), draw, record_at,
                  _recount(recount_every), "random transpositions")
    return DistanceTrajectory(Model.RANDOM_TRANSPOSITION, n, q, dist, _seed_info(rng),
                              record_at, final_state=fwd)


def simulate_adjacent_transpositions(n: int, query_times, rng,
                                     recount_every: int = RECOUNT_EVERY) -> DistanceTrajectory:
    """Rate-1 walk on S_n swapping a uniform adjacent pair ``(i, i+1)``.

    The distance is the inversion count, moving by exactly +-1 per swap.
    ``final_state`` holds the labels by position at the last query time.
    """
    if n < 2:
        raise ValueError("adjacent transpositions need n >= 2")
    q = _check_times(query_times)
    gen = as_generator(rng)
    record_at = event_counts(q, 1.0, gen)
    fwd = np.arange(n, dtype=np.int64)
    dist = _drive(_adjacent_kernel, (fwd,),
                  lambda m: (gen.integers(0, n - 1, size=m, dtype=np.uint32),),
                  record_at, _recount(recount_every), "adjacent transpositions")
    return DistanceTrajectory(Model.ADJACENT_TRANSPOSITION, n, q, dist, _seed_info(rng),
                              record_at, final_state=fwd)


# -- riffle shuffles ------------------------------------------------------


@numba.njit(cache=True, nogil=True)
def _gsr_interleave(deck, out, cut, u):
    # drop the next card from a packet with probability proportional to its size
    n = deck.shape[0]
    left = cut
    right = n - cut
    li = 0
    ri = cut
    for k in range(n):
        if u[k] * (left + right) < left:
            out[k] = deck[li]
            li += 1
            left -= 1
        else:
            out[k] = deck[ri]
            ri += 1
            right -= 1


def _descents_of_positions(deck: np.ndarray) -> int:
    # descents of the position-of-label permutation sigma = deck^{-1}
    pos = np.empty_like(deck)
    pos[deck] = np.arange(deck.size)
    return int(np.count_nonzero(pos[:-1] > pos[1:]))


def simulate_riffle(n: int, shuffles: int, rng) -> DistanceTrajectory:
    """Repeated Gilbert-Shannon-Reeds shuffles of an ordered deck of ``n`` cards.

    Each shuffle cuts at Binomial(n, 1/2) and interleaves the two packets.
    ``sigma_r`` maps each card to its position after ``r`` shuffles, so one
    shuffle leaves at most one descent. ``descents[r]`` is Des(sigma_r) and
    ``distances[r]`` is ``ceil(log2(Des + 1))``, for r = 0..shuffles.
    """
    if n < 1:
        raise ValueError("riffle needs n >= 1")
    if shuffles < 0:
        raise ValueError("shuffles must be nonnegative")
    gen = as_generator(rng)
    deck = np.arange(n, dtype=np.int64)
    buf = np.empty_like(deck)
    des = np.zeros(shuffles + 1, dtype=np.int64)
    for r in range(1, shuffles + 1):
        cut = int(gen.binomial(n, 0.5))
        _gsr_interleave(deck, buf, cut, gen.random(n))
        deck, buf = buf, deck
        des[r] = _descents_of_positions(deck)
    return DistanceTrajectory(Model.RIFFLE, n, np.arange(shuffles + 1, dtype=float),
                              riffle_distance_from_descents(des), _seed_info(rng),
                              np.arange(shuffles + 1), descents=des, final_state=deck)


def a_shuffle(n: int, a: int, rng) -> Permutation:
    """Position-of-card permutation after one ``a``-shuffle of an ordered deck.

    An ``a``-shuffle cuts into ``a`` multinomial packets and interleaves them
    uniformly; ``r`` GSR shuffles are one ``2^r``-shuffle. Each position
    receives an iid uniform packet label and sigma lists the positions packet
    by packet, so sigma is a concatenation of ``a`` increasing runs.
    """
    if n < 1 or a < 1:
        raise ValueError("a_shuffle needs n >= 1 and a >= 1")
    labels = as_generator(rng).integers(0, a, size=n)
    return Permutation(np.argsort(labels, kind="stable"))


# -- replica fan-out ------------------------------------------------------


def replicate(task: Callable[[RngStream], object], replicas: int, master_seed: int,
              model: Model, n: int, workers: int = 1, first_replica: int = 0) -> List[object]:
    """Run ``task`` on one private stream per replica, results in replica order."""
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    streams = [derive_stream(master_seed, stream_id_for(Model(model).code, n, first_replica + r))
               for r in range(replicas)]
    if workers <= 1:
        return [task(s) for s in streams]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, streams))
