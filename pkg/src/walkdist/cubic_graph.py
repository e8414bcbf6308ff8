"""Random 3-regular multigraphs from the configuration model.

Vertex ``v`` owns the half-edges (mini-vertices) ``3v, 3v+1, 3v+2``; a
uniform perfect matching of the ``3n`` half-edges defines the edges, and
``matching[3v + i] // 3`` is the i-th neighbour of ``v``. Self-loops and
multi-edges are kept unless ``simple=True`` rejects the whole matching.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, TextIO

import numpy as np

from .stats import as_generator
from .walkers import DistanceTrajectory, Model, _seed_info

__all__ = [
    "CubicGraph",
    "BfsLayers",
    "SimpleGraphRetryError",
    "UNREACHABLE",
    "generate",
    "bfs",
    "classify_bad_vertices",
    "simulate_walk",
    "biased_walk_reference",
    "diameter",
    "export_edge_list",
]

UNREACHABLE = -1
SIMPLE_RETRY_CAP = 10_000
DIAMETER_MAX_N = 1 << 12


class SimpleGraphRetryError(RuntimeError):
    pass


@dataclass(frozen=True)
class CubicGraph:
    n: int
    matching: np.ndarray

    @property
    def neighbors(self) -> np.ndarray:
        """(n, 3) table of neighbour vertices, repeated for multi-edges."""
        return (self.matching // 3).reshape(self.n, 3)

    def neighbor(self, v: int, i: int) -> int:
        return int(self.matching[3 * v + i] // 3)

    def is_valid(self) -> bool:
        m = self.matching
        idx = np.arange(3 * self.n)
        return bool(m.size == 3 * self.n and np.array_equal(m[m], idx) and not (m == idx).any())

    def edges(self) -> np.ndarray:
        """One row ``(u, v)`` per matched pair; loops once, multi-edges repeated."""
        j = np.arange(3 * self.n)
        keep = j < self.matching
        return np.stack([j[keep] // 3, self.matching[keep] // 3], axis=1)

    def is_simple(self) -> bool:
        e = self.edges()
        if (e[:, 0] == e[:, 1]).any():
            return False
        key = np.sort(e, axis=1)
        return np.unique(key, axis=0).shape[0] == key.shape[0]


def _random_matching(n: int, gen: np.random.Generator) -> np.ndarray:
    order = gen.permutation(3 * n)
    m = np.empty(3 * n, dtype=np.int64)
    a, b = order[0::2], order[1::2]
    m[a] = b
    m[b] = a
    return m


def generate(n: int, simple: bool = False, rng=None, max_tries: int = SIMPLE_RETRY_CAP) -> CubicGraph:
    """Uniform configuration-model cubic multigraph on ``n`` (even) vertices.

    With ``simple=True`` whole matchings are redrawn until the graph has no
    loops or multi-edges, which samples the uniform simple cubic graph.
    """
    if n < 2 or n % 2:
        raise ValueError("n must be even and >= 2")
    gen = as_generator(rng) if rng is not None else np.random.default_rng()
    for _ in range(max_tries if simple else 1):
        g = CubicGraph(n, _random_matching(n, gen))
        if not simple or g.is_simple():
            return g
    raise SimpleGraphRetryError(f"no simple graph after {max_tries} tries at n={n}")


@dataclass
class BfsLayers:
    root: int
    dist: np.ndarray
    levels: list = field(repr=False)

    @property
    def eccentricity(self) -> int:
        return len(self.levels) - 1

    @property
    def level_sizes(self) -> np.ndarray:
        return np.array([lv.size for lv in self.levels])


def bfs(g: CubicGraph, root: int) -> BfsLayers:
    """Graph distances from ``root``; unreachable vertices get ``UNREACHABLE``."""
    if not 0 <= root < g.n:
        raise IndexError("root out of range")
    nb = g.neighbors
    dist = np.full(g.n, UNREACHABLE, dtype=np.int64)
    dist[root] = 0
    frontier = np.array([root])
    levels = [frontier]
    d = 0
    while True:
        cand = np.unique(nb[frontier].ravel())
        cand = cand[dist[cand] == UNREACHABLE]
        if cand.size == 0:
            break
        d += 1
        dist[cand] = d
        levels.append(cand)
        frontier = cand
    return BfsLayers(root, dist, levels)


def classify_bad_vertices(g: CubicGraph, root: int, layers: Optional[BfsLayers] = None) -> np.ndarray:
    """Number of bad vertices at each level ``l >= 1`` (index 0 is the root, always 0).

    A vertex at level l is good when exactly one of its half-edges leads to
    level l-1 and two lead to level l+1; otherwise it is bad.
    """
    layers = layers if layers is not None else bfs(g, root)
    dist = layers.dist
    nd = dist[g.neighbors]
    own = dist[:, None]
    back = np.count_nonzero(nd == own - 1, axis=1)
    fwd = np.count_nonzero(nd == own + 1, axis=1)
    bad = (dist >= 1) & ~((back == 1) & (fwd == 2))
    counts = np.bincount(dist[bad], minlength=layers.eccentricity + 1)
    return counts[: layers.eccentricity + 1]


def simulate_walk(g: CubicGraph, root: int, steps: int, query_steps, rng,
                  layers: Optional[BfsLayers] = None) -> DistanceTrajectory:
    """Discrete walk from ``root`` along a uniform half-edge each step.

    A loop half-edge keeps the walker in place. Distances are read from a
    BFS from ``root`` (pass ``layers`` to reuse one).
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    q = np.asarray(query_steps, dtype=np.int64).ravel()
    if q.size == 0 or (q < 0).any() or (q > steps).any() or (np.diff(q) < 0).any():
        raise ValueError("query_steps must be sorted within 0..steps")
    layers = layers if layers is not None else bfs(g, root)
    if layers.root != root:
        raise ValueError("layers were computed from a different root")
    gen = as_generator(rng)
    choice = gen.integers(0, 3, size=steps)
    m = g.matching
    pos = np.empty(steps + 1, dtype=np.int64)
    v = root
    pos[0] = v
    for k in range(steps):
        v = m[3 * v + choice[k]] // 3
        pos[k + 1] = v
    return DistanceTrajectory(Model.CUBIC_GRAPH, g.n, q.astype(float), layers.dist[pos[q]],
                              _seed_info(rng), q)


def biased_walk_reference(steps: int, rng, size: Optional[int] = None) -> np.ndarray:
    """(2/3, 1/3) walk on the nonnegative integers started at 0.

    From 0 the walk always steps to 1 (the root of the cubic tree has three
    forward edges). Returns positions at times 0..steps, one row per walker
    when ``size`` is given.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    gen = as_generator(rng)
    rows = 1 if size is None else int(size)
    up = gen.random((rows, steps)) < 2.0 / 3.0
    pos = np.zeros((rows, steps + 1), dtype=np.int64)
    cur = np.zeros(rows, dtype=np.int64)
    for k in range(steps):
        cur = np.where((cur == 0) | up[:, k], cur + 1, cur - 1)
        pos[:, k + 1] = cur
    return pos[0] if size is None else pos


def diameter(g: CubicGraph) -> int:
    """Exact diameter by BFS from every vertex (``n <= 4096``)."""
    if g.n > DIAMETER_MAX_N:
        raise ValueError(f"all-pairs diameter is limited to n <= {DIAMETER_MAX_N}")
    best = 0
    for v in range(g.n):
        lay = bfs(g, v)
        if (lay.dist == UNREACHABLE).any():
            return UNREACHABLE
        best = max(best, lay.eccentricity)
    return best


def export_edge_list(g: CubicGraph, fh: TextIO) -> int:
    """Write ``u v`` lines, one per edge; returns the number of lines."""
    e = g.edges()
    for u, v in e:
        fh.write(f"{u} {v}\n")
    return int(e.shape[0])
