import io
import math

import numpy as np
import pytest
from scipy import stats as sps

from walkdist import cubic_graph as cg
from walkdist.stats import bound_check, derive_stream


def biased_walk_law(k):
    """Exact law of the reflected (2/3, 1/3) walk after k steps."""
    p = np.zeros(k + 2)
    p[0] = 1.0
    for _ in range(k):
        q = np.zeros_like(p)
        q[1] += p[0]
        q[2:] += p[1:-1] * (2 / 3)
        q[:-2] += p[1:-1] * (1 / 3)
        p = q
    return p


def test_smallest_graph(rng):
    g = cg.generate(2, rng=rng)
    assert g.matching.size == 6 and g.is_valid()
    assert g.neighbors.shape == (2, 3)


def test_generate_rejects_odd(rng):
    for n in (0, 1, 3, 7):
        with pytest.raises(ValueError):
            cg.generate(n, rng=rng)


def test_involution_and_regularity(rng):
    for _ in range(1000):
        n = 2 * int(rng.integers(1, 60))
        g = cg.generate(n, rng=rng)
        m = g.matching
        assert np.array_equal(m[m], np.arange(3 * n))
        assert not (m == np.arange(3 * n)).any()
        # every vertex has three half-edge endpoints; loops count twice
        deg = np.bincount(g.edges().ravel(), minlength=n)
        assert (deg == 3).all()


def test_simple_fraction(rng):
    simple = np.mean([cg.generate(100, rng=rng).is_simple() for _ in range(10_000)])
    # asymptotically exp(-2) for cubic configuration graphs
    assert simple > 0.05
    assert abs(simple - math.exp(-2)) < 0.02


def test_simple_mode(rng):
    for _ in range(20):
        assert cg.generate(60, simple=True, rng=rng).is_simple()
    with pytest.raises(cg.SimpleGraphRetryError):
        # two vertices always carry a loop or a triple edge
        cg.generate(2, simple=True, rng=rng, max_tries=50)


def test_bfs_basic(rng):
    g = cg.generate(1000, rng=rng)
    lay = cg.bfs(g, 5)
    assert lay.dist[5] == 0
    assert lay.root == 5
    reach = lay.dist != cg.UNREACHABLE
    assert lay.level_sizes.sum() == reach.sum()
    for v, d in enumerate(lay.dist):
        if d >= 0:
            assert d in [x for x in range(len(lay.levels)) if v in lay.levels[x]]
    with pytest.raises(IndexError):
        cg.bfs(g, 1000)


def test_bfs_neighbours_differ_by_at_most_one(rng):
    for _ in range(50):
        g = cg.generate(500, rng=rng)
        lay = cg.bfs(g, 0)
        d = lay.dist
        nd = d[g.neighbors]
        ok = d >= 0
        assert (np.abs(nd[ok] - d[ok, None]) <= 1).all()
        sizes = lay.level_sizes
        caps = np.array([1] + [3 * 2 ** (l - 1) for l in range(1, sizes.size)])
        assert (sizes <= caps).all()


def test_bfs_disconnected():
    # two disjoint theta graphs on vertices {0,1} and {2,3}
    m = np.empty(12, dtype=np.int64)
    for a, b in ((0, 3), (1, 4), (2, 5), (6, 9), (7, 10), (8, 11)):
        m[a], m[b] = b, a
    g = cg.CubicGraph(4, m)
    assert g.is_valid()
    lay = cg.bfs(g, 0)
    assert lay.dist.tolist() == [0, 1, cg.UNREACHABLE, cg.UNREACHABLE]
    assert cg.diameter(g) == cg.UNREACHABLE


def test_diameter_small(rng):
    g = cg.generate(200, rng=rng)
    ecc = [cg.bfs(g, v).eccentricity for v in range(200)]
    if min(cg.bfs(g, v).dist.min() for v in range(3)) >= 0:
        assert cg.diameter(g) == max(ecc)
    with pytest.raises(ValueError):
        cg.diameter(cg.generate(cg.DIAMETER_MAX_N + 2, rng=rng))


def test_eccentricity_near_log2n(rng):
    n = 1 << 16
    ratio = np.mean([cg.bfs(cg.generate(n, rng=rng), 0).eccentricity for _ in range(30)]) / 16
    assert abs(ratio - 1) <= 0.15


def test_self_loop_vertex_is_bad():
    # vertex 1 carries a loop (half-edges 4, 5); 0-1, 0-2, 0-3, 2-3 double
    pairs = ((0, 3), (1, 6), (2, 9), (4, 5), (7, 10), (8, 11))
    m = np.empty(12, dtype=np.int64)
    for a, b in pairs:
        m[a], m[b] = b, a
    g = cg.CubicGraph(4, m)
    assert g.is_valid() and not g.is_simple()
    bad = cg.classify_bad_vertices(g, 0)
    assert bad[0] == 0
    # all three level-1 vertices lack two forward edges
    assert bad[1] == 3


def test_root_never_counted(rng):
    for _ in range(100):
        g = cg.generate(8, rng=rng)
        assert cg.classify_bad_vertices(g, 0)[0] == 0


def test_bad_vertex_bound(rng):
    n, graphs, levels = 1 << 14, 200, 8
    sizes = np.zeros(levels + 1)
    bad = np.zeros(levels + 1)
    for _ in range(graphs):
        g = cg.generate(n, rng=rng)
        lay = cg.bfs(g, 0)
        b = cg.classify_bad_vertices(g, 0, lay)
        k = min(levels + 1, b.size)
        bad[:k] += b[:k]
        sizes[:k] += lay.level_sizes[:k]
    failed = {}
    for l in range(1, levels + 1):
        ind = np.zeros(int(sizes[l]))
        ind[: int(bad[l])] = 1
        chk = bound_check("badv", {"level": l, "n": n}, ind)
        if not chk.passed:
            failed[l] = (round(chk.empirical, 5), round(chk.bound, 5))
    assert not failed, f"bad fraction above 2*2^l/n at levels {failed}"


def test_walk_zero_steps(rng):
    g = cg.generate(100, rng=rng)
    tr = cg.simulate_walk(g, 3, 0, [0], rng)
    assert tr.distances.tolist() == [0]


def test_walk_steps_change_distance_by_at_most_one(rng):
    g = cg.generate(2000, rng=rng)
    lay = cg.bfs(g, 0)
    tr = cg.simulate_walk(g, 0, 5000, np.arange(5001), rng, layers=lay)
    assert (np.abs(np.diff(tr.distances)) <= 1).all()
    assert tr.distances.max() <= lay.eccentricity
    with pytest.raises(ValueError):
        cg.simulate_walk(g, 1, 10, [10], rng, layers=lay)
    with pytest.raises(ValueError):
        cg.simulate_walk(g, 0, 10, [11], rng)


def test_walk_stays_on_loop():
    # two vertices joined once, each with a loop: the walk moves w.p. 1/3
    m = np.empty(6, dtype=np.int64)
    for a, b in ((0, 3), (1, 2), (4, 5)):
        m[a], m[b] = b, a
    g = cg.CubicGraph(2, m)
    tr = cg.simulate_walk(g, 0, 30000, np.arange(30001), np.random.default_rng(1))
    moves = np.abs(np.diff(tr.distances)).mean()
    assert abs(moves - 1 / 3) < 4 * math.sqrt(2 / 9 / 30000)


def test_biased_walk_mean(rng):
    k, m = 300, 20000
    pos = cg.biased_walk_reference(k, rng, size=m)[:, -1]
    law = biased_walk_law(k)
    exact = float(np.dot(np.arange(law.size), law))
    se = pos.std() / math.sqrt(m)
    assert abs(pos.mean() - exact) < 4 * se
    # the drift is 1/3; reflection adds the constant 4/3
    assert exact == pytest.approx(k / 3 + 4 / 3, abs=1e-6)
    assert abs(pos.mean() / (k / 3) - 1) < 0.02


def test_biased_walk_nonnegative(rng):
    pos = cg.biased_walk_reference(500, rng, size=200)
    assert (pos >= 0).all()
    assert (np.abs(np.diff(pos, axis=1)) == 1).all()
    assert cg.biased_walk_reference(0, rng).tolist() == [0]


def test_biased_walk_large_deviation(rng):
    # empirical tail P(X_k > 0.9k) against the exact law, then an
    # exponential envelope C e^{-alpha k} fitted to the exact tail
    ks = np.arange(10, 201, 10)
    tails = np.array([biased_walk_law(k)[np.arange(k + 2) > 0.9 * k].sum() for k in ks])
    m = 200_000
    pos = cg.biased_walk_reference(20, rng, size=m)
    for k in (10, 20):
        emp = np.mean(pos[:, k] > 0.9 * k)
        exact = tails[ks == k][0]
        assert abs(emp - exact) < 4 * math.sqrt(exact * (1 - exact) / m) + 1e-6
    slope, icpt = np.polyfit(ks, np.log(tails), 1)
    alpha = -slope
    # Chernoff rate of an up-step fraction above 0.95
    kl = 0.95 * math.log(0.95 / (2 / 3)) + 0.05 * math.log(0.05 / (1 / 3))
    assert alpha > 0
    assert abs(alpha - kl) < 0.02
    c = np.max(np.log(tails) + alpha * ks)
    assert (np.log(tails) <= c - alpha * ks + 1e-9).all()
    assert c < 3


def _ks_distance(a, b):
    grid = np.arange(0, max(a.max(), b.max()) + 2)
    fa = np.searchsorted(np.sort(a), grid, side="right") / a.size
    fb = np.searchsorted(np.sort(b), grid, side="right") / b.size
    return float(np.abs(fa - fb).max())


def _graph_vs_tree_ks(rng, ks, n=1 << 16, graphs=100, walks=20):
    kmax = max(ks)
    got = {k: [] for k in ks}
    for _ in range(graphs):
        g = cg.generate(n, rng=rng)
        lay = cg.bfs(g, 0)
        for _ in range(walks):
            tr = cg.simulate_walk(g, 0, kmax, ks, rng, layers=lay)
            for k, d in zip(ks, tr.distances):
                got[k].append(d)
    out = {}
    for k in ks:
        exact = biased_walk_law(k)
        ref = rng.choice(exact.size, size=20000, p=exact / exact.sum())
        out[k] = _ks_distance(np.array(got[k]), ref)
    return out


def test_tree_regime_short_walks(rng):
    # well inside the tree regime the graph walk is the biased walk
    for k, d in _graph_vs_tree_ks(rng, [4, 8, 12, 16]).items():
        assert d < 0.05, (k, d)


def test_tree_regime_up_to_twice_log2n(rng):
    # stated range k <= 2 log2 n at n = 2^16
    ks = list(range(4, 33, 4))
    dists = _graph_vs_tree_ks(rng, ks)
    bad = {k: round(d, 3) for k, d in dists.items() if d >= 0.05}
    assert not bad, f"KS distance >= 0.05 at steps {bad}"


def test_export_edge_list(rng):
    g = cg.generate(10, rng=rng)
    buf = io.StringIO()
    lines = cg.export_edge_list(g, buf)
    rows = [tuple(map(int, ln.split())) for ln in buf.getvalue().splitlines()]
    assert lines == len(rows) == 15
    deg = np.zeros(10, dtype=int)
    for u, v in rows:
        deg[u] += 1
        deg[v] += 1
    assert (deg == 3).all()
