import itertools
from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walkdist import perm_core as pc
from walkdist.perm_core import Permutation


def perms(max_n=12):
    return st.integers(1, max_n).flatmap(lambda n: st.permutations(list(range(n))))


def cycles_brute(values):
    seen, count = set(), 0
    for s in range(len(values)):
        if s in seen:
            continue
        count += 1
        j = s
        while j not in seen:
            seen.add(j)
            j = values[j]
    return count


def test_identity():
    assert pc.identity(3).forward.tolist() == [0, 1, 2]
    assert pc.inversion_count(pc.identity(10)) == 0
    assert pc.cycle_count(pc.identity(5)) == 5
    assert pc.transposition_distance(pc.identity(7)) == 0
    with pytest.raises(ValueError):
        pc.identity(0)


def test_rejects_non_bijection():
    with pytest.raises(ValueError):
        Permutation([0, 0, 1])
    with pytest.raises(ValueError):
        Permutation([0, 3, 1])


def test_adjacent_swap_basic():
    p = pc.identity(3)
    pc.apply_adjacent_swap(p, 0)
    assert p.forward.tolist() == [1, 0, 2]
    assert p.is_consistent()
    pc.apply_adjacent_swap(p, 0)
    assert p == pc.identity(3)
    for bad in (-1, 2):
        with pytest.raises(IndexError):
            pc.apply_adjacent_swap(p, bad)


def test_transposition_basic():
    p = pc.identity(4)
    pc.apply_transposition(p, 0, 1)
    assert pc.transposition_distance(p) == 1
    pc.apply_transposition(p, 0, 1)
    assert pc.transposition_distance(p) == 0
    with pytest.raises(ValueError):
        pc.apply_transposition(p, 2, 2)


def test_inversion_examples():
    assert pc.inversion_count(Permutation([1, 0, 2])) == 1
    assert pc.inversion_count(Permutation([5, 4, 3, 2, 1, 0])) == 15
    assert pc.inversion_count_naive(pc.identity(8)) == 0
    assert pc.inversion_count_naive(Permutation([2, 0, 1])) == 2


def test_three_cycle():
    p = Permutation([1, 2, 0])
    assert pc.cycle_count(p) == 1
    assert pc.transposition_distance(p) == 2


def test_descents_and_riffle_distance():
    assert pc.descent_count(pc.identity(6)) == 0
    assert pc.riffle_distance(pc.identity(6)) == 0
    assert pc.descent_count(Permutation([4, 3, 2, 1, 0])) == 4
    assert pc.descent_count(Permutation([0, 2, 1])) == 1
    # ceil(log2(Des + 1)) for Des = 0..8
    assert pc.riffle_distance_from_descents(np.arange(9)).tolist() == [0, 1, 2, 2, 3, 3, 3, 3, 4]
    for des, d in ((1, 1), (2, 2), (3, 2)):
        assert pc.riffle_distance_from_descents(des) == d


@pytest.mark.parametrize("n", range(1, 9))
def test_inversions_exhaustive(n):
    for values in itertools.permutations(range(n)):
        p = Permutation(values)
        assert pc.inversion_count(p) == pc.inversion_count_naive(p)


def test_inversions_random_large(nprng):
    for _ in range(1000):
        n = int(nprng.integers(1, 65))
        p = Permutation(nprng.permutation(n))
        assert pc.inversion_count(p) == pc.inversion_count_naive(p)


@given(perms(), st.data())
def test_adjacent_swap_changes_inversions_by_one(values, data):
    n = len(values)
    if n < 2:
        return
    p = Permutation(values)
    i = data.draw(st.integers(0, n - 2))
    before = pc.inversion_count_naive(p)
    pc.apply_adjacent_swap(p, i)
    assert abs(pc.inversion_count_naive(p) - before) == 1
    assert p.is_consistent()


@given(perms(), st.data())
def test_transposition_cycle_rule(values, data):
    n = len(values)
    if n < 2:
        return
    p = Permutation(values)
    a = data.draw(st.integers(0, n - 1))
    b = data.draw(st.integers(0, n - 1).filter(lambda x: x != a))
    # a, b share a cycle iff b is reached from a under forward
    j, same = values[a], False
    while j != a:
        if j == b:
            same = True
        j = values[j]
    before = cycles_brute(values)
    pc.apply_transposition(p, a, b)
    after = cycles_brute(p.forward.tolist())
    assert after - before == (1 if same else -1)
    assert pc.cycle_count(p) == after
    assert p.is_consistent()


@given(perms(10))
def test_cycle_count_matches_brute(values):
    assert pc.cycle_count(Permutation(values)) == cycles_brute(values)


@pytest.mark.parametrize("n", range(1, 7))
def test_transposition_distance_is_cayley_word_length(n):
    # BFS over S_n generated by all transpositions
    start = tuple(range(n))
    dist = {start: 0}
    queue = deque([start])
    pairs = list(itertools.combinations(range(n), 2))
    while queue:
        s = queue.popleft()
        for a, b in pairs:
            t = list(s)
            t[a], t[b] = t[b], t[a]
            t = tuple(t)
            if t not in dist:
                dist[t] = dist[s] + 1
                queue.append(t)
    assert len(dist) == len(list(itertools.permutations(range(n))))
    for s, d in dist.items():
        assert pc.transposition_distance(Permutation(s)) == d


@pytest.mark.parametrize("n", range(1, 7))
def test_inversions_are_adjacent_word_length(n):
    start = tuple(range(n))
    dist = {start: 0}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for i in range(n - 1):
            t = list(s)
            t[i], t[i + 1] = t[i + 1], t[i]
            t = tuple(t)
            if t not in dist:
                dist[t] = dist[s] + 1
                queue.append(t)
    for s, d in dist.items():
        assert pc.inversion_count(Permutation(s)) == d


def test_bijection_survives_many_operations(nprng):
    p = pc.identity(50)
    for _ in range(5000):
        if nprng.random() < 0.5:
            pc.apply_adjacent_swap(p, int(nprng.integers(0, 49)))
        else:
            a, b = nprng.choice(50, size=2, replace=False)
            pc.apply_transposition(p, int(a), int(b))
    assert p.is_consistent()
    assert sorted(p.forward.tolist()) == list(range(50))


def test_uniform_permutation_mean_inversions(nprng):
    n, m = 30, 20000
    inv = np.array([pc.inversion_count(Permutation(nprng.permutation(n))) for _ in range(m)])
    expected = n * (n - 1) / 4
    se = inv.std(ddof=1) / np.sqrt(m)
    assert abs(inv.mean() - expected) < 4 * se
