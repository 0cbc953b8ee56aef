"""The numba and numpy kernels must agree bit for bit."""
import numpy as np
import pytest

from chipdist import _kernels_numba as nb
from chipdist import _kernels_numpy as npk
from chipdist.chips import pigeonhole_threshold, step_bound
from chipdist.graphs import bidirect, random_eulerian_digraph, random_graph


def _hosts(seed, count=30):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(2, 6))
        if i % 2:
            out.append(bidirect(random_graph(n, rng, max_mult=2)))
        else:
            out.append(random_eulerian_digraph(n, int(rng.integers(1, 4)), n, rng))
    return out


def _same(a, b):
    assert len(a) == len(b)
    for u, v in zip(a, b):
        if isinstance(u, np.ndarray):
            np.testing.assert_array_equal(u, v)
        else:
            assert u == v


@pytest.mark.parametrize("stop", [False, True])
def test_simulate_agrees(stop):
    rng = np.random.default_rng(1)
    for d in _hosts(0):
        for _ in range(5):
            chips = rng.integers(0, 4, size=d.n).astype(np.int64)
            cap = int(rng.integers(0, 60))
            _same(nb.simulate(chips, d.arc_matrix, d.out_degrees, cap, stop),
                  npk.simulate(chips, d.arc_matrix, d.out_degrees, cap, stop))


def test_simulate_does_not_mutate_input():
    d = _hosts(3, 1)[0]
    chips = np.full(d.n, 5, dtype=np.int64)
    for k in (nb, npk):
        k.simulate(chips, d.arc_matrix, d.out_degrees, 10, False)
        assert np.all(chips == 5)


def test_level_search_agrees():
    for d in _hosts(2, 20):
        x = np.zeros(d.n, dtype=np.int64)
        for k in range(0, 4):
            a = nb.first_nonterminating_at_level(x, d.arc_matrix, d.out_degrees, k,
                                                 step_bound(d), pigeonhole_threshold(d))
            b = npk.first_nonterminating_at_level(x, d.arc_matrix, d.out_degrees, k,
                                                  step_bound(d), pigeonhole_threshold(d))
            _same(a, b)


def test_q_reduce_agrees():
    rng = np.random.default_rng(4)
    for _ in range(200):
        g = random_graph(int(rng.integers(1, 6)), rng, max_mult=3)
        f = rng.integers(-6, 7, size=g.n).astype(np.int64)
        q = int(rng.integers(g.n))
        _same(nb.q_reduce(f, g.adjacency, q), npk.q_reduce(f, g.adjacency, q))


def test_minfas_agrees():
    for d in _hosts(5, 40):
        _same(nb.minfas_dp(d.arc_matrix), npk.minfas_dp(d.arc_matrix))


def test_colex_enumeration_covers_level():
    # every multiset of size k over n vertices appears exactly once
    for n, k in [(1, 3), (3, 0), (3, 2), (4, 3)]:
        c = np.zeros(k, dtype=np.int64)
        seen = set()
        while True:
            seen.add(tuple(np.bincount(c, minlength=n)) if k else (0,) * n)
            if not nb._next_colex(c, n):
                break
        from math import comb
        assert len(seen) == comb(n + k - 1, k)


@pytest.mark.parametrize("flag, expected", [("1", "numpy"), ("true", "numpy"), ("0", "numba"), ("", "numba")])
def test_env_flag_selects_backend(flag, expected):
    import os
    import subprocess
    import sys
    env = {**os.environ, "CHIPDIST_DISABLE_NUMBA": flag}
    out = subprocess.run([sys.executable, "-c", "import chipdist; print(chipdist.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == expected
