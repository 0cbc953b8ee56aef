"""Pure-numpy kernels; same contracts as ``_kernels_numba``.

Selected with ``CHIPDIST_DISABLE_NUMBA=1``.  Per-step work is vectorised,
the outer loops stay in Python, so these are much slower on long games.
"""
import numpy as np

TERMINATED = 0
ALL_FIRED = 1
CAP_REACHED = 2


def simulate(chips, arcs, outdeg, cap, stop_when_all_fired):
    x = np.array(chips, dtype=np.int64)
    n = x.shape[0]
    odo = np.zeros(n, dtype=np.int64)
    last = np.zeros(n, dtype=np.int64)
    steps = 0
    while True:
        if stop_when_all_fired and odo.all():
            return ALL_FIRED, steps, x, odo, last
        active = np.flatnonzero(x >= outdeg)
        if active.size == 0:
            return TERMINATED, steps, x, odo, last
        if steps >= cap:
            return CAP_REACHED, steps, x, odo, last
        v = active[0]
        x[v] -= outdeg[v]
        x += arcs[v]
        steps += 1
        odo[v] += 1
        last[v] = steps


def _next_colex(c, n):
    k = len(c)
    for i in range(k):
        top = c[i + 1] if i + 1 < k else n - 1
        if c[i] < top:
            c[i] += 1
            c[:i] = 0
            return True
    return False


def first_nonterminating_at_level(x, arcs, outdeg, k, bound, pigeonhole):
    x = np.asarray(x, dtype=np.int64)
    n = x.shape[0]
    total = int(x.sum())
    c = np.zeros(k, dtype=np.int64)
    steps_used = 0
    while True:
        y = np.bincount(c, minlength=n).astype(np.int64)
        if total + k > pigeonhole:
            return y, steps_used
        status, steps, _, _, _ = simulate(x + y, arcs, outdeg, bound + 1, True)
        steps_used += steps
        if status != TERMINATED:
            return y, steps_used
        if not _next_colex(c, n):
            break
    y = np.zeros(n, dtype=np.int64)
    y[0] = -1
    return y, steps_used


def _bfs_levels(adj, q):
    n = adj.shape[0]
    level = np.full(n, -1, dtype=np.int64)
    level[q] = 0
    frontier = np.zeros(n, dtype=bool)
    frontier[q] = True
    d = 0
    while frontier.any():
        d += 1
        reach = (adj[frontier] > 0).any(axis=0) & (level < 0)
        level[reach] = d
        frontier = reach
    return level


def q_reduce(f, adj, q):
    g = np.array(f, dtype=np.int64)
    steps = 0
    level = _bfs_levels(adj, q)
    for r in range(int(level.max()) - 1, -1, -1):
        ball = level <= r
        ring = (level == r + 1) & (g < 0)
        if not ring.any():
            continue
        e = adj[np.ix_(ring, ball)].sum(axis=1)
        times = int(((-g[ring] + e - 1) // e).max())
        outside = ~ball
        g[ball] -= times * adj[np.ix_(ball, outside)].sum(axis=1)
        g[outside] += times * adj[np.ix_(outside, ball)].sum(axis=1)
        steps += times

    n = g.shape[0]
    while True:
        burnt = np.zeros(n, dtype=bool)
        burnt[q] = True
        while True:
            e = adj[:, burnt].sum(axis=1)
            catch = ~burnt & (g < e)
            if not catch.any():
                break
            burnt |= catch
        if burnt.all():
            return g, steps
        unburnt = ~burnt
        e = adj[np.ix_(unburnt, burnt)].sum(axis=1)
        times = int((g[unburnt][e > 0] // e[e > 0]).min())
        g[unburnt] -= times * e
        g[burnt] += times * adj[np.ix_(burnt, unburnt)].sum(axis=1)
        steps += times


def minfas_dp(arcs):
    arcs = np.asarray(arcs, dtype=np.int64)
    n = arcs.shape[0]
    size = 1 << n
    subsets = np.arange(size, dtype=np.int64)
    popcount = np.zeros(size, dtype=np.int64)
    for u in range(n):
        popcount += (subsets >> u) & 1
    big = np.iinfo(np.int64).max // 2
    dp = np.full(size, big, dtype=np.int64)
    last = np.full(size, -1, dtype=np.int64)
    dp[0] = 0
    for layer in range(n):
        src = subsets[popcount == layer]
        # descending v matches the compiled kernel's tie-breaking
        for v in range(n - 1, -1, -1):
            s = src[((src >> v) & 1) == 0]
            # arcs from v into s point backward once v is appended
            cost = np.zeros(s.shape[0], dtype=np.int64)
            for u in np.flatnonzero(arcs[v]):
                cost += arcs[v, u] * ((s >> u) & 1)
            t = s | (1 << v)
            cand = dp[s] + cost
            # each t is reached at most once per v
            better = cand < dp[t]
            dp[t[better]] = cand[better]
            last[t[better]] = v
    order = np.empty(n, dtype=np.int64)
    s = size - 1
    for i in range(n - 1, -1, -1):
        v = int(last[s])
        order[i] = v
        s ^= 1 << v
    return dp[size - 1], order
