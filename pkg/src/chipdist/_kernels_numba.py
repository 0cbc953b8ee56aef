"""Numba-compiled hot loops.

Every function here has a twin with the same signature and semantics in
``_kernels_numpy``.  Arrays are int64 throughout.  ``arcs[u, w]`` is the
multiplicity of the arc u -> w (symmetric for undirected hosts) and
``outdeg[u]`` its row sum.
"""
import numpy as np
from numba import njit

TERMINATED = 0
ALL_FIRED = 1
CAP_REACHED = 2


@njit(cache=True, nogil=True)
def simulate(chips, arcs, outdeg, cap, stop_when_all_fired):
    """Min-index legal game.

    Returns ``(status, steps, final, odometer, last_fired)``; ``last_fired``
    holds the 1-based step of each vertex's latest firing (0 = never).
    """
    n = chips.shape[0]
    x = chips.copy()
    odo = np.zeros(n, dtype=np.int64)
    last = np.zeros(n, dtype=np.int64)
    unfired = n
    steps = 0
    while True:
        if stop_when_all_fired and unfired == 0:
            return ALL_FIRED, steps, x, odo, last
        v = -1
        for u in range(n):
            if x[u] >= outdeg[u]:
                v = u
                break
        if v < 0:
            return TERMINATED, steps, x, odo, last
        if steps >= cap:
            return CAP_REACHED, steps, x, odo, last
        x[v] -= outdeg[v]
        for w in range(n):
            x[w] += arcs[v, w]
        steps += 1
        if odo[v] == 0:
            unfired -= 1
        odo[v] += 1
        last[v] = steps


@njit(cache=True, nogil=True)
def _next_colex(c, n):
    # c is a nondecreasing placement of len(c) chips on vertices 0..n-1
    k = c.shape[0]
    for i in range(k):
        top = c[i + 1] if i + 1 < k else n - 1
        if c[i] < top:
            c[i] += 1
            for j in range(i):
                c[j] = 0
            return True
    return False


@njit(cache=True, nogil=True)
def first_nonterminating_at_level(x, arcs, outdeg, k, bound, pigeonhole):
    """Scan every y with |y| = k in colex order of chip placements.

    ``x + y`` counts as non-terminating when its size exceeds ``pigeonhole``,
    when every vertex fires in the min-index game, or when that game runs
    past ``bound`` steps.  Returns ``(y, steps)``; ``y[0] == -1`` when no
    placement at this level is non-terminating (the rest of ``y`` is then zero).
    """
    n = x.shape[0]
    total = 0
    for i in range(n):
        total += x[i]
    c = np.zeros(k, dtype=np.int64)
    y = np.zeros(n, dtype=np.int64)
    steps_used = 0
    while True:
        for i in range(n):
            y[i] = 0
        for i in range(k):
            y[c[i]] += 1
        if total + k > pigeonhole:
            return y, steps_used
        status, steps, _, _, _ = simulate(x + y, arcs, outdeg, bound + 1, True)
        steps_used += steps
        if status != TERMINATED:
            return y, steps_used
        if not _next_colex(c, n):
            break
    for i in range(n):
        y[i] = 0
    y[0] = -1
    return y, steps_used


@njit(cache=True, nogil=True)
def _bfs_levels(adj, q):
    n = adj.shape[0]
    level = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    level[q] = 0
    queue[0] = q
    head = 0
    tail = 1
    while head < tail:
        u = queue[head]
        head += 1
        for w in range(n):
            if adj[u, w] > 0 and level[w] < 0:
                level[w] = level[u] + 1
                queue[tail] = w
                tail += 1
    return level


@njit(cache=True, nogil=True)
def q_reduce(f, adj, q):
    """q-reduced representative of ``f``; returns ``(values, set_firings)``."""
    n = f.shape[0]
    g = f.copy()
    deg = np.zeros(n, dtype=np.int64)
    for u in range(n):
        for w in range(n):
            deg[u] += adj[u, w]
    steps = 0

    # 1: push debt outward ring by ring by firing balls around q
    level = _bfs_levels(adj, q)
    depth = 0
    for u in range(n):
        if level[u] > depth:
            depth = level[u]
    for r in range(depth - 1, -1, -1):
        times = 0
        for w in range(n):
            if level[w] == r + 1 and g[w] < 0:
                e = 0
                for u in range(n):
                    if level[u] <= r:
                        e += adj[w, u]
                t = (-g[w] + e - 1) // e
                if t > times:
                    times = t
        if times > 0:
            for u in range(n):
                inside = level[u] <= r
                for w in range(n):
                    if inside and level[w] > r:
                        g[u] -= times * adj[u, w]
                        g[w] += times * adj[u, w]
            steps += times

    # 2: Dhar burning; fire the unburnt set until everything burns
    burnt = np.zeros(n, dtype=np.bool_)
    while True:
        for u in range(n):
            burnt[u] = False
        burnt[q] = True
        changed = True
        while changed:
            changed = False
            for u in range(n):
                if not burnt[u]:
                    e = 0
                    for w in range(n):
                        if burnt[w]:
                            e += adj[u, w]
                    if g[u] < e:
                        burnt[u] = True
                        changed = True
        all_burnt = True
        for u in range(n):
            if not burnt[u]:
                all_burnt = False
                break
        if all_burnt:
            return g, steps
        # largest legal repetition of the set-firing
        times = -1
        for u in range(n):
            if not burnt[u]:
                e = 0
                for w in range(n):
                    if burnt[w]:
                        e += adj[u, w]
                if e > 0:
                    t = g[u] // e
                    if times < 0 or t < times:
                        times = t
        for u in range(n):
            if not burnt[u]:
                for w in range(n):
                    if burnt[w]:
                        g[u] -= times * adj[u, w]
                        g[w] += times * adj[u, w]
        steps += times


@njit(cache=True, nogil=True)
def minfas_dp(arcs):
    """Minimum number of backward arcs over all vertex orders.

    Returns ``(best, order)``; the order is optimal and its backward arcs
    form a minimum feedback arc set.
    """
    n = arcs.shape[0]
    full = (1 << n) - 1
    big = np.iinfo(np.int64).max
    dp = np.full(full + 1, big, dtype=np.int64)
    last = np.full(full + 1, -1, dtype=np.int8)
    dp[0] = 0
    for s in range(full + 1):
        base = dp[s]
        if base == big:
            continue
        for v in range(n):
            if (s >> v) & 1:
                continue
            # v goes after every vertex of s: arcs v -> s point backward
            cost = 0
            for u in range(n):
                if (s >> u) & 1:
                    cost += arcs[v, u]
            t = s | (1 << v)
            if base + cost < dp[t]:
                dp[t] = base + cost
                last[t] = v
    order = np.empty(n, dtype=np.int64)
    s = full
    for i in range(n - 1, -1, -1):
        v = last[s]
        order[i] = v
        s ^= 1 << v
    return dp[full], order
