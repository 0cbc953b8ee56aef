"""Slow reference implementations.

Nothing here calls the kernels or the fast paths in ``chips``, ``divisor``
or ``feedback``; only the host and result types are shared.  Use them on
tiny instances to check the fast code.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

import networkx as nx
import numpy as np

from .chips import ChipDistribution, GameOutcome, RepeatedConfiguration
from .errors import SearchBoxExceeded, StateSpaceTooLarge
from .graphs import Digraph, Graph, Host


def _out_lists(host: Host) -> list[list[tuple[int, int]]]:
    out = [[] for _ in range(host.n)]
    for u, v, m in host.edges:
        out[u].append((v, m))
        if not host.directed:
            out[v].append((u, m))
    return out


def classify_by_cycle_detection(x: ChipDistribution, max_states: int = 1_000_000) -> GameOutcome:
    """Min-index game with a visited-configuration table.

    Chips are conserved, so the game either stops or revisits a
    configuration; a revisit proves non-termination for any digraph.
    """
    host = x.host
    out = _out_lists(host)
    deg = [sum(m for _, m in row) for row in out]
    cur = list(x.chips)
    odo = [0] * host.n
    seen = {tuple(cur): 0}
    step = 0
    while True:
        v = next((u for u in range(host.n) if cur[u] >= deg[u]), None)
        if v is None:
            return GameOutcome(True, step, ChipDistribution(host, tuple(cur)), tuple(odo))
        cur[v] -= deg[v]
        for w, m in out[v]:
            cur[w] += m
        odo[v] += 1
        step += 1
        key = tuple(cur)
        if key in seen:
            cert = RepeatedConfiguration(seen[key], step)
            return GameOutcome(False, step, ChipDistribution(host, key), tuple(odo), cert)
        seen[key] = step
        if len(seen) > max_states:
            raise StateSpaceTooLarge(f"more than {max_states} configurations visited")


def brute_force_dist(x: ChipDistribution, max_k: int | None = None) -> int:
    """Fewest added chips making ``x`` non-terminating, by plain enumeration."""
    host = x.host
    if max_k is None:
        max_k = 2 * host.num_edges + host.n
    for k in range(max_k + 1):
        for placement in itertools.combinations_with_replacement(range(host.n), k):
            chips = list(x.chips)
            for v in placement:
                chips[v] += 1
            if not classify_by_cycle_detection(ChipDistribution(host, tuple(chips))).terminating:
                return k
    raise StateSpaceTooLarge(f"no non-terminating distribution within {max_k} added chips")


# ------------------------------------------------------------------ divisors

def _reduced_laplacian(g: Graph) -> list[list[int]]:
    L = [[0] * g.n for _ in range(g.n)]
    for u, v, m in g.edges:
        L[u][v] += m
        L[v][u] += m
        L[u][u] -= m
        L[v][v] -= m
    return [row[1:] for row in L[1:]]


def _det_and_adjugate(a: list[list[int]]) -> tuple[int, list[list[int]]]:
    """Exact determinant and adjugate by Gauss-Jordan over the rationals."""
    n = len(a)
    if n == 0:
        return 1, []
    m = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    det = Fraction(1)
    for c in range(n):
        p = next(r for r in range(c, n) if m[r][c] != 0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        pivot = m[c][c]
        det *= pivot
        m[c] = [v / pivot for v in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                factor = m[r][c]
                m[r] = [a_ - factor * b_ for a_, b_ in zip(m[r], m[c])]
    inv = [row[n:] for row in m]
    d = int(det)
    adj = [[int(v * det) for v in row] for row in inv]
    return d, adj


class LatticeOracle:
    """Linear equivalence on one graph as membership in the Laplacian lattice.

    With ``z(0)`` pinned to 0 the solution of ``h - f = L z`` is unique, so
    ``f ~ h`` iff the degrees agree and ``adj(L0) (h - f)`` vanishes modulo
    ``det(L0)``, where ``L0`` drops row and column 0.
    """

    def __init__(self, g: Graph):
        self.g = g
        self.det, adj = _det_and_adjugate(_reduced_laplacian(g))
        self.adj = np.array(adj, dtype=object) if adj else np.zeros((0, 0), dtype=object)

    def equivalent_many(self, f: Sequence[int], hs: np.ndarray) -> np.ndarray:
        """Which rows of ``hs`` are equivalent to ``f``."""
        diff = np.asarray(hs, dtype=object) - np.asarray(f, dtype=object)
        same_deg = diff.sum(axis=1) == 0
        if self.g.n == 1:
            return same_deg
        resid = (diff[:, 1:] @ self.adj.T) % self.det
        return same_deg & np.all(resid == 0, axis=1)

    def equivalent(self, f, h) -> bool:
        return bool(self.equivalent_many(f, np.array([list(h)], dtype=object))[0])


def _effective(n: int, d: int) -> np.ndarray:
    rows = []
    for placement in itertools.combinations_with_replacement(range(n), d):
        row = [0] * n
        for v in placement:
            row[v] += 1
        rows.append(row)
    return np.array(rows, dtype=object).reshape(len(rows), n)


def brute_force_rank(g: Graph, f: Sequence[int], max_candidates: int = 2_000_000) -> int:
    """Rank straight from the definition, with equivalence from the lattice test."""
    oracle = LatticeOracle(g)
    f = [int(c) for c in f]
    deg = sum(f)
    cache = {}

    def winnable(div):
        d = sum(div)
        if d < 0:
            return False
        if d not in cache:
            count = _count(g.n, d)
            if count > max_candidates:
                raise StateSpaceTooLarge(f"{count} effective divisors of degree {d}")
            cache[d] = _effective(g.n, d)
        return bool(oracle.equivalent_many(div, cache[d]).any())

    for k in range(0, max(deg, -1) + 2):
        for placement in itertools.combinations_with_replacement(range(g.n), k):
            div = list(f)
            for v in placement:
                div[v] -= 1
            if not winnable(div):
                return k - 1
    raise AssertionError("removing deg(f)+1 chips must leave an unwinnable divisor")  # pragma: no cover


def _count(n: int, d: int) -> int:
    from math import comb
    return comb(d + n - 1, n - 1)


def box_bound(g: Graph, f: Sequence[int], h: Sequence[int]) -> int:
    """A bound on ``|z(v)|`` for the pinned solution of ``h - f = L z``.

    ``z = G b`` with ``b = h - f`` off vertex 0 and ``G`` the inverse reduced
    Laplacian.  ``G[i][j]`` is the potential at ``i`` for a unit current from
    ``j`` to vertex 0, at most the effective resistance between them, which
    is at most ``n - 1`` since every edge has conductance >= 1 and a path of
    at most ``n - 1`` edges links them.  So ``|z(i)| <= (n - 1) sum |b_j|``.
    """
    b = sum(abs(int(a) - int(c)) for a, c in zip(h[1:], f[1:]))
    return (g.n - 1) * b


def equivalent_by_box_search(g: Graph, f, h, max_box: int = 200_000) -> bool:
    """Search every ``z`` with ``z(0) = 0`` inside the box from ``box_bound``."""
    if sum(f) != sum(h):
        return False
    B = box_bound(g, f, h)
    if (2 * B + 1) ** (g.n - 1) > max_box:
        raise SearchBoxExceeded(f"box of radius {B} in dimension {g.n - 1} is too large")
    L = np.zeros((g.n, g.n), dtype=np.int64)
    for u, v, m in g.edges:
        L[u, v] += m
        L[v, u] += m
        L[u, u] -= m
        L[v, v] -= m
    target = np.array(h, dtype=np.int64) - np.array(f, dtype=np.int64)
    for z in itertools.product(range(-B, B + 1), repeat=g.n - 1):
        if np.array_equal(L[:, 1:] @ np.array(z, dtype=np.int64), target):
            return True
    return False


# ----------------------------------------------------------- feedback sets

def brute_force_minfas(d: Digraph, max_arcs: int = 16) -> int:
    """Smallest arc-instance subset whose removal leaves a DAG."""
    inst = d.arc_instances()
    if len(inst) > max_arcs:
        raise StateSpaceTooLarge(f"{len(inst)} arcs is beyond the subset search")
    for k in range(len(inst) + 1):
        for drop in itertools.combinations(range(len(inst)), k):
            gone = set(drop)
            h = nx.DiGraph()
            h.add_nodes_from(range(d.n))
            h.add_edges_from(e for i, e in enumerate(inst) if i not in gone)
            if nx.is_directed_acyclic_graph(h):
                return k
    raise AssertionError("removing every arc leaves a DAG")  # pragma: no cover


def brute_force_under_acyclic(g: Graph, x: Sequence[int]) -> bool:
    """Try every orientation of the edge bundles (parallel copies share a
    direction in any acyclic orientation)."""
    for flips in itertools.product((False, True), repeat=len(g.edges)):
        h = nx.DiGraph()
        h.add_nodes_from(range(g.n))
        indeg = [0] * g.n
        for (u, v, m), flip in zip(g.edges, flips):
            a, b = (v, u) if flip else (u, v)
            h.add_edge(a, b)
            indeg[b] += m
        if all(c <= i for c, i in zip(x, indeg)) and nx.is_directed_acyclic_graph(h):
            return True
    return False
