"""Feedback arc sets and acyclic orientations.

``minfas_exact`` solves minimum feedback arc set exactly as a linear
ordering problem: the backward arcs of a best vertex order form an optimal
set, and the order itself certifies that the rest is acyclic.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .chips import ChipDistribution, fire
from .errors import NoSource, NotMinimal, PreconditionUnmet, TooLarge
from .graphs import Digraph, Graph, Orientation, is_topological_order

DP_LIMIT = 22
EXHAUSTIVE_LIMIT = 8


@dataclass(frozen=True)
class FeedbackArcSet:
    """Arcs ``F`` of ``host`` (as ``(u, v, mult)``) and an order witnessing that
    the remaining arcs are acyclic."""

    host: Digraph
    arcs: tuple
    order: tuple

    def __post_init__(self):
        arcs = tuple(sorted((int(u), int(v), int(m)) for u, v, m in self.arcs if m))
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "order", tuple(int(v) for v in self.order))
        for u, v, m in arcs:
            if m > self.host.multiplicity(u, v):
                raise ValueError(f"arc ({u}, {v}) x{m} is not in the host")
        if not self.verify():
            raise ValueError("order does not witness an acyclic complement")

    @property
    def size(self) -> int:
        return sum(m for _, _, m in self.arcs)

    @property
    def matrix(self) -> np.ndarray:
        f = np.zeros((self.host.n, self.host.n), dtype=np.int64)
        for u, v, m in self.arcs:
            f[u, v] = m
        return f

    @property
    def in_degrees(self) -> np.ndarray:
        return self.matrix.sum(axis=0)

    @property
    def out_degrees(self) -> np.ndarray:
        return self.matrix.sum(axis=1)

    def complement(self) -> np.ndarray:
        return self.host.arc_matrix - self.matrix

    def verify(self) -> bool:
        if sorted(self.order) != list(range(self.host.n)):
            return False
        pos = np.empty(self.host.n, dtype=np.int64)
        pos[list(self.order)] = np.arange(self.host.n)
        rest = self.complement()
        us, vs = np.nonzero(rest)
        return bool(np.all(pos[us] < pos[vs]))


def _backward_arcs(d: Digraph, order) -> tuple:
    pos = {v: i for i, v in enumerate(order)}
    return tuple((u, v, m) for u, v, m in d.arcs if pos[u] > pos[v])


def minfas_exact(d: Digraph, limit: int = DP_LIMIT) -> tuple[int, FeedbackArcSet]:
    """Minimum feedback arc set via DP over vertex subsets, O(2^n n^2)."""
    if d.n > limit:
        raise TooLarge(f"n = {d.n} exceeds the DP limit {limit}")
    best, order = kernels.minfas_dp(d.arc_matrix)
    order = tuple(int(v) for v in order)
    fas = FeedbackArcSet(d, _backward_arcs(d, order), order)
    if fas.size != int(best):
        raise RuntimeError("DP value and backward-arc count disagree")
    return int(best), fas


def minfas(d: Digraph) -> int:
    return minfas_exact(d)[0]


def fas_distribution(fas: FeedbackArcSet, assume_minimal: bool = False) -> ChipDistribution:
    """Chips equal to the in-degree of every vertex inside ``F``.

    Non-terminating when ``F`` is minimum and the host is Eulerian.  Small
    hosts are checked against ``minfas_exact``; above the DP limit the caller
    vouches with ``assume_minimal``.
    """
    d = fas.host
    if not d.is_eulerian:
        raise PreconditionUnmet("fas_distribution needs an Eulerian host")
    if d.n <= DP_LIMIT:
        if fas.size != minfas(d):
            raise NotMinimal(f"|F| = {fas.size} but minfas = {minfas(d)}")
    elif not assume_minimal:
        raise NotMinimal("cannot certify minimality above the DP limit")
    return ChipDistribution(d, tuple(int(c) for c in fas.in_degrees))


def rotate_fas(fas: FeedbackArcSet, x: ChipDistribution) -> tuple[FeedbackArcSet, ChipDistribution, int]:
    """Fire a source of ``E \\ F`` whose out-arcs all lie outside ``F``.

    The fired vertex's in-arcs leave ``F`` and its out-arcs join it, so
    ``|F|`` is unchanged and ``x(v) >= indeg_F(v)`` still holds afterwards.
    Returns ``(F', x', v0)``.
    """
    d = fas.host
    f = fas.matrix
    rest = d.arc_matrix - f
    fin = f.sum(axis=0)
    if np.any(x.array < fin):
        raise PreconditionUnmet("x must dominate the in-degrees of F")
    sources = [
        v for v in range(d.n)
        if rest[:, v].sum() == 0 and f[v].sum() == 0
    ]
    if not sources:
        raise NoSource("no source of E\\F without out-arcs in F; F is not minimum")
    v0 = sources[0]
    x2 = fire(x, v0)
    f2 = f.copy()
    f2[:, v0] = 0
    f2[v0] = d.arc_matrix[v0]
    # v0 is now a sink of the complement
    order = tuple(v for v in fas.order if v != v0) + (v0,)
    us, vs = np.nonzero(f2)
    arcs = tuple((int(u), int(v), int(f2[u, v])) for u, v in zip(us, vs))
    return FeedbackArcSet(d, arcs, order), x2, v0


# ------------------------------------------------------ acyclic orientations

def _placement_feasible(g: Graph, x, order) -> bool:
    a = g.adjacency
    placed = np.zeros(g.n, dtype=bool)
    for v in order:
        if x[v] > a[v, placed].sum():
            return False
        placed[v] = True
    return True


def under_acyclic_orientation(g: Graph, x: ChipDistribution, mode: str = "greedy") -> Orientation | None:
    """An acyclic orientation with ``x(v) <= indeg(v)`` everywhere, or ``None``.

    Edges point from earlier to later vertices of a placement order, so a
    vertex's in-degree is its edge count to already placed vertices.
    Greedy places the lowest-index vertex whose requirement is already met;
    since placing a vertex only helps the others, it never paints itself
    into a corner.  ``exhaustive`` tries every order.
    """
    xs = x.chips if isinstance(x, ChipDistribution) else tuple(x)
    if mode == "greedy":
        a = g.adjacency
        placed = np.zeros(g.n, dtype=bool)
        have = np.zeros(g.n, dtype=np.int64)
        order = []
        while len(order) < g.n:
            ready = [v for v in range(g.n) if not placed[v] and xs[v] <= have[v]]
            if not ready:
                return None
            v = ready[0]
            order.append(v)
            placed[v] = True
            have += a[v]
        orient = Orientation.from_order(g, order)
        if not (orient.acyclic and np.all(np.array(xs) <= orient.in_degrees)):
            raise RuntimeError("greedy placement failed the definition check")
        return orient
    if mode == "exhaustive":
        if g.n > EXHAUSTIVE_LIMIT:
            raise TooLarge(f"exhaustive search is limited to n <= {EXHAUSTIVE_LIMIT}")
        for order in itertools.permutations(range(g.n)):
            if _placement_feasible(g, xs, order):
                return Orientation.from_order(g, order)
        return None
    raise ValueError(f"unknown mode {mode!r}")


def dist_under_acyclic(g: Graph, x: ChipDistribution) -> int:
    """``|E| - |x|`` for ``x`` under an acyclic orientation; no search involved."""
    if under_acyclic_orientation(g, x, "greedy") is None:
        raise PreconditionUnmet("x is not under an acyclic orientation")
    return g.num_edges - x.size


def indegree_distribution(orient: Orientation) -> ChipDistribution:
    return ChipDistribution(orient.base, tuple(int(c) for c in orient.in_degrees))


def fas_from_arcs(d: Digraph, arcs) -> FeedbackArcSet:
    """Build a FeedbackArcSet from an arc list, deriving the certificate order."""
    counts = Counter()
    for item in arcs:
        u, v = int(item[0]), int(item[1])
        counts[(u, v)] += int(item[2]) if len(item) > 2 else 1
    triples = tuple((u, v, m) for (u, v), m in counts.items())
    rest_arcs = []
    for u, v, m in d.arcs:
        left = m - counts.get((u, v), 0)
        if left < 0:
            raise ValueError(f"arc ({u}, {v}) used more often than it exists")
        if left:
            rest_arcs.append((u, v, left))
    order = _kahn(d.n, rest_arcs)
    if order is None:
        raise ValueError("the complement of the given arcs still has a cycle")
    return FeedbackArcSet(d, triples, order)


def _kahn(n, arcs):
    indeg = [0] * n
    out = [[] for _ in range(n)]
    for u, v, m in arcs:
        indeg[v] += m
        out[u].append((v, m))
    ready = [v for v in range(n) if indeg[v] == 0]
    order = []
    while ready:
        ready.sort()
        u = ready.pop(0)
        order.append(u)
        for v, m in out[u]:
            indeg[v] -= m
            if indeg[v] == 0:
                ready.append(v)
    return tuple(order) if len(order) == n else None


__all__ = [
    "FeedbackArcSet",
    "dist_under_acyclic",
    "fas_distribution",
    "fas_from_arcs",
    "indegree_distribution",
    "is_topological_order",
    "minfas",
    "minfas_exact",
    "rotate_fas",
    "under_acyclic_orientation",
]
