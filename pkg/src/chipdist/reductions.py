"""Instance transformations between digraphs and graphs.

``phi_transform`` splits every arc instance of a digraph by a new vertex and
thickens the tail half into ``M = 8|V|^2|E|Delta`` parallel edges.  With the
base distribution on the result, the distance of the zero distribution on
the digraph equals the distance of the base distribution on the graph.
``subdivide`` splits every edge of a graph once; it preserves distances and
ranks.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .chips import ChipDistribution, distance_search, fire, run_legal_game
from .divisor import Divisor
from .errors import IllegalFiring, Overflow, PreconditionUnmet, TooLarge
from .feedback import fas_distribution, minfas_exact
from .graphs import INT64_GUARD, Digraph, Graph

PHI_SIZE_LIMIT = 100_000  # M * |E(D)|, the number of thick edges in phi(D)


def phi_multiplier(d: Digraph) -> int:
    return 8 * d.n * d.n * d.num_edges * d.max_degree


@dataclass(frozen=True)
class PhiResult:
    source: Digraph
    target: Graph
    M: int
    arcs: tuple  # arc instances (tail, head); arc i is split by vertex n + i

    def psi_vertex(self, v: int) -> int:
        return v

    def psi_arc(self, i: int) -> int:
        return self.source.n + i

    @property
    def psi(self) -> dict:
        """Explicit table ``("v", v) | ("e", i) -> vertex of phi(D)``."""
        table = {("v", v): v for v in range(self.source.n)}
        table.update({("e", i): self.source.n + i for i in range(len(self.arcs))})
        return table

    def out_arcs(self, v: int) -> list[int]:
        return [i for i, (t, _) in enumerate(self.arcs) if t == v]


def phi_transform(d: Digraph, scaled_m: int | None = None) -> PhiResult:
    """Build ``phi(D)``.

    ``scaled_m`` overrides ``M`` for exploration; the distance equality is
    only guaranteed with the full multiplier.
    """
    M = phi_multiplier(d) if scaled_m is None else int(scaled_m)
    if M <= 0 or M % 2:
        raise ValueError("M must be a positive even integer")
    if M * d.max_degree * d.num_edges >= INT64_GUARD * 2:
        raise Overflow("M * Delta * |E| exceeds the 63-bit guard")
    arcs = tuple(d.arc_instances())
    n = d.n
    edges = []
    for i, (t, h) in enumerate(arcs):
        edges.append((t, n + i, M))
        edges.append((n + i, h, 1))
    g = Graph(n + len(arcs), tuple(edges))
    res = PhiResult(d, g, M, arcs)
    _check_phi_degrees(res)
    return res


def _check_phi_degrees(p: PhiResult) -> None:
    d, g, M = p.source, p.target, p.M
    if g.n != d.n + d.num_edges:
        raise RuntimeError("phi(D) has the wrong vertex count")
    if g.num_edges != d.num_edges * (M + 1):
        raise RuntimeError("phi(D) has the wrong edge count")
    for v in range(d.n):
        if g.degree(v) != int(d.out_degrees[v]) * M + int(d.in_degrees[v]):
            raise RuntimeError(f"degree identity fails at vertex {v}")
    for i in range(len(p.arcs)):
        if g.degree(p.psi_arc(i)) != M + 1:
            raise RuntimeError(f"degree identity fails at split vertex of arc {i}")


def base_distribution(p: PhiResult) -> ChipDistribution:
    d = p.source
    chips = [int(d.out_degrees[v]) * p.M for v in range(d.n)]
    chips += [p.M // 2] * len(p.arcs)
    return ChipDistribution(p.target, tuple(chips))


def lift_distribution(p: PhiResult, x: ChipDistribution) -> ChipDistribution:
    """``x + base``: the chips of ``x`` added on the original vertices."""
    base = base_distribution(p)
    extra = list(x.chips) + [0] * len(p.arcs)
    return base.plus(extra)


def lift_firing(p: PhiResult, v: int) -> tuple:
    """Firings on ``phi(D)`` mirroring one firing of ``v``: ``psi(v)`` first,
    then the split vertex of each out-arc by increasing arc index."""
    return (p.psi_vertex(v),) + tuple(p.psi_arc(i) for i in p.out_arcs(v))


@dataclass(frozen=True)
class CoupledStep:
    k: int
    vertex: int
    vertex_identity: bool
    arc_window: bool


def coupled_replay(p: PhiResult, x: ChipDistribution, steps: int) -> list[CoupledStep]:
    """Play ``steps`` min-index firings on D and their lifts on phi(D).

    Every lifted firing must be legal; after the k-th step the record says
    whether ``y(psi(v)) = x(v) + outdeg(v) M`` holds for all v and whether
    every split vertex holds between ``M/2 - k`` and ``M/2 + k`` chips.
    """
    if steps > p.M // 2:
        raise ValueError("the coupling is only claimed for k <= M/2")
    d = p.source
    y = lift_distribution(p, x)
    out = []
    for k in range(1, steps + 1):
        out_d, _ = run_legal_game(x, "min-index", 1)
        if out_d.steps != 1:
            raise PreconditionUnmet("the game on D stopped; x must be non-terminating")
        v = out_d.odometer.index(1)
        x = out_d.final
        for w in lift_firing(p, v):
            try:
                y = fire(y, w)
            except IllegalFiring as exc:
                raise AssertionError(f"lifted firing of {w} at step {k} is illegal") from exc
        ident = all(
            y.chips[p.psi_vertex(u)] == x.chips[u] + int(d.out_degrees[u]) * p.M
            for u in range(d.n)
        )
        half = p.M // 2
        window = all(
            half - k <= y.chips[p.psi_arc(i)] <= half + k for i in range(len(p.arcs))
        )
        out.append(CoupledStep(k, v, ident, window))
    return out


@dataclass
class PhiLemmaReport:
    lhs: int
    rhs: int
    equal: bool
    M: int
    upper_bound: int
    upper_bound_ok: bool
    coupled_steps: int
    coupled_ok: bool
    witness: tuple
    steps_used: int
    wall_time: float = field(default=0.0)

    @property
    def ok(self) -> bool:
        return self.equal and self.upper_bound_ok and self.coupled_ok

    def as_dict(self) -> dict:
        doc = asdict(self)
        doc["witness"] = list(self.witness)
        doc["ok"] = self.ok
        return doc


def verify_phi_lemma(d: Digraph, coupled_steps: int | None = None,
                     size_limit: int = PHI_SIZE_LIMIT) -> PhiLemmaReport:
    """Check ``dist_D(0) = dist_phi(D)(base)``.

    The D side is ``minfas(D)``; the phi(D) side is an exhaustive chip search.
    Also checks ``dist_D(0) <= |E| - |V| + 1`` and replays the coupled game
    from the minimum-FAS distribution.
    """
    if not d.is_eulerian:
        raise PreconditionUnmet("the phi lemma is stated for Eulerian digraphs")
    M = phi_multiplier(d)
    if M * d.num_edges > size_limit:
        raise TooLarge(f"M * |E| = {M * d.num_edges} exceeds {size_limit}")
    t0 = time.perf_counter()
    p = phi_transform(d)
    lhs, fas = minfas_exact(d)
    found = distance_search(base_distribution(p))
    upper = d.num_edges - d.n + 1
    k = M // 2 if coupled_steps is None else coupled_steps
    records = coupled_replay(p, fas_distribution(fas), k)
    coupled_ok = all(r.vertex_identity and r.arc_window for r in records)
    return PhiLemmaReport(
        lhs=lhs,
        rhs=found.dist,
        equal=lhs == found.dist,
        M=M,
        upper_bound=upper,
        upper_bound_ok=lhs <= upper,
        coupled_steps=len(records),
        coupled_ok=coupled_ok,
        witness=found.witness,
        steps_used=found.steps_used,
        wall_time=time.perf_counter() - t0,
    )


# ------------------------------------------------------------ subdivision

def _subdivided_graph(g: Graph) -> Graph:
    inst = g.edge_instances()
    edges = []
    for i, (u, v) in enumerate(inst):
        edges.append((u, g.n + i, 1))
        edges.append((g.n + i, v, 1))
    return Graph(g.n + len(inst), tuple(edges))


def subdivide(g: Graph, x: ChipDistribution) -> tuple[Graph, ChipDistribution]:
    """Split every edge instance once; new vertices get one chip each."""
    h = _subdivided_graph(g)
    chips = tuple(x.chips) + (1,) * (h.n - g.n)
    return h, ChipDistribution(h, chips)


def divisor_subdivide(g: Graph, f: Divisor) -> tuple[Graph, Divisor]:
    """Split every edge instance once; the divisor is zero on new vertices."""
    h = _subdivided_graph(g)
    return h, Divisor(h, tuple(f.values) + (0,) * (h.n - g.n))


__all__ = [
    "CoupledStep",
    "PhiLemmaReport",
    "PhiResult",
    "base_distribution",
    "coupled_replay",
    "divisor_subdivide",
    "lift_distribution",
    "lift_firing",
    "phi_multiplier",
    "phi_transform",
    "subdivide",
    "verify_phi_lemma",
]
