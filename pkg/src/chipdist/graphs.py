"""Host multigraphs: undirected ``Graph`` and directed ``Digraph``.

Vertices are ``0..n-1``.  Edge multiplicities are stored explicitly as
``(u, v, mult)`` triples, so hosts with very thick bundles stay small.
Hosts are immutable; derived tables are computed lazily and cached.
"""
from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    Disconnected,
    EmptyVertexSet,
    GenerationFailed,
    InvalidHost,
    LoopEdge,
    ParseError,
)

INT64_GUARD = 2**62


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _merge(n: int, triples: Iterable[Sequence[int]], directed: bool) -> tuple:
    if n < 1:
        raise EmptyVertexSet("a host needs at least one vertex")
    counts: Counter = Counter()
    for item in triples:
        if len(item) == 2:
            u, v = item
            m = 1
        elif len(item) == 3:
            u, v, m = item
        else:
            raise InvalidHost(f"edge entry must be (u, v) or (u, v, mult): {item!r}")
        u, v, m = int(u), int(v), int(m)
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidHost(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            raise LoopEdge(f"loop at vertex {u}")
        if m < 1:
            raise InvalidHost(f"edge ({u}, {v}) has multiplicity {m} < 1")
        key = (u, v) if directed or u < v else (v, u)
        counts[key] += m
    total = sum(counts.values())
    if total >= INT64_GUARD:
        raise InvalidHost("edge count does not fit the 64-bit guard")
    return tuple((u, v, m) for (u, v), m in sorted(counts.items()))


def _check_connected(n: int, pairs: Iterable[tuple[int, int]]) -> None:
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    roots = {find(v) for v in range(n)}
    if len(roots) > 1:
        raise Disconnected(f"host splits into {len(roots)} components")


@dataclass(frozen=True)
class Graph:
    """Connected loopless undirected multigraph."""

    n: int
    edges: tuple

    directed = False

    def __post_init__(self):
        object.__setattr__(self, "edges", _merge(self.n, self.edges, directed=False))
        _check_connected(self.n, ((u, v) for u, v, _ in self.edges))

    @cached_property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v, m in self.edges:
            a[u, v] = m
            a[v, u] = m
        return _frozen(a)

    @cached_property
    def degrees(self) -> np.ndarray:
        return _frozen(self.adjacency.sum(axis=1))

    # the chip engine treats a Graph as its bidirected digraph
    @property
    def arc_matrix(self) -> np.ndarray:
        return self.adjacency

    @property
    def out_degrees(self) -> np.ndarray:
        return self.degrees

    def degree(self, v: int) -> int:
        return int(self.degrees[v])

    def multiplicity(self, u: int, v: int) -> int:
        return int(self.adjacency[u, v])

    @cached_property
    def num_edges(self) -> int:
        return sum(m for _, _, m in self.edges)

    @property
    def genus(self) -> int:
        return self.num_edges - self.n + 1

    @property
    def is_simple(self) -> bool:
        return all(m == 1 for _, _, m in self.edges)

    def edge_instances(self) -> list[tuple[int, int]]:
        """Every parallel copy listed separately, in canonical order."""
        return [(u, v) for u, v, m in self.edges for _ in range(m)]


@dataclass(frozen=True)
class Digraph:
    """Weakly connected loopless directed multigraph."""

    n: int
    arcs: tuple

    directed = True

    def __post_init__(self):
        object.__setattr__(self, "arcs", _merge(self.n, self.arcs, directed=True))
        _check_connected(self.n, ((u, v) for u, v, _ in self.arcs))

    @cached_property
    def arc_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v, m in self.arcs:
            a[u, v] = m
        return _frozen(a)

    @cached_property
    def out_degrees(self) -> np.ndarray:
        return _frozen(self.arc_matrix.sum(axis=1))

    @cached_property
    def in_degrees(self) -> np.ndarray:
        return _frozen(self.arc_matrix.sum(axis=0))

    def multiplicity(self, u: int, v: int) -> int:
        return int(self.arc_matrix[u, v])

    @cached_property
    def num_edges(self) -> int:
        return sum(m for _, _, m in self.arcs)

    @property
    def max_degree(self) -> int:
        """Largest in- or out-degree over all vertices."""
        return int(max(self.out_degrees.max(), self.in_degrees.max()))

    @property
    def is_eulerian(self) -> bool:
        return bool(np.array_equal(self.out_degrees, self.in_degrees))

    @property
    def is_simple(self) -> bool:
        return all(m == 1 for _, _, m in self.arcs)

    def arc_instances(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v, m in self.arcs for _ in range(m)]

    @property
    def edges(self) -> tuple:
        return self.arcs


Host = Graph | Digraph


def build_graph(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    return Graph(n, tuple(edges))


def build_digraph(n: int, arcs: Iterable[Sequence[int]]) -> Digraph:
    return Digraph(n, tuple(arcs))


def laplacian(host: Host) -> np.ndarray:
    """Integer Laplacian; column ``j`` is the effect of firing vertex ``j``."""
    a = host.arc_matrix
    return a.T - np.diag(host.out_degrees)


def bidirect(g: Graph) -> Digraph:
    """Replace every edge by a pair of opposite arcs."""
    arcs = [(u, v, m) for u, v, m in g.edges] + [(v, u, m) for u, v, m in g.edges]
    return Digraph(g.n, tuple(arcs))


@dataclass(frozen=True)
class Orientation:
    """A direction for every edge instance of ``base``.

    ``order`` is a topological order of ``digraph`` when the orientation is
    acyclic, else ``None``.
    """

    base: Graph
    digraph: Digraph
    order: tuple | None = field(default=None)

    def __post_init__(self):
        projected = Counter()
        for u, v, m in self.digraph.arcs:
            projected[(min(u, v), max(u, v))] += m
        expected = {(u, v): m for u, v, m in self.base.edges}
        if dict(projected) != expected:
            raise InvalidHost("orientation does not project onto the base edge multiset")
        if self.order is None:
            object.__setattr__(self, "order", _topological_order(self.digraph))
        elif not is_topological_order(self.digraph, self.order):
            raise InvalidHost("stored order is not a topological order")

    @property
    def acyclic(self) -> bool:
        return self.order is not None

    @property
    def in_degrees(self) -> np.ndarray:
        return self.digraph.in_degrees

    @property
    def out_degrees(self) -> np.ndarray:
        return self.digraph.out_degrees

    @classmethod
    def from_order(cls, g: Graph, order: Sequence[int]) -> "Orientation":
        """Direct every edge from the earlier to the later vertex of ``order``."""
        pos = {v: i for i, v in enumerate(order)}
        arcs = [(u, v, m) if pos[u] < pos[v] else (v, u, m) for u, v, m in g.edges]
        return cls(g, Digraph(g.n, tuple(arcs)), tuple(int(v) for v in order))


def is_topological_order(d: Digraph, order: Sequence[int]) -> bool:
    if sorted(order) != list(range(d.n)):
        return False
    pos = {v: i for i, v in enumerate(order)}
    return all(pos[u] < pos[v] for u, v, _ in d.arcs)


def _topological_order(d: Digraph) -> tuple | None:
    indeg = list(d.in_degrees)
    out = [[] for _ in range(d.n)]
    for u, v, m in d.arcs:
        out[u].append((v, m))
    ready = sorted(v for v in range(d.n) if indeg[v] == 0)
    order = []
    while ready:
        u = ready.pop(0)
        order.append(u)
        for v, m in out[u]:
            indeg[v] -= m
            if indeg[v] == 0:
                ready.append(v)
        ready.sort()
    return tuple(order) if len(order) == d.n else None


# ---------------------------------------------------------------- generators

def random_eulerian_digraph(
    n: int, cycles: int, max_len: int, seed, max_tries: int = 1000
) -> Digraph:
    """Union of ``cycles`` random directed cycles, resampled until weakly connected."""
    if n < 2 or cycles < 1:
        raise ValueError("need n >= 2 and cycles >= 1")
    top = min(max_len, n)
    if top < 2:
        raise ValueError("max_len must allow cycles of length >= 2")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        arcs = []
        for _ in range(cycles):
            length = int(rng.integers(2, top + 1))
            cyc = [int(v) for v in rng.choice(n, size=length, replace=False)]
            arcs.extend((cyc[i], cyc[(i + 1) % length]) for i in range(length))
        try:
            return Digraph(n, tuple(arcs))
        except Disconnected:
            continue
    raise GenerationFailed(f"no weakly connected sample in {max_tries} tries")


def random_graph(n: int, seed, max_mult: int = 2, density: float = 0.5,
                 max_tries: int = 1000) -> Graph:
    """Random connected multigraph with multiplicities in ``1..max_mult``."""
    rng = np.random.default_rng(seed)
    pairs = list(itertools.combinations(range(n), 2))
    if n == 1:
        return Graph(1, ())
    for _ in range(max_tries):
        edges = [
            (u, v, int(rng.integers(1, max_mult + 1)))
            for u, v in pairs
            if rng.random() < density
        ]
        try:
            return Graph(n, tuple(edges))
        except Disconnected:
            continue
    raise GenerationFailed(f"no connected sample in {max_tries} tries")


def all_connected_graphs(n: int, max_mult: int = 1):
    """Yield every labelled connected multigraph on ``n`` vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    for mults in itertools.product(range(max_mult + 1), repeat=len(pairs)):
        edges = tuple((u, v, m) for (u, v), m in zip(pairs, mults) if m)
        try:
            yield Graph(n, edges)
        except Disconnected:
            continue


def all_connected_digraphs(n: int, max_mult: int = 1):
    """Yield every labelled weakly connected digraph on ``n`` vertices."""
    pairs = list(itertools.permutations(range(n), 2))
    for mults in itertools.product(range(max_mult + 1), repeat=len(pairs)):
        arcs = tuple((u, v, m) for (u, v), m in zip(pairs, mults) if m)
        try:
            yield Digraph(n, arcs)
        except Disconnected:
            continue


# ------------------------------------------------------------ instance files

@dataclass(frozen=True)
class Instance:
    host: Host
    chips: tuple | None = None
    divisor: tuple | None = None


def to_instance(host: Host, chips=None, divisor=None) -> dict:
    doc = {
        "kind": "digraph" if host.directed else "graph",
        "n": host.n,
        "edges": [[u, v, m] for u, v, m in host.edges],
    }
    if chips is not None:
        doc["chips"] = [int(c) for c in chips]
    if divisor is not None:
        doc["divisor"] = [int(c) for c in divisor]
    return doc


def dumps_instance(host: Host, chips=None, divisor=None) -> str:
    """Canonical serialization: fixed key order, sorted edges, no spaces."""
    return json.dumps(to_instance(host, chips, divisor), separators=(",", ":"))


def parse_instance(doc) -> Instance:
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("instance must be a JSON object")
    kind = doc.get("kind")
    if kind not in ("graph", "digraph"):
        raise ParseError(f"unknown kind {kind!r}")
    try:
        n = int(doc["n"])
        edges = [tuple(int(t) for t in e) for e in doc.get("edges", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed instance: {exc}") from exc
    host = Digraph(n, tuple(edges)) if kind == "digraph" else Graph(n, tuple(edges))
    vectors = {}
    for key in ("chips", "divisor"):
        if key in doc and doc[key] is not None:
            vec = doc[key]
            if not isinstance(vec, list) or len(vec) != n:
                raise ParseError(f"{key!r} must be a list of length {n}")
            vectors[key] = tuple(int(c) for c in vec)
    return Instance(host, vectors.get("chips"), vectors.get("divisor"))


def load_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())
