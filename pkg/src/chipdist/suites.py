"""Batch verification suites.

Each suite builds a deterministic instance universe from a seed, checks one
identity on every instance, and returns a ``CheckResult``.  The CLI's
``verify`` subcommand and the acceptance tests both run these.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from . import oracles
from .chips import (
    ChipDistribution,
    classify,
    distance_search,
    distance_to_nonterminating,
    pigeonhole_threshold,
    verify_abelian,
)
from .divisor import (
    Divisor,
    canonical_divisor,
    dual_pair,
    effective_of_degree,
    has_effective_equivalent,
    has_effective_equivalent_by_game,
    rank,
    rank_with_witness,
    riemann_roch_residual,
    witness_check,
)
from .feedback import (
    dist_under_acyclic,
    fas_distribution,
    minfas_exact,
    rotate_fas,
    under_acyclic_orientation,
)
from .graphs import (
    Digraph,
    Graph,
    all_connected_graphs,
    build_digraph,
    random_eulerian_digraph,
    random_graph,
)
from .reductions import divisor_subdivide, subdivide, verify_phi_lemma

FIGURE1_ARCS = ((0, 3), (2, 0), (1, 2), (3, 1), (3, 2), (2, 3))
MAX_FAILURES_KEPT = 20


def figure1_digraph() -> Digraph:
    """The digraph of the FAS-rotation figure, with v1..v4 mapped to 0..3."""
    return build_digraph(4, FIGURE1_ARCS)


def d2_digraph() -> Digraph:
    return build_digraph(2, ((0, 1), (1, 0)))


def c3_digraph() -> Digraph:
    return build_digraph(3, ((0, 1), (1, 2), (2, 0)))


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)
    failure_count: int = 0
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failure_count == 0 and self.checked > 0

    def fail(self, **info) -> None:
        self.failure_count += 1
        if len(self.failures) < MAX_FAILURES_KEPT:
            self.failures.append(info)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "checked": self.checked,
            "failures": self.failure_count,
            "examples": self.failures,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            **self.details,
        }


class _timed:
    def __init__(self, result: CheckResult):
        self.result = result

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self.result

    def __exit__(self, *exc):
        self.result.seconds = time.perf_counter() - self.t0
        return False


# ---------------------------------------------------------------- universes

def _dedupe(hosts):
    seen, out = set(), []
    for h in hosts:
        key = (h.n, h.edges)
        if key not in seen:
            seen.add(key)
            out.append(h)
    return out


def graph_universe(seed: int = 0, count: int = 200, n_max: int = 5, max_mult: int = 2) -> list[Graph]:
    """Every connected graph on <= 3 vertices, then random ones up to ``n_max``."""
    hosts = []
    for n in range(1, min(3, n_max) + 1):
        hosts.extend(all_connected_graphs(n, max_mult))
    rng = np.random.default_rng(seed)
    hosts = _dedupe(hosts)
    tries = 0
    while len(hosts) < count and tries < 100 * count:
        tries += 1
        n = int(rng.integers(max(2, min(4, n_max)), n_max + 1))
        g = random_graph(n, rng, max_mult=max_mult, density=float(rng.uniform(0.3, 1.0)))
        hosts = _dedupe(hosts + [g])
    return hosts


def eulerian_universe(seed: int = 0, count: int = 200, n_max: int = 5, max_arcs: int = 10) -> list[Digraph]:
    """Random Eulerian digraphs with at most ``max_arcs`` arcs, plus the figure digraph."""
    rng = np.random.default_rng(seed)
    hosts = [figure1_digraph(), d2_digraph(), c3_digraph()]
    tries = 0
    while len(hosts) < count and tries < 200 * count:
        tries += 1
        n = int(rng.integers(2, n_max + 1))
        cycles = int(rng.integers(1, 5))
        d = random_eulerian_digraph(n, cycles, n, rng)
        if d.num_edges <= max_arcs:
            hosts = _dedupe(hosts + [d])
    return hosts


def small_graphs(n_max: int = 4, max_mult: int = 2) -> list[Graph]:
    out = []
    for n in range(1, n_max + 1):
        out.extend(all_connected_graphs(n, max_mult))
    return out


def divisor_pairs(seed: int = 0, count: int = 500, n_max: int = 4, max_mult: int = 2,
                  low: int = -2) -> list[Divisor]:
    """Random divisors with ``low <= f(v) <= d(v) - 1`` on random small graphs."""
    rng = np.random.default_rng(seed)
    graphs = small_graphs(n_max, max_mult)
    out = []
    for _ in range(count):
        g = graphs[int(rng.integers(len(graphs)))]
        vals = tuple(int(rng.integers(low, int(d))) if d >= 1 else low for d in g.degrees)
        vals = tuple(min(v, int(d) - 1) for v, d in zip(vals, g.degrees))
        out.append(Divisor(g, vals))
    return out


def _canonical_key(g: Graph) -> tuple:
    best = None
    for perm in itertools.permutations(range(g.n)):
        key = tuple(sorted((min(perm[u], perm[v]), max(perm[u], perm[v]), m) for u, v, m in g.edges))
        if best is None or key < best:
            best = key
    return best


def graph_classes(n_max: int = 4, max_mult: int = 2) -> list[Graph]:
    """One labelled representative per isomorphism class of connected multigraphs."""
    out = []
    for n in range(1, n_max + 1):
        seen = set()
        for g in all_connected_graphs(n, max_mult):
            key = _canonical_key(g)
            if key not in seen:
                seen.add(key)
                out.append(g)
    return out


def atlas_graphs(n_max: int = 5) -> list[Graph]:
    """Connected simple graphs up to isomorphism, from the networkx atlas."""
    out = []
    for h in nx.graph_atlas_g():
        if 1 <= h.number_of_nodes() <= n_max and nx.is_connected(h):
            out.append(Graph(h.number_of_nodes(), tuple((u, v, 1) for u, v in h.edges())))
    return out


# ------------------------------------------------------------------- checks

def check_dist_zero_graphs(graphs) -> CheckResult:
    res = CheckResult("dist(0_G) = |E(G)|")
    with _timed(res):
        for g in graphs:
            res.checked += 1
            d = distance_to_nonterminating(ChipDistribution.zero(g))
            if d != g.num_edges:
                res.fail(edges=g.edges, dist=d, E=g.num_edges)
    return res


def check_dist_minfas(digraphs) -> CheckResult:
    res = CheckResult("dist(0_D) = minfas(D)")
    with _timed(res):
        for d in digraphs:
            res.checked += 1
            lhs = distance_to_nonterminating(ChipDistribution.zero(d))
            rhs = minfas_exact(d)[0]
            if lhs != rhs:
                res.fail(arcs=d.arcs, dist=lhs, minfas=rhs)
    return res


def check_fas_rotation(digraphs, rounds_per_vertex: int = 3) -> CheckResult:
    res = CheckResult("minimum-FAS distribution and rotation")
    with _timed(res):
        for d in digraphs:
            res.checked += 1
            size, fas = minfas_exact(d)
            x = fas_distribution(fas)
            if x.size != size or classify(x).terminating:
                res.fail(arcs=d.arcs, reason="fas distribution terminates")
                continue
            for i in range(rounds_per_vertex * d.n):
                fas, x, _ = rotate_fas(fas, x)
                if fas.size != size or np.any(x.array < fas.in_degrees) or not fas.verify():
                    res.fail(arcs=d.arcs, reason=f"rotation {i + 1} broke an invariant")
                    break
    return res


def check_duality(divisors) -> CheckResult:
    res = CheckResult("rank(f) = dist(K+ - f) - 1")
    with _timed(res):
        for f in divisors:
            res.checked += 1
            r = rank(f)
            dist = distance_to_nonterminating(dual_pair(f))
            if r != dist - 1:
                res.fail(edges=f.host.edges, f=f.values, rank=r, dist=dist)
    return res


def riemann_roch_samples(seed: int = 0, count: int = 300, n_max: int = 4,
                         max_mult: int = 2, bound: int = 3) -> list[Divisor]:
    rng = np.random.default_rng(seed)
    graphs = small_graphs(n_max, max_mult)
    return [
        Divisor(g, tuple(int(v) for v in rng.integers(-bound, bound + 1, size=g.n)))
        for g in (graphs[int(i)] for i in rng.integers(len(graphs), size=count))
    ]


def check_riemann_roch(divisors) -> CheckResult:
    res = CheckResult("Riemann-Roch residual = 0")
    with _timed(res):
        for f in divisors:
            res.checked += 1
            r = riemann_roch_residual(f)
            if r != 0:
                res.fail(edges=f.host.edges, f=f.values, residual=r)
    return res


def check_acyclic_case(graphs, verify_dist: bool = True) -> CheckResult:
    """Greedy vs exhaustive on every ``x <= d``; ``|E| - |x|`` vs search when recognised."""
    res = CheckResult("dist(x) = |E| - |x| under acyclic orientations")
    recognised = 0
    with _timed(res):
        for g in graphs:
            for xs in itertools.product(*(range(int(d) + 1) for d in g.degrees)):
                x = ChipDistribution(g, xs)
                res.checked += 1
                greedy = under_acyclic_orientation(g, x, "greedy")
                exhaustive = under_acyclic_orientation(g, x, "exhaustive")
                if (greedy is None) != (exhaustive is None):
                    res.fail(edges=g.edges, x=xs, greedy=greedy is not None,
                             exhaustive=exhaustive is not None)
                    continue
                if greedy is None or not verify_dist:
                    continue
                recognised += 1
                formula = dist_under_acyclic(g, x)
                search = distance_to_nonterminating(x)
                if formula != search:
                    res.fail(edges=g.edges, x=xs, formula=formula, search=search)
    res.details["recognised"] = recognised
    return res


def check_phi_lemma(digraphs) -> CheckResult:
    res = CheckResult("dist_D(0) = dist_phi(D)(base)")
    reports = []
    with _timed(res):
        for d in digraphs:
            res.checked += 1
            rep = verify_phi_lemma(d)
            reports.append(rep.as_dict())
            if not rep.ok:
                res.fail(arcs=d.arcs, report=rep.as_dict())
    res.details["reports"] = reports
    return res


def subdivision_samples(seed: int = 0, per_graph: int = 2, n_max: int = 4, max_mult: int = 2):
    """``per_graph`` random ``(f, x)`` on every graph class up to ``n_max``."""
    rng = np.random.default_rng(seed)
    out = []
    for g in (g for g in graph_classes(n_max, max_mult) for _ in range(per_graph)):
        f = tuple(int(rng.integers(-2, int(d))) if d else 0 for d in g.degrees)
        x = tuple(int(rng.integers(0, int(d) + 1)) for d in g.degrees)
        out.append((g, f, x))
    return out


def check_subdivision(samples) -> CheckResult:
    res = CheckResult("rank and dist survive subdivision")
    with _timed(res):
        for g, f, x in samples:
            res.checked += 1
            h, f2 = divisor_subdivide(g, Divisor(g, f))
            r1, r2 = rank(Divisor(g, f)), rank(f2)
            _, x2 = subdivide(g, ChipDistribution(g, x))
            d1, d2 = distance_to_nonterminating(ChipDistribution(g, x)), distance_to_nonterminating(x2)
            if r1 != r2 or d1 != d2:
                res.fail(edges=g.edges, f=f, x=x, rank=(r1, r2), dist=(d1, d2))
    return res


def abelian_instances(seed: int = 0, count: int = 100, n_max: int = 6):
    """Terminating distributions that need at least one firing."""
    rng = np.random.default_rng(seed)
    out = []
    tries = 0
    while len(out) < count and tries < 100 * count:
        tries += 1
        if rng.random() < 0.7:
            host = random_graph(int(rng.integers(2, n_max + 1)), rng, max_mult=3)
        else:
            n = int(rng.integers(2, n_max + 1))
            host = random_eulerian_digraph(n, int(rng.integers(1, 5)), n, rng)
        top = max(0, pigeonhole_threshold(host))
        total = int(rng.integers(0, top + 1))
        chips = np.bincount(rng.integers(0, host.n, size=total), minlength=host.n)
        x = ChipDistribution(host, tuple(int(c) for c in chips))
        out_x = classify(x, certify=False)
        if out_x.terminating and out_x.steps > 0:
            out.append(x)
    return out


def check_abelian(instances, trials: int = 20, seed: int = 0) -> CheckResult:
    res = CheckResult("abelian property")
    with _timed(res):
        for i, x in enumerate(instances):
            res.checked += 1
            try:
                verify_abelian(x, trials, seed=[seed, i])
            except AssertionError as exc:
                res.fail(edges=x.host.edges, chips=x.chips, error=str(exc))
    return res


def check_witness_verifier(divisors) -> CheckResult:
    """The NP certificate check: accepts the rank witness, rejects every
    candidate for a smaller bound, and stays within the reduction budget."""
    res = CheckResult("rank <= k witness verifier")
    worst = 0.0
    with _timed(res):
        for f in divisors:
            res.checked += 1
            r, g = rank_with_witness(f)
            if g is not None:
                ok, steps = witness_check(f, r, g)
                budget = f.host.n * f.host.num_edges * (sum(abs(a - b) for a, b in zip(f.values, g)) + 1)
                worst = max(worst, steps / budget)
                if not ok or steps > budget:
                    res.fail(f=f.values, edges=f.host.edges, k=r, g=g, steps=steps, budget=budget)
            if r >= 0:
                for d in range(r + 1):
                    for cand in effective_of_degree(f.host.n, d):
                        if witness_check(f, r - 1, cand)[0]:
                            res.fail(f=f.values, edges=f.host.edges, k=r - 1, g=cand,
                                     reason="accepted a witness below the rank")
    res.details["worst_budget_fraction"] = round(worst, 4)
    return res


def check_oracle_classify(hosts, per_host: int = 10, seed: int = 0) -> CheckResult:
    res = CheckResult("classify vs cycle detection")
    rng = np.random.default_rng(seed)
    with _timed(res):
        for h in hosts:
            samples = [ChipDistribution.zero(h)]
            found = distance_search(ChipDistribution.zero(h))
            samples.append(ChipDistribution(h, found.witness))
            cap = 2 * h.num_edges if not h.directed else h.num_edges
            for _ in range(per_host):
                total = int(rng.integers(0, cap + 1))
                chips = np.bincount(rng.integers(0, h.n, size=total), minlength=h.n)
                samples.append(ChipDistribution(h, tuple(int(c) for c in chips)))
            for x in samples:
                res.checked += 1
                fast = classify(x).terminating
                slow = oracles.classify_by_cycle_detection(x).terminating
                if fast != slow:
                    res.fail(edges=h.edges, chips=x.chips, fast=fast, oracle=slow)
    return res


def check_oracle_rank(divisors) -> CheckResult:
    res = CheckResult("rank vs definition-level oracle")
    with _timed(res):
        for f in divisors:
            res.checked += 1
            fast = rank(f)
            slow = oracles.brute_force_rank(f.host, f.values)
            if fast != slow:
                res.fail(edges=f.host.edges, f=f.values, rank=fast, oracle=slow)
    return res


def check_winnability_routes(divisors) -> CheckResult:
    """q-reduction and the dual-pair game must agree on winnability."""
    res = CheckResult("winnable by reduction vs by game")
    with _timed(res):
        for f in divisors:
            res.checked += 1
            if has_effective_equivalent(f) != has_effective_equivalent_by_game(f):
                res.fail(edges=f.host.edges, f=f.values)
    return res


def riemann_roch_suite(n_max: int = 3, samples: int = 50, seed: int = 0) -> CheckResult:
    return check_riemann_roch(riemann_roch_samples(seed, samples, n_max))


def oracle_suite(seed: int = 0, graphs: int = 40, digraphs: int = 40, divisors: int = 60) -> dict:
    """Pass/fail matrix of fast paths against the brute-force oracles."""
    gs = graph_universe(seed, graphs, n_max=4)
    ds = eulerian_universe(seed, digraphs, n_max=4, max_arcs=8)
    divs = divisor_pairs(seed, divisors)
    results = [
        check_oracle_classify(gs + ds, per_host=5, seed=seed),
        check_oracle_rank(divs),
        check_winnability_routes(divs),
        _check_oracle_dist(gs[:25] + ds[:25]),
        _check_oracle_minfas(ds),
    ]
    return {r.name: r.as_dict() for r in results}


def _check_oracle_dist(hosts) -> CheckResult:
    res = CheckResult("distance search vs brute force")
    with _timed(res):
        for h in hosts:
            res.checked += 1
            x = ChipDistribution.zero(h)
            fast, slow = distance_to_nonterminating(x), oracles.brute_force_dist(x)
            if fast != slow:
                res.fail(edges=h.edges, fast=fast, oracle=slow)
    return res


def _check_oracle_minfas(digraphs) -> CheckResult:
    res = CheckResult("minfas DP vs arc-subset search")
    with _timed(res):
        for d in digraphs:
            if d.num_edges > 12:
                continue
            res.checked += 1
            fast, slow = minfas_exact(d)[0], oracles.brute_force_minfas(d)
            if fast != slow:
                res.fail(arcs=d.arcs, fast=fast, oracle=slow)
    return res


def special_case_riemann_roch(graphs) -> CheckResult:
    """For ``x`` under an acyclic orientation and ``f = K+ - x``:
    ``rank(f) = deg f - |E| + |V| - 1`` and ``rank(K - f) = -1``."""
    res = CheckResult("Riemann-Roch special case")
    with _timed(res):
        for g in graphs:
            kp = [int(d) - 1 for d in g.degrees]
            for xs in itertools.product(*(range(int(d) + 1) for d in g.degrees)):
                x = ChipDistribution(g, xs)
                if under_acyclic_orientation(g, x) is None:
                    continue
                f = Divisor(g, tuple(b - a for a, b in zip(xs, kp)))
                res.checked += 1
                r1 = rank(f)
                r2 = rank(canonical_divisor(g) - f)
                if r1 != f.degree - g.num_edges + g.n - 1 or r2 != -1:
                    res.fail(edges=g.edges, x=xs, rank=r1, rank_dual=r2)
    return res
