"""Chip-firing games on graphs and digraphs.

A Graph is played as its bidirected digraph, so one simulator serves both
kinds of host.  Non-termination on Eulerian hosts is decided by the
step bound ``2|V|^2 |E| Delta`` for terminating games together with the
observation that once every vertex has fired, some order fires each vertex
once more and returns to the same distribution.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._backend import kernels
from .errors import (
    AbelianViolation,
    IllegalFiring,
    IllegalScript,
    PreconditionUnmet,
    UnsupportedHost,
)
from .graphs import Host, laplacian


@dataclass(frozen=True)
class ChipDistribution:
    host: Host
    chips: tuple

    def __post_init__(self):
        chips = tuple(int(c) for c in self.chips)
        if len(chips) != self.host.n:
            raise ValueError(f"expected {self.host.n} entries, got {len(chips)}")
        if any(c < 0 for c in chips):
            raise ValueError("chip counts must be nonnegative")
        object.__setattr__(self, "chips", chips)

    @classmethod
    def zero(cls, host: Host) -> "ChipDistribution":
        return cls(host, (0,) * host.n)

    @property
    def size(self) -> int:
        """Total number of chips."""
        return sum(self.chips)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.chips, dtype=np.int64)

    def __len__(self):
        return len(self.chips)

    def __getitem__(self, v):
        return self.chips[v]

    def plus(self, y: Sequence[int]) -> "ChipDistribution":
        return ChipDistribution(self.host, tuple(a + int(b) for a, b in zip(self.chips, y)))


# ------------------------------------------------------------ certificates

@dataclass(frozen=True)
class RepeatedConfiguration:
    first_seen_step: int
    repeat_step: int

    @property
    def period(self) -> int:
        return self.repeat_step - self.first_seen_step


@dataclass(frozen=True)
class StepBoundExceeded:
    bound: int


@dataclass(frozen=True)
class AllFiredPeriod:
    """Firing ``order`` once each from ``start`` is legal and returns to ``start``."""

    order: tuple
    start: tuple


@dataclass(frozen=True)
class ChipCountBound:
    """More chips than ``threshold``: pigeonhole forces an active vertex forever."""

    threshold: int


@dataclass(frozen=True)
class GameOutcome:
    """Result of a game.

    For a terminating game ``final`` is the stable distribution; otherwise it
    is the distribution at the moment the game was stopped.
    """

    terminating: bool
    steps: int
    final: ChipDistribution
    odometer: tuple
    certificate: object = None

    @property
    def verdict(self) -> str:
        return "terminating" if self.terminating else "non-terminating"


# ---------------------------------------------------------------- basics

def active_vertices(x: ChipDistribution) -> tuple:
    od = x.host.out_degrees
    return tuple(v for v in range(x.host.n) if x.chips[v] >= od[v])


def is_active(x: ChipDistribution, v: int) -> bool:
    return x.chips[v] >= x.host.out_degrees[v]


def fire(x: ChipDistribution, v: int) -> ChipDistribution:
    if not is_active(x, v):
        raise IllegalFiring(f"vertex {v} holds {x.chips[v]} < {int(x.host.out_degrees[v])} chips")
    a = x.array
    a[v] -= x.host.out_degrees[v]
    a += x.host.arc_matrix[v]
    return ChipDistribution(x.host, tuple(a))


def pigeonhole_threshold(host: Host) -> int:
    """``|x|`` above this value is non-terminating on ``host``."""
    if host.directed:
        return host.num_edges - host.n
    return 2 * host.num_edges - host.n


def step_bound(host: Host) -> int:
    """``2|V|^2|E|Delta`` of the (bidirected) digraph form of ``host``."""
    n = host.n
    if host.directed:
        arcs, delta = host.num_edges, host.max_degree
    else:
        arcs = 2 * host.num_edges
        delta = int(host.degrees.max()) if n else 0
    return 2 * n * n * arcs * delta


def _require_supported(host: Host) -> None:
    if host.directed and not host.is_eulerian:
        raise UnsupportedHost(
            "exact classification needs a graph or an Eulerian digraph; "
            "use oracles.classify_by_cycle_detection for general digraphs"
        )


def post_all_fired_order(x: ChipDistribution, last_fired: Sequence[int]) -> tuple:
    """Vertices sorted by the time of their latest firing.

    ``last_fired[v]`` is the step at which ``v`` last fired in the game that
    produced ``x``; every vertex must have fired.
    """
    if len(last_fired) != x.host.n:
        raise ValueError("one timestamp per vertex is required")
    if any(t <= 0 for t in last_fired):
        missing = [v for v, t in enumerate(last_fired) if t <= 0]
        raise PreconditionUnmet(f"vertices {missing} never fired")
    return tuple(int(v) for v in sorted(range(x.host.n), key=lambda v: last_fired[v]))


# ------------------------------------------------------------------ games

def _outcome_from_kernel(x, status, steps, final, odo, last, cap):
    host = x.host
    final_x = ChipDistribution(host, tuple(final))
    if status == kernels.TERMINATED:
        return GameOutcome(True, int(steps), final_x, tuple(int(c) for c in odo))
    if status == kernels.ALL_FIRED:
        order = post_all_fired_order(final_x, [int(t) for t in last])
        cert = AllFiredPeriod(order, final_x.chips)
    else:
        cert = StepBoundExceeded(int(cap))
    return GameOutcome(False, int(steps), final_x, tuple(int(c) for c in odo), cert)


def run_legal_game(
    x: ChipDistribution,
    policy: str = "min-index",
    step_cap: int = 10_000,
    *,
    seed=None,
    script: Sequence[int] | None = None,
    trace: bool = False,
):
    """Play a legal game and return ``(outcome, trace)``.

    ``policy`` is ``"min-index"``, ``"random"`` (needs ``seed``) or
    ``"scripted"`` (needs ``script``).  Reaching ``step_cap`` yields a
    non-terminating outcome carrying ``StepBoundExceeded(step_cap)``; whether
    that means anything is up to the caller.  ``trace`` is a list of
    ``(step, vertex, chips)`` tuples, empty unless requested.
    """
    if step_cap < 0:
        raise ValueError("step_cap must be >= 0")
    if policy == "min-index" and not trace:
        res = kernels.simulate(
            x.array, x.host.arc_matrix, x.host.out_degrees, int(step_cap), False
        )
        return _outcome_from_kernel(x, *res, step_cap), []

    if policy == "random":
        rng = np.random.default_rng(seed)
    elif policy == "scripted":
        if script is None:
            raise ValueError("scripted policy needs a script")
        script = [int(v) for v in script]
        step_cap = min(step_cap, len(script))
    elif policy != "min-index":
        raise ValueError(f"unknown policy {policy!r}")

    host = x.host
    od = host.out_degrees
    arcs = host.arc_matrix
    a = x.array
    odo = np.zeros(host.n, dtype=np.int64)
    log = []
    steps = 0
    while True:
        active = np.flatnonzero(a >= od)
        if steps >= step_cap:
            break
        if policy == "scripted":
            v = script[steps]
            if not (0 <= v < host.n) or a[v] < od[v]:
                raise IllegalScript(f"step {steps + 1}: vertex {v} is not active")
        elif active.size == 0:
            break
        elif policy == "random":
            v = int(rng.choice(active))
        else:
            v = int(active[0])
        a[v] -= od[v]
        a += arcs[v]
        odo[v] += 1
        steps += 1
        if trace:
            log.append((steps, v, tuple(int(c) for c in a)))
    final = ChipDistribution(host, tuple(a))
    odometer = tuple(int(c) for c in odo)
    if active.size == 0:
        return GameOutcome(True, steps, final, odometer), log
    return GameOutcome(False, steps, final, odometer, StepBoundExceeded(int(step_cap))), log


def classify(x: ChipDistribution, certify: bool = True) -> GameOutcome:
    """Decide whether ``x`` is terminating.

    Works on graphs and Eulerian digraphs.  A min-index game runs until it
    stops, until every vertex has fired, or until it passes the step bound.
    Above the pigeonhole threshold the answer is known up front; with
    ``certify`` the game is still played to try for an ``AllFiredPeriod``.
    """
    host = x.host
    _require_supported(host)
    threshold = pigeonhole_threshold(host)
    bound = step_bound(host)
    if x.size > threshold:
        if not certify:
            return GameOutcome(False, 0, x, (0,) * host.n, ChipCountBound(threshold))
        res = kernels.simulate(x.array, host.arc_matrix, host.out_degrees, bound + 1, True)
        if res[0] == kernels.ALL_FIRED:
            return _outcome_from_kernel(x, *res, bound)
        return GameOutcome(False, 0, x, (0,) * host.n, ChipCountBound(threshold))
    res = kernels.simulate(x.array, host.arc_matrix, host.out_degrees, bound + 1, True)
    return _outcome_from_kernel(x, *res, bound)


@dataclass(frozen=True)
class DistanceResult:
    dist: int
    witness: tuple
    steps_used: int


def distance_search(x: ChipDistribution) -> DistanceResult:
    """Smallest ``|y|`` with ``x + y`` non-terminating, plus the first such ``y``.

    Levels ``k = 0, 1, ...`` are scanned in full, placements within a level
    in colex order.  Exponential; meant for small hosts only.
    """
    host = x.host
    _require_supported(host)
    threshold = pigeonhole_threshold(host)
    bound = step_bound(host)
    limit = max(0, threshold + 1 - x.size)
    xa = x.array
    used = 0
    for k in range(limit + 1):
        y, steps = kernels.first_nonterminating_at_level(
            xa, host.arc_matrix, host.out_degrees, k, bound, threshold
        )
        used += int(steps)
        if y[0] >= 0:
            return DistanceResult(k, tuple(int(c) for c in y), used)
    raise AssertionError("pigeonhole level produced no witness")  # pragma: no cover


def distance_to_nonterminating(x: ChipDistribution) -> int:
    return distance_search(x).dist


@dataclass(frozen=True)
class AbelianReport:
    trials: int
    steps: int
    final: tuple
    odometer: tuple


def verify_abelian(x: ChipDistribution, trials: int = 20, seed=0) -> AbelianReport:
    """Play ``trials`` random legal games and insist they all agree."""
    ref = classify(x)
    if not ref.terminating:
        raise PreconditionUnmet("verify_abelian needs a terminating distribution")
    cap = step_bound(x.host) + 1
    seeds = np.random.SeedSequence(seed).spawn(trials)
    L = laplacian(x.host)
    for s in seeds:
        out, _ = run_legal_game(x, "random", cap, seed=s)
        if not out.terminating:
            raise AbelianViolation("a random game ran past the step bound")
        if (out.steps, out.final.chips, out.odometer) != (ref.steps, ref.final.chips, ref.odometer):
            raise AbelianViolation(
                f"random game gave steps={out.steps} final={out.final.chips} "
                f"odometer={out.odometer}; min-index gave steps={ref.steps} "
                f"final={ref.final.chips} odometer={ref.odometer}"
            )
        if not np.array_equal(x.array + L @ np.array(out.odometer), out.final.array):
            raise AbelianViolation("final distribution disagrees with the odometer")
    return AbelianReport(trials, ref.steps, ref.final.chips, ref.odometer)
