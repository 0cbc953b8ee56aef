"""Divisors on graphs: reduction, winnability, rank, Riemann-Roch.

Linear equivalence is decided through q-reduced divisors (Dhar's burning
algorithm); rank is exact by enumerating effective divisors of increasing
degree.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ._backend import kernels
from .chips import ChipDistribution, classify, distance_to_nonterminating
from .errors import DualityViolation, HostMismatch, OutOfRange
from .graphs import Graph

Q = 0


@dataclass(frozen=True)
class Divisor:
    host: Graph
    values: tuple

    def __post_init__(self):
        if self.host.directed:
            raise TypeError("divisors live on undirected graphs")
        values = tuple(int(c) for c in self.values)
        if len(values) != self.host.n:
            raise ValueError(f"expected {self.host.n} entries, got {len(values)}")
        object.__setattr__(self, "values", values)

    @property
    def degree(self) -> int:
        return sum(self.values)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.values, dtype=np.int64)

    @property
    def is_effective(self) -> bool:
        return all(c >= 0 for c in self.values)

    def __getitem__(self, v):
        return self.values[v]

    def _other(self, other) -> tuple:
        if isinstance(other, Divisor):
            if other.host != self.host:
                raise HostMismatch("divisors live on different graphs")
            return other.values
        return tuple(int(c) for c in other)

    def __add__(self, other) -> "Divisor":
        return Divisor(self.host, tuple(a + b for a, b in zip(self.values, self._other(other))))

    def __sub__(self, other) -> "Divisor":
        return Divisor(self.host, tuple(a - b for a, b in zip(self.values, self._other(other))))

    def __neg__(self) -> "Divisor":
        return Divisor(self.host, tuple(-a for a in self.values))


def canonical_divisor(g: Graph) -> Divisor:
    """K(v) = d(v) - 2."""
    return Divisor(g, tuple(int(d) - 2 for d in g.degrees))


def k_plus(g: Graph) -> tuple:
    return tuple(int(d) - 1 for d in g.degrees)


def dual_pair(f: Divisor) -> ChipDistribution:
    """The chip distribution ``K+ - f``."""
    kp = k_plus(f.host)
    if any(a > b for a, b in zip(f.values, kp)):
        raise OutOfRange("dual pair needs f(v) <= d(v) - 1 everywhere")
    return ChipDistribution(f.host, tuple(b - a for a, b in zip(f.values, kp)))


def dual_divisor(x: ChipDistribution) -> Divisor:
    if x.host.directed:
        raise TypeError("dual divisors exist on undirected graphs only")
    return Divisor(x.host, tuple(b - a for a, b in zip(x.chips, k_plus(x.host))))


@dataclass(frozen=True)
class ReducedDivisor:
    base: Divisor
    q: int
    values: tuple
    set_firings: int = 0

    @property
    def divisor(self) -> Divisor:
        return Divisor(self.base.host, self.values)


def q_reduce(f: Divisor, q: int = Q) -> ReducedDivisor:
    """The unique q-reduced divisor equivalent to ``f``."""
    values, steps = kernels.q_reduce(f.array, f.host.adjacency, int(q))
    return ReducedDivisor(f, int(q), tuple(int(c) for c in values), int(steps))


def is_q_reduced(f: Divisor, q: int = Q) -> bool:
    """Nonnegative off ``q`` and every vertex burns when the fire starts at ``q``."""
    if any(c < 0 for v, c in enumerate(f.values) if v != q):
        return False
    a = f.host.adjacency
    burnt = np.zeros(f.host.n, dtype=bool)
    burnt[q] = True
    while True:
        e = a[:, burnt].sum(axis=1)
        catch = ~burnt & (f.array < e)
        if not catch.any():
            return bool(burnt.all())
        burnt |= catch


def linear_equivalent(f: Divisor, h: Divisor) -> bool:
    if f.host != h.host:
        raise HostMismatch("divisors live on different graphs")
    if f.degree != h.degree:
        return False
    return q_reduce(f).values == q_reduce(h).values


def has_effective_equivalent(f: Divisor) -> bool:
    """Winnability: some effective divisor is equivalent to ``f``."""
    if f.degree < 0:
        return False
    return q_reduce(f).values[Q] >= 0


def has_effective_equivalent_by_game(f: Divisor) -> bool:
    """Same question answered by the chip game on the dual pair."""
    return classify(dual_pair(f), certify=False).terminating


def effective_of_degree(n: int, k: int) -> Iterator[tuple]:
    """Effective divisors of degree ``k`` in colex order of chip placements."""
    c = [0] * k
    while True:
        y = [0] * n
        for v in c:
            y[v] += 1
        yield tuple(y)
        for i in range(k):
            top = c[i + 1] if i + 1 < k else n - 1
            if c[i] < top:
                c[i] += 1
                c[:i] = [0] * i
                break
        else:
            return


def rank_with_witness(f: Divisor) -> tuple[int, tuple | None]:
    """Rank of ``f`` and the first effective ``g`` (colex) with ``f - g`` unwinnable.

    The witness is ``None`` when ``f`` itself is unwinnable.
    """
    if not has_effective_equivalent(f):
        return -1, None
    n = f.host.n
    fa = f.array
    adj = f.host.adjacency
    for k in range(1, f.degree + 2):
        for g in effective_of_degree(n, k):
            rest = fa - np.array(g, dtype=np.int64)
            values, _ = kernels.q_reduce(rest, adj, Q)
            if values[Q] < 0:
                return k - 1, g
    raise AssertionError("removing deg(f)+1 chips must leave an unwinnable divisor")  # pragma: no cover


def rank(f: Divisor) -> int:
    return rank_with_witness(f)[0]


def witness_check(f: Divisor, k: int, g: Sequence[int]) -> tuple[bool, int]:
    """NP certificate check for ``rank(f) <= k``; returns ``(ok, set_firings)``.

    One q-reduction and no game simulation.
    """
    g = tuple(int(c) for c in g)
    if len(g) != f.host.n or any(c < 0 for c in g) or sum(g) > k + 1:
        return False, 0
    rest = f - g
    if rest.degree < 0:
        return True, 0
    red = q_reduce(rest)
    return red.values[Q] < 0, red.set_firings


def verify_rank_upper_witness(f: Divisor, k: int, g: Sequence[int]) -> bool:
    return witness_check(f, k, g)[0]


def riemann_roch_residual(f: Divisor) -> int:
    """``rank(f) - rank(K - f) - (deg f - |E| + |V|)``; zero on every input."""
    g = f.host
    return rank(f) - rank(canonical_divisor(g) - f) - (f.degree - g.num_edges + g.n)


@dataclass(frozen=True)
class DualityReport:
    rank: int
    dist: int

    @property
    def holds(self) -> bool:
        return self.rank == self.dist - 1


def rank_duality_check(f: Divisor) -> DualityReport:
    """Compare ``rank(f)`` with ``dist(K+ - f) - 1``, each computed on its own."""
    report = DualityReport(rank(f), distance_to_nonterminating(dual_pair(f)))
    if not report.holds:
        raise DualityViolation(f"rank {report.rank} != dist {report.dist} - 1 for {f.values}")
    return report
