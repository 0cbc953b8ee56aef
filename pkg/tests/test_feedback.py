import numpy as np
import pytest

from chipdist.chips import ChipDistribution, classify, distance_to_nonterminating
from chipdist.errors import NoSource, NotMinimal, PreconditionUnmet, TooLarge
from chipdist.feedback import (
    FeedbackArcSet,
    dist_under_acyclic,
    fas_distribution,
    fas_from_arcs,
    indegree_distribution,
    minfas,
    minfas_exact,
    rotate_fas,
    under_acyclic_orientation,
)
from chipdist.graphs import Orientation, build_digraph, build_graph
from chipdist.oracles import brute_force_minfas

pytestmark = pytest.mark.usefixtures("backend")


def test_minfas_values(c3, d4):
    assert minfas(c3) == 1
    assert minfas(d4) == 2
    assert minfas(build_digraph(4, [(0, 1), (1, 2), (2, 3)])) == 0


def test_minfas_certificate(d4):
    size, fas = minfas_exact(d4)
    assert fas.size == size and fas.verify()
    assert brute_force_minfas(d4) == size


def test_minfas_parallel_arcs():
    d = build_digraph(2, [(0, 1, 3), (1, 0, 3)])
    assert minfas(d) == 3


def test_minfas_limit(c3):
    with pytest.raises(TooLarge):
        minfas_exact(c3, limit=2)


def test_fas_rejects_bad_order(c3):
    with pytest.raises(ValueError):
        FeedbackArcSet(c3, ((0, 1, 1),), (0, 1, 2))


def test_fas_distributions(d4, c3, d2):
    assert fas_distribution(fas_from_arcs(d4, [(0, 3), (2, 3)])).chips == (0, 0, 0, 2)
    assert fas_distribution(fas_from_arcs(c3, [(2, 0)])).chips == (1, 0, 0)
    assert fas_distribution(fas_from_arcs(d2, [(1, 0)])).chips == (1, 0)


def test_fas_distribution_rejects_non_minimal(c3):
    with pytest.raises(NotMinimal):
        fas_distribution(fas_from_arcs(c3, [(2, 0), (0, 1)]))


def test_fas_distribution_needs_eulerian():
    d = build_digraph(3, [(0, 1), (1, 2), (2, 0), (0, 2)])
    size, fas = minfas_exact(d)
    with pytest.raises(PreconditionUnmet):
        fas_distribution(fas)


def test_fas_distribution_is_non_terminating(d4):
    _, fas = minfas_exact(d4)
    assert not classify(fas_distribution(fas)).terminating


def test_rotation_reproduces_figure(d4):
    fas = fas_from_arcs(d4, [(0, 3), (2, 3)])
    x = fas_distribution(fas)
    fas2, x2, v0 = rotate_fas(fas, x)
    assert v0 == 3
    assert x2.chips == (0, 1, 1, 0)
    assert fas2.arcs == ((3, 1, 1), (3, 2, 1))


def test_rotation_on_cycle(c3):
    fas = fas_from_arcs(c3, [(2, 0)])
    fas2, x2, v0 = rotate_fas(fas, fas_distribution(fas))
    assert (v0, x2.chips, fas2.arcs) == (0, (0, 1, 0), ((0, 1, 1),))


def test_rotation_keeps_invariants(d4):
    _, fas = minfas_exact(d4)
    x = fas_distribution(fas)
    fired = set()
    for _ in range(3 * d4.n):
        fas, x, v = rotate_fas(fas, x)
        fired.add(v)
        assert fas.size == 2 and np.all(x.array >= fas.in_degrees)
    assert fired == set(range(d4.n))


def test_rotation_errors(c3):
    fas = fas_from_arcs(c3, [(2, 0)])
    with pytest.raises(PreconditionUnmet):
        rotate_fas(fas, ChipDistribution.zero(c3))
    big = fas_from_arcs(c3, [(0, 1), (1, 2), (2, 0)])
    with pytest.raises(NoSource):
        rotate_fas(big, ChipDistribution(c3, (1, 1, 1)))


def test_fas_from_arcs_rejects_cyclic_rest(d4):
    with pytest.raises(ValueError):
        fas_from_arcs(d4, [(2, 3)])


def test_under_acyclic_examples(k3):
    o = under_acyclic_orientation(k3, ChipDistribution(k3, (0, 1, 2)))
    assert o.order == (0, 1, 2) and o.in_degrees.tolist() == [0, 1, 2]
    assert under_acyclic_orientation(k3, ChipDistribution(k3, (1, 1, 1))) is None
    assert under_acyclic_orientation(k3, ChipDistribution.zero(k3)) is not None


@pytest.mark.parametrize("chips, expected", [((0, 0, 1), 2), ((0, 1, 2), 0), ((0, 0, 0), 3)])
def test_dist_under_acyclic(k3, chips, expected):
    x = ChipDistribution(k3, chips)
    assert dist_under_acyclic(k3, x) == expected == distance_to_nonterminating(x)


def test_dist_under_acyclic_precondition(k3):
    with pytest.raises(PreconditionUnmet):
        dist_under_acyclic(k3, ChipDistribution(k3, (1, 1, 1)))


def test_greedy_matches_exhaustive_on_multigraph():
    g = build_graph(4, [(0, 1, 2), (1, 2), (2, 3, 2), (0, 3)])
    import itertools
    for xs in itertools.product(*(range(int(d) + 1) for d in g.degrees)):
        x = ChipDistribution(g, xs)
        greedy = under_acyclic_orientation(g, x, "greedy")
        exhaustive = under_acyclic_orientation(g, x, "exhaustive")
        assert (greedy is None) == (exhaustive is None)


def test_exhaustive_limit():
    g = build_graph(9, [(i, i + 1) for i in range(8)])
    with pytest.raises(TooLarge):
        under_acyclic_orientation(g, ChipDistribution.zero(g), "exhaustive")
    with pytest.raises(ValueError):
        under_acyclic_orientation(g, ChipDistribution.zero(g), "magic")


def test_indegree_distribution(k3):
    o = Orientation.from_order(k3, (1, 0, 2))
    assert indegree_distribution(o).chips == (1, 0, 2)
