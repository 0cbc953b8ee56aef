import pytest

from chipdist.chips import ChipDistribution, RepeatedConfiguration
from chipdist.errors import SearchBoxExceeded, StateSpaceTooLarge
from chipdist.graphs import all_connected_graphs, build_graph
from chipdist.oracles import (
    LatticeOracle,
    box_bound,
    brute_force_dist,
    brute_force_minfas,
    brute_force_rank,
    brute_force_under_acyclic,
    classify_by_cycle_detection,
    equivalent_by_box_search,
)


def test_cycle_detection(k3, c3):
    out = classify_by_cycle_detection(ChipDistribution(k3, (2, 1, 1)))
    assert not out.terminating
    assert out.certificate == RepeatedConfiguration(0, 3) and out.certificate.period == 3
    assert classify_by_cycle_detection(ChipDistribution(k3, (2, 0, 0))).terminating
    out = classify_by_cycle_detection(ChipDistribution(c3, (1, 0, 0)))
    assert out.certificate.period == 3


def test_cycle_detection_state_limit(k3):
    with pytest.raises(StateSpaceTooLarge):
        classify_by_cycle_detection(ChipDistribution(k3, (2, 1, 1)), max_states=1)


def test_brute_force_dist(k3, d4):
    assert brute_force_dist(ChipDistribution.zero(k3)) == 3
    assert brute_force_dist(ChipDistribution.zero(d4)) == 2
    assert brute_force_dist(ChipDistribution(k3, (1, 1, 1))) == 1


@pytest.mark.parametrize("f, r", [((1, 1, 1), 2), ((0, 0, 0), 0), ((-1, 0, 1), -1), ((-3, 0, 0), -1)])
def test_brute_force_rank(k3, f, r):
    assert brute_force_rank(k3, f) == r


def test_lattice_oracle_matches_box_search():
    for g in list(all_connected_graphs(3, 2))[:12]:
        lat = LatticeOracle(g)
        for f, h in [((0, 0, 0), (-2, 1, 1)), ((1, 0, -1), (0, 0, 0)), ((2, 0, 0), (0, 1, 1))]:
            assert lat.equivalent(f, h) == equivalent_by_box_search(g, f, h)


def test_box_examples(k3):
    assert equivalent_by_box_search(k3, (0, 0, 0), (-2, 1, 1))
    assert not equivalent_by_box_search(k3, (0, 0, 0), (-1, 0, 1))
    assert not equivalent_by_box_search(k3, (0, 0, 0), (1, 0, 0))
    assert box_bound(k3, (0, 0, 0), (-2, 1, 1)) == 4


def test_box_too_large():
    g = build_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    with pytest.raises(SearchBoxExceeded):
        equivalent_by_box_search(g, (0,) * 5, (-20, 5, 5, 5, 5))


def test_brute_force_minfas(c3, d4):
    assert brute_force_minfas(c3) == 1
    assert brute_force_minfas(d4) == 2


def test_brute_force_under_acyclic(k3):
    assert brute_force_under_acyclic(k3, (0, 1, 2))
    assert not brute_force_under_acyclic(k3, (1, 1, 1))
