import numpy as np
import pytest

from chipdist.chips import (
    AllFiredPeriod,
    ChipCountBound,
    ChipDistribution,
    StepBoundExceeded,
    active_vertices,
    classify,
    distance_search,
    distance_to_nonterminating,
    fire,
    pigeonhole_threshold,
    post_all_fired_order,
    run_legal_game,
    step_bound,
    verify_abelian,
)
from chipdist.errors import IllegalFiring, IllegalScript, PreconditionUnmet, UnsupportedHost
from chipdist.graphs import build_digraph, laplacian

pytestmark = pytest.mark.usefixtures("backend")


def X(host, *chips):
    return ChipDistribution(host, chips)


def test_distribution_validation(k3):
    with pytest.raises(ValueError):
        X(k3, 1, -1, 0)
    with pytest.raises(ValueError):
        X(k3, 1, 1)
    assert X(k3, 1, 2, 0).size == 3
    assert ChipDistribution.zero(k3).chips == (0, 0, 0)


def test_active_vertices(k3, c3):
    assert active_vertices(X(k3, 2, 0, 0)) == (0,)
    assert active_vertices(X(c3, 1, 0, 0)) == (0,)
    assert active_vertices(X(k3, 1, 1, 1)) == ()


def test_fire(k3, d4, c3):
    assert fire(X(k3, 2, 0, 0), 0).chips == (0, 1, 1)
    assert fire(X(d4, 0, 0, 0, 2), 3).chips == (0, 1, 1, 0)
    assert fire(X(c3, 1, 0, 0), 0).chips == (0, 1, 0)
    with pytest.raises(IllegalFiring):
        fire(X(k3, 1, 1, 1), 0)


def test_thresholds(k3, c3, d4):
    assert pigeonhole_threshold(k3) == 3
    assert pigeonhole_threshold(c3) == 0
    assert step_bound(k3) == 2 * 9 * 6 * 2
    assert step_bound(d4) == 2 * 16 * 6 * 2


def test_min_index_game_terminates(k3):
    out, trace = run_legal_game(X(k3, 2, 0, 0))
    assert out.terminating and out.steps == 1
    assert out.final.chips == (0, 1, 1)
    assert trace == []


def test_min_index_game_hits_cap(k3):
    out, _ = run_legal_game(X(k3, 2, 1, 1), step_cap=10)
    assert not out.terminating
    assert out.certificate == StepBoundExceeded(10)
    assert out.steps == 10


def test_circulating_chip(c3):
    out, trace = run_legal_game(X(c3, 1, 0, 0), step_cap=3, trace=True)
    assert out.final.chips == (1, 0, 0)
    assert [v for _, v, _ in trace] == [0, 1, 2]
    assert trace[0] == (1, 0, (0, 1, 0))


def test_trace_matches_kernel_path(d4):
    x = X(d4, 2, 1, 1, 1)
    fast, _ = run_legal_game(x, step_cap=25)
    slow, _ = run_legal_game(x, step_cap=25, trace=True)
    assert (fast.steps, fast.final, fast.odometer) == (slow.steps, slow.final, slow.odometer)


def test_scripted_policy(k3):
    out, _ = run_legal_game(X(k3, 2, 1, 1), "scripted", script=[0, 1, 2])
    assert out.final.chips == (2, 1, 1)
    with pytest.raises(IllegalScript):
        run_legal_game(X(k3, 2, 1, 1), "scripted", script=[1])


def test_random_policy_is_seeded(k3):
    x = X(k3, 2, 1, 1)
    a, _ = run_legal_game(x, "random", 50, seed=3, trace=True)
    b, _ = run_legal_game(x, "random", 50, seed=3, trace=True)
    assert a == b


def test_unknown_policy(k3):
    with pytest.raises(ValueError):
        run_legal_game(X(k3, 0, 0, 0), "greedy")


def test_classify_pigeonhole(k3):
    out = classify(X(k3, 4, 0, 0), certify=False)
    assert not out.terminating
    assert out.certificate == ChipCountBound(3)


def test_classify_terminating(k3):
    out = classify(X(k3, 2, 0, 0))
    assert out.terminating and out.steps == 1


def test_classify_period_certificate(c3):
    out = classify(X(c3, 1, 0, 0))
    assert not out.terminating
    assert isinstance(out.certificate, AllFiredPeriod)
    assert out.certificate.order == (0, 1, 2)


def test_period_certificate_replays(d4, k3):
    for x in (X(d4, 0, 1, 1, 0), X(k3, 2, 1, 1), X(d4, 3, 0, 0, 3)):
        cert = classify(x).certificate
        assert isinstance(cert, AllFiredPeriod)
        y = ChipDistribution(x.host, cert.start)
        for v in cert.order:
            y = fire(y, v)
        assert y.chips == cert.start


def test_classify_rejects_non_eulerian():
    path = build_digraph(3, [(0, 1), (1, 2)])
    with pytest.raises(UnsupportedHost):
        classify(ChipDistribution.zero(path))


def test_post_all_fired_order(c3):
    assert post_all_fired_order(X(c3, 1, 0, 0), (1, 2, 3)) == (0, 1, 2)
    with pytest.raises(PreconditionUnmet):
        post_all_fired_order(X(c3, 1, 0, 0), (1, 0, 3))


@pytest.mark.parametrize("name, chips, expected", [
    ("k3", (0, 0, 0), 3),
    ("c3", (0, 0, 0), 1),
    ("k3", (1, 1, 1), 1),
    ("d4", (0, 0, 0, 0), 2),
    ("k3", (2, 1, 1), 0),
])
def test_distance(name, chips, expected, request):
    host = request.getfixturevalue(name)
    assert distance_to_nonterminating(ChipDistribution(host, chips)) == expected


def test_distance_witness_is_non_terminating(d4, k3):
    for x in (ChipDistribution.zero(d4), ChipDistribution.zero(k3)):
        found = distance_search(x)
        assert sum(found.witness) == found.dist
        assert not classify(x.plus(found.witness)).terminating


def test_verify_abelian(k3):
    rep = verify_abelian(X(k3, 2, 0, 0), 20)
    assert rep.steps == 1 and rep.final == (0, 1, 1)
    rep = verify_abelian(X(k3, 3, 0, 0), 20)
    assert rep.final == (1, 1, 1)


@pytest.mark.parametrize("name, chips", [("k3", (2, 2, 0)), ("triple_edge", (3, 2))])
def test_verify_abelian_needs_terminating(name, chips, request):
    # both exceed the pigeonhole threshold, so no game stops
    host = request.getfixturevalue(name)
    with pytest.raises(PreconditionUnmet):
        verify_abelian(ChipDistribution(host, chips))


def test_final_equals_laplacian_odometer(d4):
    x = X(d4, 1, 1, 0, 1)
    out, _ = run_legal_game(x)
    assert np.array_equal(x.array + laplacian(d4) @ np.array(out.odometer), out.final.array)
