"""Frozen reports; regenerate only after checking a diff by hand."""
import json
from pathlib import Path

import pytest

from chipdist.chips import ChipDistribution, distance_to_nonterminating
from chipdist.feedback import fas_distribution, fas_from_arcs, minfas, rotate_fas
from chipdist.graphs import parse_instance
from chipdist.reductions import verify_phi_lemma
from chipdist.suites import c3_digraph, d2_digraph

GOLDEN = Path(__file__).parent / "golden"


def load(name):
    return json.loads((GOLDEN / name).read_text())


def test_figure1_instance():
    doc = load("figure1.json")
    d = parse_instance(doc["instance"]).host
    assert minfas(d) == doc["minfas"]
    assert distance_to_nonterminating(ChipDistribution.zero(d)) == doc["dist_zero"]
    fas = fas_from_arcs(d, doc["left_panel"]["fas"])
    x = fas_distribution(fas)
    assert list(x.chips) == doc["left_panel"]["chips"]
    fas2, x2, v0 = rotate_fas(fas, x)
    assert v0 == doc["rotation"]["fired"]
    assert [[u, v] for u, v, _ in fas2.arcs] == doc["rotation"]["fas"]
    assert list(x2.chips) == doc["rotation"]["chips"]


@pytest.mark.parametrize("name, make", [("d2", d2_digraph), ("c3", c3_digraph)])
def test_phi_lemma_reports(name, make):
    got = verify_phi_lemma(make()).as_dict()
    got.pop("wall_time")
    assert got == load(f"phi_lemma_{name}.json")
