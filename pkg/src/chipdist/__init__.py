"""Chip-firing games, distances to non-terminating distributions and divisor ranks.

Hot loops run as numba kernels; set ``CHIPDIST_DISABLE_NUMBA=1`` before
import to use the pure-numpy versions instead.
"""
from ._backend import BACKEND
from .chips import (
    AllFiredPeriod,
    ChipCountBound,
    ChipDistribution,
    DistanceResult,
    GameOutcome,
    RepeatedConfiguration,
    StepBoundExceeded,
    active_vertices,
    classify,
    distance_search,
    distance_to_nonterminating,
    fire,
    is_active,
    pigeonhole_threshold,
    post_all_fired_order,
    run_legal_game,
    step_bound,
    verify_abelian,
)
from .divisor import (
    Divisor,
    DualityReport,
    ReducedDivisor,
    canonical_divisor,
    dual_divisor,
    dual_pair,
    has_effective_equivalent,
    has_effective_equivalent_by_game,
    is_q_reduced,
    linear_equivalent,
    q_reduce,
    rank,
    rank_duality_check,
    rank_with_witness,
    riemann_roch_residual,
    verify_rank_upper_witness,
    witness_check,
)
from .errors import *  # noqa: F401,F403
from .feedback import (
    FeedbackArcSet,
    dist_under_acyclic,
    fas_distribution,
    fas_from_arcs,
    minfas,
    minfas_exact,
    rotate_fas,
    under_acyclic_orientation,
)
from .graphs import (
    Digraph,
    Graph,
    Instance,
    Orientation,
    bidirect,
    build_digraph,
    build_graph,
    dumps_instance,
    laplacian,
    load_instance,
    parse_instance,
    random_eulerian_digraph,
    random_graph,
)
from .reductions import (
    PhiLemmaReport,
    PhiResult,
    base_distribution,
    coupled_replay,
    divisor_subdivide,
    lift_distribution,
    phi_transform,
    subdivide,
    verify_phi_lemma,
)

__version__ = "0.1.0"
