"""Strategic games on threshold social networks with several products and
an opt-out strategy, in exact rational arithmetic."""

from .dynamics import (
    FixedOrderBestResponse,
    RandomBetterResponse,
    SmallestIndexBestResponse,
    build_improvement_graph,
    has_fip,
    is_weakly_acyclic,
    run_scheduler,
    uniform_fip_cycle_check,
)
from .equilibria import (
    NEClass,
    NEReport,
    SelfSustainingSCS,
    best_responses,
    classify_ne,
    compute_xt,
    construct_ne_dag,
    decide_ne_cycle,
    enumerate_ne,
    expand_r,
    find_nontrivial_ne_sourcefree,
    find_self_sustaining_scs,
    is_nash,
    nash_violation,
    solve_ne,
    verify_lemma1_structure,
    verify_support_structure,
)
from .fileformat import parse_network, serialize_network
from .gadgets import (
    PartitionInstance,
    gen_equitable,
    gen_fig1,
    gen_fig3,
    gen_partition_reduction,
    gen_pos_witness,
    gen_random,
)
from .metrics import Ratio, efficiency, social_optimum
from .model import (
    NULL,
    GraphClass,
    SocialNetwork,
    classify_graph,
    neighbors,
    payoff,
    social_welfare,
    supporters,
    validate_network,
)

__version__ = "0.1.0"
