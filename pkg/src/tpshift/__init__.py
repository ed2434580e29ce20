"""Temporal k-path graphs: reachability maximization under label shifts.

A temporal k-path graph is a multiset union of k directed paths whose edges
carry strictly increasing integer labels. A journey may only traverse edges
with increasing labels, hopping between paths at shared vertices. The
solvers here choose label shifts (delays and advances, propagation free)
that maximize how much of the graph a fixed source can reach, with or
without a cost budget.
"""

from .graph_core import (
    NEG_INF,
    AddressingError,
    BasePath,
    InvalidInstanceError,
    Mode,
    OrderingError,
    ParameterError,
    ParseError,
    ResourceLimitError,
    ShiftOperation,
    TemporalKPathGraph,
    ValidityError,
    Vertex,
    apply_sequence,
    apply_shift,
    edge_gap,
    is_normalized,
    normalize_source,
    parse_instance,
    reach_set,
    slack,
    validate,
    write_instance,
)
from .ilp_mini import IlpInstance, IntVar, LinearConstraint, solve_min
from .instances import (
    DelayGadget,
    McisInstance,
    gen_mcis_delay_gadget,
    gen_random,
    ops_from_mcis_witness,
    parse_mcis,
)
from .solver_budgeted import (
    DEFAULT_STATE_LIMIT,
    DEFAULT_SVS_LIMIT,
    BudgetedSolution,
    min_cost_for_svs,
    solve_fixed_spt,
    solve_fpt_delay,
    solve_fpt_general,
    solve_xp_by_b,
    solve_xp_by_k,
)
from .solver_unbounded import Temporalization, best_svs_for_spt, solve_mrpt
from .switch_structures import (
    EMPTY_SVS,
    Switch,
    SwitchPathTree,
    SwitchVertexSet,
    enumerate_spts,
    enumerate_svss,
    implied_spt,
    is_temporal_switch,
    is_valid_svs,
    make_svs,
    suffix_union,
    svs_reachability,
)

__version__ = "0.1.0"

__all__ = [
    "NEG_INF",
    "AddressingError",
    "BasePath",
    "BudgetedSolution",
    "DEFAULT_STATE_LIMIT",
    "DEFAULT_SVS_LIMIT",
    "DelayGadget",
    "EMPTY_SVS",
    "IlpInstance",
    "IntVar",
    "InvalidInstanceError",
    "LinearConstraint",
    "McisInstance",
    "Mode",
    "OrderingError",
    "ParameterError",
    "ParseError",
    "ResourceLimitError",
    "ShiftOperation",
    "Switch",
    "SwitchPathTree",
    "SwitchVertexSet",
    "TemporalKPathGraph",
    "Temporalization",
    "ValidityError",
    "Vertex",
    "apply_sequence",
    "apply_shift",
    "best_svs_for_spt",
    "edge_gap",
    "enumerate_spts",
    "enumerate_svss",
    "gen_mcis_delay_gadget",
    "gen_random",
    "implied_spt",
    "is_normalized",
    "is_temporal_switch",
    "is_valid_svs",
    "make_svs",
    "min_cost_for_svs",
    "normalize_source",
    "ops_from_mcis_witness",
    "parse_instance",
    "parse_mcis",
    "reach_set",
    "slack",
    "solve_fixed_spt",
    "solve_fpt_delay",
    "solve_fpt_general",
    "solve_min",
    "solve_mrpt",
    "solve_xp_by_b",
    "solve_xp_by_k",
    "suffix_union",
    "svs_reachability",
    "validate",
    "write_instance",
]
