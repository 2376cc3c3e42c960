"""Squared-weight local search for weighted independent set in d-claw free graphs."""

from .graph_core import (
    Claw,
    ContractError,
    InputError,
    ProblemInstance,
    is_d_claw_free,
    is_independent,
    neighborhood,
    weight,
    weight_sq,
)
from .search import (
    Improvement,
    PivotRule,
    SearchConfig,
    Solution,
    Strategy,
    Trace,
    apply_improvement,
    find_bounded_improvement,
    find_claw_improvement,
    gain,
    greedy,
    run_local_search,
)
from .setpacking import SetSystem, conflict_graph, lift_solution

__version__ = "0.1.0"
