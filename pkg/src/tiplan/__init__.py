"""Present-biased planning on weighted task graphs, with exact rational arithmetic."""

from __future__ import annotations

from .agent import (
    AgentConfig,
    Outcome,
    Trajectory,
    cost_ratio,
    simulate_plain,
    simulate_with_goal_reward,
    simulate_with_rewards,
)
from .graph import Subgraph, TaskGraph, gen_akerlof, gen_random_dag, parse_graph, render_graph
from .motivating import check_minimality, find_minimal_motivating_subgraph, find_motivating_subgraph, is_motivating
from .rewards import MtrInstance, MtrSolution, Variant, grid_oracle, solve_exact
from .shortcut import analyze, build_minor_witness, certified_lower_bound, ratio_bound, validate_minor_witness

__all__ = [
    "AgentConfig",
    "MtrInstance",
    "MtrSolution",
    "Outcome",
    "Subgraph",
    "TaskGraph",
    "Trajectory",
    "Variant",
    "analyze",
    "build_minor_witness",
    "certified_lower_bound",
    "check_minimality",
    "cost_ratio",
    "find_minimal_motivating_subgraph",
    "find_motivating_subgraph",
    "gen_akerlof",
    "gen_random_dag",
    "grid_oracle",
    "is_motivating",
    "parse_graph",
    "ratio_bound",
    "render_graph",
    "simulate_plain",
    "simulate_with_goal_reward",
    "simulate_with_rewards",
    "solve_exact",
    "validate_minor_witness",
]
