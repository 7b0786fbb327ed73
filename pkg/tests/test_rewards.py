from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tiplan.agent import AgentConfig, simulate_with_rewards
from tiplan.errors import BadParameter, GraphFormatError, VariantViolation
from tiplan.graph import Edge, TaskGraph, gen_random_dag
from tiplan.rewards import (
    MtrInstance,
    Variant,
    check_feasible,
    check_variant,
    grid_oracle,
    continuation_tests,
    parse_rewards,
    render_rewards,
    render_solution,
    solve_exact,
)

from conftest import BETAS, small_dags

HALF = Fraction(1, 2)


def single_edge(c):
    return TaskGraph(("s", "t"), (Edge("s", "t", c),), "s", "t")


def parallel_pair():
    # two parallel s->t edges of cost 1 and 2, each subdivided by a free edge
    return TaskGraph(
        ("s", "a", "b", "t"),
        (Edge("s", "a", 1), Edge("a", "t", 0), Edge("s", "b", 2), Edge("b", "t", 0)),
        "s",
        "t",
    )


@pytest.mark.parametrize("variant", list(Variant))
@pytest.mark.parametrize("c, beta", [(1, HALF), (3, Fraction(3, 4)), (2, Fraction(1, 3))])
def test_single_edge_optimum_is_cost_over_beta(c, beta, variant):
    sol = solve_exact(MtrInstance(single_edge(c), beta, variant))
    assert sol.objective == Fraction(c) / beta
    assert sol.rewards == {"t": Fraction(c) / beta}
    assert sol.trajectory.reached


def test_single_edge_grid_sweep():
    assert grid_oracle(MtrInstance(single_edge(1), HALF), Fraction(1, 4), 2) == 2


def test_parallel_edges_take_cheap_edge():
    sol = solve_exact(MtrInstance(parallel_pair(), HALF))
    assert sol.objective == 2
    assert sol.trajectory.nodes == ("s", "a", "t")
    assert grid_oracle(MtrInstance(parallel_pair(), HALF), Fraction(1, 4), 4) == 2


def test_bound_makes_instance_infeasible():
    assert solve_exact(MtrInstance(single_edge(1), HALF, bound=Fraction(3, 2))) is None
    assert solve_exact(MtrInstance(single_edge(1), HALF, bound=2)).objective == 2


def test_variant_rules():
    inst = MtrInstance(single_edge(1), HALF, Variant.I)
    with pytest.raises(VariantViolation):
        check_variant(inst, {"t": Fraction(-1)})
    with pytest.raises(VariantViolation):
        check_variant(inst, {"x": Fraction(1)})
    g = parallel_pair()
    inst2 = MtrInstance(g, HALF, Variant.II)
    with pytest.raises(VariantViolation):
        check_feasible(inst2, {"t": 2, "b": 1})
    assert check_feasible(MtrInstance(g, HALF, Variant.III), {"t": 2, "b": -1}) is not None
    with pytest.raises(BadParameter):
        Variant.parse("4")


def test_strict_margin_makes_lex_agent_follow():
    sol = solve_exact(MtrInstance(parallel_pair(), HALF), strict_epsilon=Fraction(1, 8))
    assert sol.trajectory.reached
    assert sol.objective >= 2


def test_reward_text_round_trip():
    rw = {"t": Fraction(7, 3), "a": Fraction(-1, 2)}
    assert parse_rewards(render_rewards(rw)) == rw
    sol = solve_exact(MtrInstance(single_edge(1), HALF))
    text = render_solution(sol)
    assert text == "reward t 2/1\nobjective 2/1\noptimal true\n"
    assert parse_rewards(text) == {"t": Fraction(2)}
    with pytest.raises(GraphFormatError):
        parse_rewards("reward t 0.5\n")


@settings(max_examples=100, deadline=None)
@given(small_dags(max_nodes=6), st.sampled_from(BETAS), st.data())
def test_two_continuation_tests_agree(g, beta, data):
    rw = {v: Fraction(data.draw(st.integers(0, 12)), 2) for v in g.nodes}
    for u in g.nodes:
        if u != g.target and g.reaches_target() and u in g.distances_to():
            first, second = continuation_tests(g, beta, rw, u)
            assert first == second


@settings(max_examples=40, deadline=None)
@given(small_dags(max_nodes=5, max_cost=2), st.sampled_from(BETAS))
def test_variant_ordering(g, beta):
    vals = {v: solve_exact(MtrInstance(g, beta, v)).objective for v in Variant}
    assert vals[Variant.III] <= vals[Variant.I] <= vals[Variant.II]


@settings(max_examples=40, deadline=None)
@given(small_dags(max_nodes=5, max_cost=2), st.sampled_from(BETAS))
def test_solution_is_feasible_under_its_variant(g, beta):
    for v in Variant:
        inst = MtrInstance(g, beta, v)
        sol = solve_exact(inst)
        check_variant(inst, sol.rewards, sol.trajectory)
        assert sol.trajectory.reached


@pytest.mark.parametrize("seed", range(6))
def test_solver_agrees_with_grid(seed):
    g = gen_random_dag(5, seed=seed, cost_range=(0, 2), max_denominator=2)
    delta = Fraction(1, 4)
    for v in (Variant.I, Variant.II):
        inst = MtrInstance(g, HALF, v)
        exact = solve_exact(inst).objective
        grid = grid_oracle(inst, delta, exact + 2)
        assert exact <= grid <= exact + len(g.nodes) * delta


def test_lex_simulation_of_strict_solution_matches_claim():
    sol = solve_exact(MtrInstance(parallel_pair(), HALF, Variant.II), strict_epsilon=Fraction(1, 4))
    traj = simulate_with_rewards(parallel_pair(), AgentConfig(HALF), sol.rewards)
    assert traj.nodes == sol.trajectory.nodes


@settings(max_examples=40, deadline=None)
@given(small_dags(max_nodes=5, max_cost=2), st.sampled_from(BETAS))
def test_offpath_rewards_never_help_variant_one(g, beta):
    inst = MtrInstance(g, beta, Variant.I)
    assert solve_exact(inst).objective == solve_exact(inst, offpath_zero=True).objective
