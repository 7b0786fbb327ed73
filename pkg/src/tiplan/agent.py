"""Present-biased agent: plain, goal-reward (abandonment) and intermediate-reward models.

At a node ``u`` the agent scores each out-neighbour ``v`` by
``c(u, v) + beta * d(v)``: the next step at full price, everything after it
discounted.  It re-plans from scratch at every node.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Mapping, Sequence, Union

from .errors import BadParameter, TargetUnreachable, ZeroOptimalCost
from .graph import as_rational, fmt_rational

TieBreak = Union[str, Sequence[str]]


@dataclass(frozen=True)
class AgentConfig:
    """Bias factor, tie-break policy and optional reward at the target.

    ``tie_break`` is ``"lex"`` (smallest node id), ``"procrastinate"`` (prefer a
    neighbour that is *not* on a min-cost path, then smallest id) or a sequence
    of node ids giving an explicit preference order (unlisted ids come last,
    by id).
    """

    beta: Fraction
    tie_break: TieBreak = "lex"
    goal_reward: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "beta", as_rational(self.beta))
        if not 0 < self.beta <= 1:
            raise BadParameter(f"beta must lie in (0, 1], got {self.beta}")
        if self.goal_reward is not None:
            r = as_rational(self.goal_reward)
            if r < 0:
                raise BadParameter("goal reward must be non-negative")
            object.__setattr__(self, "goal_reward", r)
        tb = self.tie_break
        if isinstance(tb, str):
            if tb not in ("lex", "procrastinate"):
                raise BadParameter(f"unknown tie-break policy {tb!r}")
        else:
            object.__setattr__(self, "tie_break", tuple(tb))

    def with_goal_reward(self, r) -> AgentConfig:
        return AgentConfig(self.beta, self.tie_break, r)

    def with_tie_break(self, tb: TieBreak) -> AgentConfig:
        return AgentConfig(self.beta, tb, self.goal_reward)


class Outcome(enum.Enum):
    REACHED = "reached"
    ABANDONED = "abandoned"
    STUCK = "stuck"


@dataclass(frozen=True)
class Step:
    node: str
    chosen: str | None
    evaluations: tuple[tuple[str, Fraction], ...]
    tied: bool = False
    claimed: Fraction = Fraction(0)

    @property
    def value(self) -> Fraction | None:
        if self.chosen is None:
            return min((v for _, v in self.evaluations), default=None)
        return dict(self.evaluations)[self.chosen]


@dataclass(frozen=True)
class Trajectory:
    nodes: tuple[str, ...]
    steps: tuple[Step, ...]
    outcome: Outcome
    stopped_at: str
    total_cost: Fraction
    total_claimed_reward: Fraction = Fraction(0)

    @property
    def reached(self) -> bool:
        return self.outcome is Outcome.REACHED


def _require_reachable(g) -> dict[str, Fraction]:
    d = g.distances_to()
    if g.start not in d:
        raise TargetUnreachable(f"{g.target} is not reachable from {g.start}")
    return d


def _pick(u: str, tied: list[str], g, tie_break: TieBreak, d: Mapping[str, Fraction]) -> str:
    if len(tied) == 1:
        return tied[0]
    if tie_break == "lex":
        return min(tied)
    if tie_break == "procrastinate":
        off_path = [v for v in tied if g.cost(u, v) + d[v] > d[u]]
        return min(off_path or tied)
    rank = {v: i for i, v in enumerate(tie_break)}
    return min(tied, key=lambda v: (rank.get(v, len(rank)), v))


def _walk(
    g,
    cfg: AgentConfig,
    score: Callable[[str, str, Fraction], Fraction],
    viable: Mapping[str, object],
    threshold: Fraction | None,
    rewards: Mapping[str, Fraction] | None = None,
) -> Trajectory:
    """Shared walk loop.

    ``score(u, v, c)`` is the agent's evaluation of stepping to ``v``; only
    neighbours present in ``viable`` are candidates.  With a ``threshold``
    the agent abandons at ``u`` when the best score is strictly above it.
    """
    d = g.distances_to()
    rewards = rewards or {}
    u = g.start
    nodes = [u]
    steps = []
    costs = []
    claimed = rewards.get(u, Fraction(0))
    while u != g.target:
        evals = [(v, score(u, v, c)) for v, c in g.successors(u) if v in viable]
        if not evals:
            steps.append(Step(u, None, ()))
            return Trajectory(tuple(nodes), tuple(steps), Outcome.STUCK, u, sum(costs, Fraction(0)),
                              claimed)
        best = min(val for _, val in evals)
        if threshold is not None and best > threshold:
            steps.append(Step(u, None, tuple(evals)))
            return Trajectory(tuple(nodes), tuple(steps), Outcome.ABANDONED, u,
                              sum(costs, Fraction(0)), claimed)
        tied = [v for v, val in evals if val == best]
        v = _pick(u, tied, g, cfg.tie_break, d)
        r = rewards.get(v, Fraction(0))
        steps.append(Step(u, v, tuple(evals), len(tied) > 1, r))
        costs.append(g.cost(u, v))
        claimed += r
        nodes.append(v)
        u = v
    return Trajectory(tuple(nodes), tuple(steps), Outcome.REACHED, u, sum(costs, Fraction(0)),
                      claimed)


def simulate_plain(g, cfg: AgentConfig) -> Trajectory:
    d = _require_reachable(g)
    beta = cfg.beta
    return _walk(g, cfg, lambda u, v, c: c + beta * d[v], d, None)


def simulate_with_goal_reward(g, cfg: AgentConfig) -> Trajectory:
    """Plain rule plus abandonment: quit at ``u`` if min score > beta * r (equality continues)."""
    r = cfg.goal_reward if cfg.goal_reward is not None else g.goal_reward
    if r is None:
        raise BadParameter("goal-reward simulation needs a goal reward")
    d = _require_reachable(g)
    beta = cfg.beta
    traj = _walk(g, cfg, lambda u, v, c: c + beta * d[v], d, beta * r)
    if traj.reached:
        traj = replace(traj, total_claimed_reward=r)
    return traj


def reward_adjusted_distances(g, rewards: Mapping[str, Fraction]) -> dict[str, Fraction]:
    """min over v->t paths of (sum of edge costs - sum of rewards on every node, v and t included)."""
    out = {g.target: -rewards.get(g.target, Fraction(0))}
    for u in reversed(g.topo_order):
        if u == g.target:
            continue
        best = None
        for v, c in g.successors(u):
            dv = out.get(v)
            if dv is not None and (best is None or c + dv < best):
                best = c + dv
        if best is not None:
            out[u] = best - rewards.get(u, Fraction(0))
    return out


def path_evaluation(g, beta: Fraction, rewards: Mapping[str, Fraction], path: Sequence[str]) -> Fraction:
    """c'(Q) = c(u, v0) + beta * sum over v in Q, v != u, of (c(v, v') - r(v)), with c(t, t') = 0."""
    total = g.cost(path[0], path[1])
    tail = Fraction(0)
    for i, v in enumerate(path[1:], 1):
        nxt = g.cost(v, path[i + 1]) if i + 1 < len(path) else Fraction(0)
        tail += nxt - rewards.get(v, Fraction(0))
    return total + beta * tail


def simulate_with_rewards(g, cfg: AgentConfig, rewards: Mapping[str, Fraction]) -> Trajectory:
    """Naive re-planning with node rewards.

    At ``u`` the agent moves along the first edge of a path minimising
    :func:`path_evaluation` and abandons if that minimum is positive.  The
    minimum is computed by a reward-adjusted shortest-path pass rather than by
    enumerating paths.  Rewards are claimed on arrival; the start's reward is
    claimed immediately.
    """
    _require_reachable(g)
    rewards = {v: as_rational(r) for v, r in rewards.items() if r}
    adj = reward_adjusted_distances(g, rewards)
    beta = cfg.beta
    return _walk(g, cfg, lambda u, v, c: c + beta * adj[v], adj, Fraction(0), rewards)


def cost_ratio(g, cfg: AgentConfig) -> Fraction:
    d = _require_reachable(g)
    if d[g.start] == 0:
        raise ZeroOptimalCost("optimal cost is zero; ratio undefined")
    return simulate_plain(g, cfg).total_cost / d[g.start]


def render_trajectory(traj: Trajectory, machine: bool = True) -> str:
    lines = []
    for st in traj.steps:
        if st.chosen is None:
            if not machine:
                table = ", ".join(f"{v}={fmt_rational(x)}" for v, x in st.evaluations) or "-"
                lines.append(f"{st.node}: no move  [{table}]")
            continue
        if machine:
            lines.append(f"step {st.node} {st.chosen} {fmt_rational(st.value)}")
        else:
            table = ", ".join(f"{v}={fmt_rational(x)}" for v, x in st.evaluations)
            flag = "  (tie)" if st.tied else ""
            lines.append(f"{st.node} -> {st.chosen}  [{table}]{flag}")
    if traj.outcome is Outcome.REACHED:
        lines.append("outcome reached")
    else:
        lines.append(f"outcome {traj.outcome.value} {traj.stopped_at}")
    if not machine:
        lines.append(f"total_cost {fmt_rational(traj.total_cost)}")
        lines.append(f"claimed {fmt_rational(traj.total_claimed_reward)}")
    return "\n".join(lines) + "\n"
