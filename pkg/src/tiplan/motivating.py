"""Motivating subgraphs: feasibility, exact search, and the greedy minimal loop.

A subgraph is motivating when the agent, simulated with abandonment inside
it, reaches the target.  The exact search has two strategies:

``paths``
    Candidate agent paths P are enumerated with the pruning rule
    ``c(u, v) + beta * d_G(v) > beta * r`` (distances only grow in a
    subgraph).  A minimal motivating subgraph that the agent walks along P is
    P plus at most one *detour* per node of P: a path that leaves P at that
    node and stays off P until it first meets P again.  Every union of P with
    one optional detour per node is simulated.  This is complete for the
    ``lex`` and explicit-order tie-breaks.

``subsets``
    Plain enumeration of edge subsets by decreasing size, skipping subsets in
    which t is unreachable.  Exponential; kept as an independent oracle and
    used for the ``procrastinate`` tie-break, whose choices depend on which
    edges are on min-cost paths of the candidate itself.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .agent import AgentConfig, simulate_with_goal_reward
from .errors import BadParameter, BudgetExceeded, TargetUnreachable
from .graph import Subgraph, TaskGraph

DEFAULT_BUDGET = 1_000_000


class Status(enum.Enum):
    FOUND = "found"
    NONE = "none"


@dataclass
class SearchStats:
    explored: int = 0
    oracle_calls: int = 0


@dataclass(frozen=True)
class MotivatingSearchResult:
    status: Status
    subgraph: Subgraph | None
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND


def _root(g) -> TaskGraph:
    return g.parent if isinstance(g, Subgraph) else g


def _goal(g, cfg: AgentConfig) -> Fraction:
    r = cfg.goal_reward if cfg.goal_reward is not None else g.goal_reward
    if r is None:
        raise BadParameter("motivating-subgraph search needs a goal reward")
    return r


def is_motivating(sub, cfg: AgentConfig) -> bool:
    if not (sub.start in sub.node_set and sub.target in sub.node_set):
        return False
    cfg = cfg.with_goal_reward(_goal(sub, cfg))
    try:
        return simulate_with_goal_reward(sub, cfg).reached
    except TargetUnreachable:
        return False


class _Oracle:
    """Memoised is_motivating over edge sets, with an oracle-call budget."""

    def __init__(self, root: TaskGraph, cfg: AgentConfig, budget: int):
        self.root = root
        self.cfg = cfg
        self.budget = budget
        self.stats = SearchStats()
        self.memo: dict[frozenset, bool] = {}

    def __call__(self, edges: frozenset) -> bool:
        hit = self.memo.get(edges)
        if hit is not None:
            return hit
        if self.stats.oracle_calls >= self.budget:
            raise BudgetExceeded(f"oracle budget of {self.budget} calls exhausted")
        self.stats.oracle_calls += 1
        ok = is_motivating(self._sub(edges), self.cfg)
        self.memo[edges] = ok
        return ok

    def _sub(self, edges: frozenset) -> Subgraph:
        return Subgraph(self.root, edges, frozenset((self.root.start, self.root.target)))

    def found(self, edges: frozenset) -> MotivatingSearchResult:
        return MotivatingSearchResult(Status.FOUND, self._sub(edges).prune_isolated(), self.stats)

    def none(self) -> MotivatingSearchResult:
        return MotivatingSearchResult(Status.NONE, None, self.stats)


def _agent_paths(g, beta: Fraction, r: Fraction, d: dict[str, Fraction]) -> Iterator[tuple[str, ...]]:
    """s->t paths the agent could walk in some subgraph without abandoning."""
    bound = beta * r
    stack = [g.start]

    def walk():
        u = stack[-1]
        if u == g.target:
            yield tuple(stack)
            return
        for v, c in g.successors(u):
            if v in d and c + beta * d[v] <= bound:
                stack.append(v)
                yield from walk()
                stack.pop()

    yield from walk()


def _detours(g, path: tuple[str, ...], i: int, d: dict[str, Fraction]) -> list[frozenset]:
    """Edge sets of paths leaving ``path`` at position i and staying off it until they rejoin."""
    on_path = set(path)
    p, nxt = path[i], path[i + 1]
    out = []
    trail = [p]

    def walk():
        u = trail[-1]
        for v, _ in g.successors(u):
            if v not in d or (u == p and v == nxt):
                continue
            if v in on_path:
                hops = trail + [v]
                out.append(frozenset(zip(hops, hops[1:])))
                continue
            trail.append(v)
            walk()
            trail.pop()

    walk()
    return out


def _search_paths(g, oracle: _Oracle) -> MotivatingSearchResult:
    cfg = oracle.cfg
    r = _goal(g, cfg)
    d = g.distances_to()
    if g.start not in d:
        return oracle.none()
    for path in _agent_paths(g, cfg.beta, r, d):
        spine = frozenset(zip(path, path[1:]))
        options = [[frozenset()] + _detours(g, path, i, d) for i in range(len(path) - 1)]
        for combo in itertools.product(*options):
            oracle.stats.explored += 1
            edges = spine.union(*combo)
            if oracle(edges):
                return oracle.found(edges)
    return oracle.none()


def _search_subsets(g, oracle: _Oracle) -> MotivatingSearchResult:
    edges = tuple(sorted(g.edge_key_set))
    s, t = g.start, g.target
    for size in range(len(edges), 0, -1):
        for combo in itertools.combinations(edges, size):
            oracle.stats.explored += 1
            succ: dict[str, list[str]] = {}
            for u, v in combo:
                succ.setdefault(u, []).append(v)
            seen = {s}
            stack = [s]
            while stack:
                for v in succ.get(stack.pop(), ()):
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
            if t not in seen:
                continue
            key = frozenset(combo)
            if oracle(key):
                return oracle.found(key)
    if s == t and oracle(frozenset()):
        return oracle.found(frozenset())
    return oracle.none()


def find_motivating_subgraph(
    g, cfg: AgentConfig, budget: int = DEFAULT_BUDGET, strategy: str = "auto"
) -> MotivatingSearchResult:
    """Exact search for a motivating subgraph of ``g`` (a TaskGraph or Subgraph).

    The whole graph is tried first.  Raises :class:`BudgetExceeded` when more
    than ``budget`` simulations would be needed.
    """
    if strategy == "auto":
        strategy = "subsets" if cfg.tie_break == "procrastinate" else "paths"
    if strategy not in ("paths", "subsets"):
        raise BadParameter(f"unknown search strategy {strategy!r}")
    oracle = _Oracle(_root(g), cfg.with_goal_reward(_goal(g, cfg)), budget)
    everything = frozenset(g.edge_key_set)
    oracle.stats.explored += 1
    if oracle(everything):
        return oracle.found(everything)
    if strategy == "paths":
        return _search_paths(g, oracle)
    return _search_subsets(g, oracle)


def find_minimal_motivating_subgraph(
    g, cfg: AgentConfig, budget: int = DEFAULT_BUDGET, strategy: str = "auto"
) -> MotivatingSearchResult:
    """Greedy edge removal in lexicographic order, keeping a motivating subgraph inside.

    Whenever the search on ``current - e`` finds a motivating subgraph the
    loop continues from that (smaller) subgraph.  A single pass suffices: an
    edge that could not be removed from a graph cannot be removed from any
    of its subgraphs.  ``budget`` bounds the oracle calls of each inner search.
    """
    first = find_motivating_subgraph(g, cfg, budget, strategy)
    stats = SearchStats(first.stats.explored, first.stats.oracle_calls)
    if not first.found:
        return MotivatingSearchResult(Status.NONE, None, stats)
    current = first.subgraph
    for e in sorted(current.kept_edges):
        if e not in current.kept_edges:
            continue
        res = find_motivating_subgraph(current.without_edge(e), cfg, budget, strategy)
        stats.explored += res.stats.explored
        stats.oracle_calls += res.stats.oracle_calls
        if res.found:
            current = res.subgraph
    return MotivatingSearchResult(Status.FOUND, current.prune_isolated(), stats)


def check_minimality(
    sub: Subgraph, cfg: AgentConfig, budget: int = DEFAULT_BUDGET, strategy: str = "auto"
) -> bool:
    """True iff ``sub`` is motivating and no proper subgraph of it is.

    Any proper subgraph misses an edge or a node; missing a node with edges
    means missing an edge, so it is enough to search ``sub - e`` for every
    edge and to reject isolated nodes other than s and t.
    """
    if not is_motivating(sub, cfg):
        return False
    touched = {u for e in sub.kept_edges for u in e} | {sub.start, sub.target}
    if sub.kept_nodes - touched:
        return False
    for e in sorted(sub.kept_edges):
        if find_motivating_subgraph(sub.without_edge(e), cfg, budget, strategy).found:
            return False
    return True


def audit_out_degree(sub, limit: int = 2) -> list[tuple[str, int]]:
    """Nodes whose out-degree exceeds ``limit`` (a minimal motivating subgraph has none)."""
    return [(u, len(vs)) for u, vs in sorted(sub.succ.items()) if len(vs) > limit]
