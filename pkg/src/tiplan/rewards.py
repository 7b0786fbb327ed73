"""Minimum-total-reward placement (variants I, II, III).

Variant I allows non-negative rewards anywhere, II only on the path the agent
actually walks, III any sign; the objective is the sum of absolute rewards.

The exact solver enumerates the trajectory P, then for every node u of P a
*witness* path W_u that starts with P's edge at u, and solves the linear
program

    minimise sum |r|
    subject to  c'(W_u) <= 0                      for every u on P
                c'(W_u) <= c'(Q)                  for every u->t path Q leaving u by another edge

over exact rationals.  The sum over partial witness choices is explored
depth-first with LP-value pruning.

:func:`grid_oracle` is an independent brute force over a reward lattice.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence

import numpy as np

from .agent import AgentConfig, Trajectory, simulate_with_rewards, path_evaluation
from .errors import BadParameter, BudgetExceeded, GraphFormatError, VariantViolation
from .graph import as_rational, fmt_rational
from .lp import LpStatus, solve_lp

Rewards = dict[str, Fraction]


class Variant(enum.IntEnum):
    I = 1
    II = 2
    III = 3

    @classmethod
    def parse(cls, value) -> Variant:
        if isinstance(value, Variant):
            return value
        table = {"1": cls.I, "2": cls.II, "3": cls.III, "I": cls.I, "II": cls.II, "III": cls.III}
        try:
            return table[str(value).strip().upper()]
        except KeyError:
            raise BadParameter(f"unknown variant {value!r}") from None


@dataclass(frozen=True)
class MtrInstance:
    graph: object
    beta: Fraction
    variant: Variant = Variant.I
    bound: Fraction | None = None  # None means no bound

    def __post_init__(self):
        object.__setattr__(self, "beta", as_rational(self.beta))
        object.__setattr__(self, "variant", Variant.parse(self.variant))
        if self.bound is not None:
            object.__setattr__(self, "bound", as_rational(self.bound))
        if not 0 < self.beta <= 1:
            raise BadParameter("beta must lie in (0, 1]")


@dataclass(frozen=True)
class MtrSolution:
    rewards: Rewards
    trajectory: Trajectory
    objective: Fraction
    optimal: bool = True


def objective(rw: Mapping[str, Fraction]) -> Fraction:
    return sum((abs(r) for r in rw.values()), Fraction(0))


def _clean(rw: Mapping[str, object]) -> Rewards:
    return {v: as_rational(r) for v, r in sorted(rw.items()) if as_rational(r) != 0}


def check_variant(inst: MtrInstance, rw: Mapping[str, Fraction], traj: Trajectory | None = None) -> None:
    """Raise VariantViolation if ``rw`` breaks the variant's sign or support rule."""
    if inst.variant is not Variant.III:
        neg = [v for v, r in rw.items() if r < 0]
        if neg:
            raise VariantViolation(f"variant {inst.variant.name} forbids negative rewards ({neg[0]})")
    unknown = [v for v in rw if v not in inst.graph.node_set]
    if unknown:
        raise VariantViolation(f"reward on unknown node {unknown[0]}")
    if inst.variant is Variant.II and traj is not None:
        off = sorted(v for v, r in rw.items() if r and v not in traj.nodes)
        if off:
            raise VariantViolation(f"variant II: reward on {off[0]}, which the agent never visits")


def check_feasible(inst: MtrInstance, rw: Mapping[str, object], tie_break="lex") -> MtrSolution | None:
    """Simulate with ``rw``; a solution iff the agent reaches t within the bound."""
    rw = _clean(rw)
    check_variant(inst, rw)
    traj = simulate_with_rewards(inst.graph, AgentConfig(inst.beta, tie_break), rw)
    check_variant(inst, rw, traj)
    total = objective(rw)
    if not traj.reached or (inst.bound is not None and total > inst.bound):
        return None
    return MtrSolution(rw, traj, total, optimal=False)


# ---------------------------------------------------------------- exact solver


def _relevant_nodes(g) -> list[str]:
    """Nodes whose reward can enter some evaluation: on an s->t path, other than s."""
    d = g.distances_to()
    fwd = {g.start}
    for u in g.topo_order:
        if u in fwd:
            fwd.update(v for v, _ in g.successors(u))
    return [u for u in g.nodes if u in d and u in fwd and u != g.start]


class _Program:
    """Accumulates rows ``a.x <= b`` over the reward variables of one variant."""

    def __init__(self, nodes: Sequence[str], signed: bool):
        self.nodes = list(nodes)
        self.index = {v: i for i, v in enumerate(self.nodes)}
        self.signed = signed
        self.width = len(self.nodes) * (2 if signed else 1)

    def row(self, coeffs: Mapping[str, Fraction]) -> list[Fraction]:
        out = [Fraction(0)] * self.width
        for v, a in coeffs.items():
            i = self.index.get(v)
            if i is None:
                continue
            out[i] += a
            if self.signed:
                out[i + len(self.nodes)] -= a
        return out

    def rewards(self, x: Sequence[Fraction]) -> Rewards:
        n = len(self.nodes)
        vals = {v: x[i] - (x[i + n] if self.signed else 0) for v, i in self.index.items()}
        return _clean(vals)


def _split(g, beta: Fraction, path: Sequence[str]) -> tuple[Fraction, dict[str, Fraction]]:
    """c'(path) = const - sum coeff[v] * r(v)."""
    const = g.cost(path[0], path[1]) + beta * g.path_cost(path[1:])
    coeff: dict[str, Fraction] = {}
    for v in path[1:]:
        coeff[v] = coeff.get(v, Fraction(0)) + beta
    return const, coeff


def _node_rows(g, beta, prog: _Program, u: str, nxt: str, witness, others, eps) -> tuple[list, list]:
    """Rows forcing the agent at ``u`` to continue along (u, nxt) with witness W."""
    cw, aw = _split(g, beta, witness)
    rows = [prog.row({v: -a for v, a in aw.items()})]
    rhs = [-cw]
    for q in others:
        cq, aq = _split(g, beta, q)
        diff = {v: aq.get(v, 0) - aw.get(v, 0) for v in set(aq) | set(aw)}
        rows.append(prog.row(diff))
        rhs.append(cq - cw - eps)
    return rows, rhs


def solve_exact(
    inst: MtrInstance,
    budget: int = 200_000,
    strict_epsilon: Fraction | None = None,
    offpath_zero: bool = False,
) -> MtrSolution | None:
    """Minimum-objective reward configuration, or None when none fits the bound.

    By default ties between equally good first edges are resolved in the
    designer's favour: the returned trajectory is simulated with the
    trajectory itself as the tie-break order.  With ``strict_epsilon`` every
    competing path must be worse by at least that margin, so the plain
    lexicographic agent follows the intended path.  ``offpath_zero``
    restricts variant I to rewards on the trajectory.  ``budget`` caps the
    number of LP solves; when exhausted the best configuration so far is
    returned with ``optimal=False``.
    """
    g, beta = inst.graph, inst.beta
    d = g.distances_to()
    if g.start not in d:
        return None
    eps = Fraction(0) if strict_epsilon is None else as_rational(strict_epsilon)
    relevant = _relevant_nodes(g)
    paths_from = {u: list(g.all_paths(u)) for u in g.nodes if u in d}
    best: list = [None, None]  # objective, (rewards, path)
    solves = [0]
    exhausted = False

    def lp(prog, rows, rhs):
        if solves[0] >= budget:
            raise BudgetExceeded("LP budget exhausted")
        solves[0] += 1
        c = [Fraction(1)] * prog.width
        return solve_lp(c, rows, rhs)

    def descend(path, prog, k, rows, rhs):
        if k == len(path) - 1:
            res = lp(prog, rows, rhs)
            if res.status is LpStatus.OPTIMAL and (best[0] is None or res.value < best[0]):
                best[0], best[1] = res.value, (prog.rewards(res.x), path)
            return
        u, nxt = path[k], path[k + 1]
        own = [q for q in paths_from[u] if q[1] == nxt]
        others = [q for q in paths_from[u] if q[1] != nxt]
        for w in own:
            extra_rows, extra_rhs = _node_rows(g, beta, prog, u, nxt, w, others, eps)
            r2, b2 = rows + extra_rows, rhs + extra_rhs
            res = lp(prog, r2, b2)
            if res.status is not LpStatus.OPTIMAL:
                continue
            if best[0] is not None and res.value >= best[0]:
                continue
            if inst.bound is not None and res.value > inst.bound:
                continue
            descend(path, prog, k + 1, r2, b2)

    try:
        for path in paths_from[g.start]:
            if inst.variant is Variant.II or (offpath_zero and inst.variant is Variant.I):
                nodes = [v for v in relevant if v in path]
            else:
                nodes = relevant
            prog = _Program(nodes, signed=inst.variant is Variant.III)
            descend(path, prog, 0, [], [])
    except BudgetExceeded:
        exhausted = True
        if best[0] is None:
            raise
    if best[0] is None:
        return None
    rw, path = best[1]
    tie = "lex" if strict_epsilon is not None else path
    traj = simulate_with_rewards(g, AgentConfig(beta, tie), rw)
    return MtrSolution(rw, traj, objective(rw), optimal=not exhausted)


# ---------------------------------------------------------------- grid oracle


def _paths_dfs(g, u: str) -> list[tuple[str, ...]]:
    """u->t paths by plain DFS (independent of the graph's own path helpers)."""
    out = []
    stack = [(u, (u,))]
    while stack:
        x, trail = stack.pop()
        if x == g.target:
            out.append(trail)
            continue
        for e in g.edges:
            if e.src == x:
                stack.append((e.dst, trail + (e.dst,)))
    return out


def _lattice(n: int, level: int, signed: bool, cap: int):
    """Integer vectors of length n with L1 norm ``level`` and entries bounded by ``cap``."""
    for cut in itertools.combinations(range(level + n - 1), n - 1):
        parts = [b - a - 1 for a, b in zip((-1,) + cut, cut + (level + n - 1,))]
        if max(parts, default=0) > cap:
            continue
        if not signed:
            yield parts
            continue
        nz = [i for i, p in enumerate(parts) if p]
        for signs in itertools.product((1, -1), repeat=len(nz)):
            v = list(parts)
            for i, sgn in zip(nz, signs):
                v[i] *= sgn
            yield v


def _walks(allowed, b: int, s: int, t: int, reach: np.ndarray):
    stack = [(s, (s,))]
    while stack:
        u, trail = stack.pop()
        if u == t:
            yield trail
            continue
        for v, mask in allowed.get(u, ()):
            if mask[b] and reach[b, v]:
                stack.append((v, trail + (v,)))


def grid_oracle(
    inst: MtrInstance, delta, cap, ties: str = "optimistic", chunk: int = 20000
) -> Fraction | None:
    """Smallest objective among reward vectors on the lattice delta*Z, |entries| <= cap.

    Decisions are re-derived from scratch in scaled units: at u the agent
    scores every u->t path by ``c(e1)/beta + rest - sum of rewards after u``
    (c'/beta) and abandons if the minimum is positive.  Otherwise, with
    ``ties="lex"`` it steps to the smallest-id successor starting a
    minimising path; with ``ties="optimistic"`` any such successor may be
    taken (the convention of :func:`solve_exact`).
    Rewards are only placed on nodes that lie on some s->t path, other than
    s; no other reward can change a decision.
    """
    g, beta = inst.graph, as_rational(inst.beta)
    delta, cap = as_rational(delta), as_rational(cap)
    nodes = [u for u in g.nodes if u != g.start]
    reach = {u: _paths_dfs(g, u) for u in g.nodes}
    on_st = {v for p in reach[g.start] for v in p}
    free = [v for v in nodes if v in on_st]
    if not reach[g.start]:
        return None
    idx = {v: i for i, v in enumerate(free)}

    # integer scale: every path constant and delta become integers
    fracs = [delta]
    table = []  # (u, next, const, incidence)
    for u in g.nodes:
        for p in reach[u]:
            if len(p) < 2:
                continue
            const = g.cost(p[0], p[1]) / beta + sum(
                (g.cost(a, b) for a, b in zip(p[1:], p[2:])), Fraction(0)
            )
            fracs.append(const)
            inc = np.zeros(len(free), dtype=np.int64)
            for v in p[1:]:
                if v in idx:
                    inc[idx[v]] += 1
            table.append((u, p[1], const, inc))
    scale = lcm(*(f.denominator for f in fracs))
    unit = int(delta * scale)
    consts = np.array([int(t[2] * scale) for t in table], dtype=np.int64)
    inc = np.array([t[3] for t in table], dtype=np.int64).reshape(len(table), len(free))
    order = sorted(set(g.nodes))
    node_id = {u: i for i, u in enumerate(order)}
    owner = np.array([node_id[t[0]] for t in table])
    step_to = np.array([node_id[t[1]] for t in table])
    s_id, t_id = node_id[g.start], node_id[g.target]
    n_nodes = len(order)
    kmax = int(cap / delta)
    if ties not in ("lex", "optimistic"):
        raise BadParameter(f"unknown tie convention {ties!r}")
    signed = inst.variant is Variant.III

    topo_ids = [node_id[u] for u in reversed(g.topo_order)]

    def feasible(batch: np.ndarray) -> np.ndarray:
        # V[b, p] = const_p - unit * (inc_p . r_b); the agent continues at u iff min V <= 0
        vals = consts[None, :] - unit * (batch @ inc.T)
        rows = np.arange(len(batch))
        # allowed[b][u] = successors the agent may step to from u
        allowed: dict[int, list[tuple[int, np.ndarray]]] = {}
        for u in range(n_nodes):
            cols = np.nonzero(owner == u)[0]
            if not len(cols):
                continue
            sub = vals[:, cols]
            low = sub.min(axis=1)
            go = low <= 0
            if ties == "lex":
                key = sub * (n_nodes + 1) + step_to[cols][None, :]
                pick = step_to[cols[np.argmin(key, axis=1)]]
                allowed[u] = [(v, go & (pick == v)) for v in sorted(set(step_to[cols].tolist()))]
            else:
                hit = sub == low[:, None]
                allowed[u] = [
                    (v, go & hit[:, step_to[cols] == v].any(axis=1))
                    for v in sorted(set(step_to[cols].tolist()))
                ]
        reach = np.zeros((len(batch), n_nodes), dtype=bool)
        reach[:, t_id] = True
        for u in topo_ids:
            for v, mask in allowed.get(u, ()):
                reach[:, u] |= mask & reach[:, v]
        ok = reach[:, s_id]
        if inst.variant is not Variant.II:
            return ok
        # variant II: some admissible walk must visit every rewarded node
        for b in np.nonzero(ok)[0]:
            need = {free[i] for i in range(len(free)) if batch[b, i]}
            ok[b] = any(
                need <= {order[i] for i in walk} for walk in _walks(allowed, b, s_id, t_id, reach)
            )
        return ok

    limit = len(free) * kmax
    if inst.bound is not None:
        limit = min(limit, int(inst.bound / delta))
    for level in range(limit + 1):
        buf = []
        for vec in _lattice(len(free), level, signed, kmax):
            buf.append(vec)
            if len(buf) >= chunk:
                if feasible(np.array(buf, dtype=np.int64)).any():
                    return level * delta
                buf = []
        if buf and feasible(np.array(buf, dtype=np.int64).reshape(len(buf), len(free))).any():
            return level * delta
    return None


# ---------------------------------------------------------------- cross-model check


def continuation_tests(g, beta: Fraction, rw: Mapping[str, Fraction], u: str) -> tuple[bool, bool]:
    """Both forms of the continuation test at ``u``.

    First: min over u->t paths of c'(Q) is <= 0.  Second: some path Q has
    ``c(e1)/beta + sum of its other edges <= sum of rewards on Q after u``.
    """
    paths = list(g.all_paths(u))
    first = min(path_evaluation(g, beta, rw, q) for q in paths) <= 0
    second = any(
        g.cost(q[0], q[1]) / beta + g.path_cost(q[1:])
        <= sum((rw.get(v, Fraction(0)) for v in q[1:]), Fraction(0))
        for q in paths
    )
    return first, second


# ---------------------------------------------------------------- text I/O


def render_rewards(rw: Mapping[str, Fraction]) -> str:
    return "".join(f"reward {v} {fmt_rational(r)}\n" for v, r in sorted(rw.items()))


def parse_rewards(text: str) -> Rewards:
    out: Rewards = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] in ("objective", "optimal"):
            continue
        if parts[0] != "reward" or len(parts) != 3:
            raise GraphFormatError(f"line {lineno}: cannot parse {raw!r}")
        if parts[1] in out:
            raise GraphFormatError(f"line {lineno}: duplicate reward for {parts[1]}")
        try:
            out[parts[1]] = as_rational(parts[2])
        except BadParameter as exc:
            raise GraphFormatError(f"line {lineno}: {exc}") from None
    return out


def render_solution(sol: MtrSolution) -> str:
    return (
        render_rewards(sol.rewards)
        + f"objective {fmt_rational(sol.objective)}\n"
        + f"optimal {'true' if sol.optimal else 'false'}\n"
    )
