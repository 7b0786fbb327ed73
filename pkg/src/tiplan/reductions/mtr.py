"""Gadget reducing 3-SAT to minimum-total-reward placement.

Clause chains a_{i,1..l}, b_i lead into a spine c_1..c_n, then down two
parallel ladders u_k/v_k and u_k'/v_k' (k = n..1) to u_0/u_0' and t.  With
r(t) = r_t and a reward x on v_k or v_k' according to a satisfying
assignment, the agent walks every clause chain and the spine and reaches t;
the constants make every other route too expensive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor

from ..agent import AgentConfig, Trajectory, reward_adjusted_distances, simulate_with_rewards
from ..errors import (
    AssignmentNotSatisfying,
    BadParameter,
    InfeasibleRewards,
    NTooSmall,
    RelationViolated,
)
from ..graph import Edge, TaskGraph, as_rational, fmt_rational, render_graph
from .cnf import Assignment, Formula3CNF


def min_variables(beta) -> int:
    """Smallest n with n * (1/beta - 1) > 2/beta."""
    beta = as_rational(beta)
    x = 1 / beta - 1
    return floor((2 / beta) / x) + 1


@dataclass(frozen=True)
class MtrConstants:
    beta: Fraction
    n: int
    x: Fraction
    y: Fraction
    r_t: Fraction
    l: int

    @classmethod
    def of(cls, beta, n: int) -> MtrConstants:
        beta = as_rational(beta)
        if not 0 < beta < 1:
            raise BadParameter(f"beta must lie strictly between 0 and 1, got {beta}")
        x = 1 / beta - 1
        if not n * x > 2 / beta:
            need = min_variables(beta)
            raise NTooSmall(
                f"n = {n} too small for beta = {beta}: need n*(1/beta-1) > 2/beta, i.e. n >= {need}",
                need,
            )
        r_t = 12 * n - 6 + 6 / beta
        l = ceil((n * x + 12 * n + 6 / beta - 6) / (beta * x)) + 1
        return cls(beta, n, x, x / 2, r_t, l)

    def g(self, k: int) -> Fraction:
        return Fraction(6 * (2 * self.n - k))

    def h(self, k: int) -> Fraction:
        return self.g(k) + 6 + self.y

    @property
    def target_objective(self) -> Fraction:
        return self.n * self.x + self.r_t


@dataclass(frozen=True)
class MtrGadget:
    graph: TaskGraph
    consts: MtrConstants
    source: Formula3CNF
    formula: Formula3CNF  # padded to consts.n variables
    node_roles: dict[str, str] = field(default_factory=dict)
    edge_roles: dict[tuple[str, str], str] = field(default_factory=dict)

    @property
    def m(self) -> int:
        return len(self.formula.clauses)


def a(i: int, j: int) -> str:
    return f"a{i}_{j}"


def build_mtr_gadget(f: Formula3CNF, beta, pad_n: int | None = None) -> MtrGadget:
    n = max(f.num_vars, pad_n or 0)
    k = MtrConstants.of(beta, n)
    formula = f.padded(n)
    m = len(formula.clauses)
    if m == 0:
        raise BadParameter("the gadget needs at least one clause")
    beta, x, l = k.beta, k.x, k.l
    nodes = ["s"]
    for i in range(1, m + 1):
        nodes += [a(i, j) for j in range(1, l + 1)] + [f"b{i}"]
    nodes += [f"c{i}" for i in range(1, n + 1)]
    for i in range(n, -1, -1):
        nodes += [f"u{i}", f"u{i}'"] + ([f"v{i}", f"v{i}'"] if i else [])
    nodes.append("t")
    edges: dict[tuple[str, str], Fraction] = {}
    edge_roles: dict[tuple[str, str], str] = {}
    node_roles = {"s": "start", "t": "target"}

    def add(u, v, c, role):
        edges[(u, v)] = c
        edge_roles[(u, v)] = role

    add("s", a(1, 1), Fraction(0), "entry")
    for i in range(1, m + 1):
        add(a(i, 1), f"b{i}", Fraction(0), "to clause exit")
        for j in range(1, l):
            add(a(i, j), a(i, j + 1), beta * x, "clause chain")
        if i < m:
            add(a(i, l), a(i + 1, 1), Fraction(0), "next clause")
        node_roles[a(i, 1)] = f"clause {i} head"
        node_roles[f"b{i}"] = f"clause {i} exit"
    add(a(m, l), "c1", Fraction(0), "to spine")
    for i in range(1, n):
        add(f"c{i}", f"c{i + 1}", Fraction(6), "spine")
    add(f"c{n}", f"u{n}", Fraction(6), "spine")
    add(f"c{n}", f"u{n}'", Fraction(6), "spine")
    for i in range(1, n + 1):
        add(f"u{i}", f"v{i}", x, "ladder")
        add(f"u{i}'", f"v{i}'", x, "ladder")
        for src in (f"v{i}", f"v{i}'"):
            add(src, f"u{i - 1}", Fraction(6), "ladder")
            add(src, f"u{i - 1}'", Fraction(6), "ladder")
        node_roles[f"v{i}"] = f"x{i} true"
        node_roles[f"v{i}'"] = f"x{i} false"
    add("u0", "t", Fraction(0), "exit")
    add("u0'", "t", Fraction(0), "exit")
    for i, c in enumerate(formula.clauses, 1):
        for lit in c:
            kk = lit.var
            add(f"b{i}", f"u{kk - 1}", k.h(kk), f"clause {i} exit x{kk}")
            add(f"b{i}", f"u{kk - 1}'", k.h(kk), f"clause {i} exit x{kk}")
            dst = f"v{kk}" if lit.positive else f"v{kk}'"
            for j in range(2, l + 1):
                add(a(i, j), dst, k.g(kk), f"clause {i} literal {lit}")
    order = {u: idx for idx, u in enumerate(nodes)}
    edge_list = tuple(
        Edge(u, v, c) for (u, v), c in sorted(edges.items(), key=lambda kv: (order[kv[0][0]], order[kv[0][1]]))
    )
    g = TaskGraph(tuple(nodes), edge_list, "s", "t", name="mtr")
    return MtrGadget(g, k, f, formula, node_roles, edge_roles)


# ---------------------------------------------------------------- constants


@dataclass(frozen=True)
class RelationCheck:
    index: int
    k: int
    lhs: Fraction
    op: str
    rhs: Fraction

    @property
    def ok(self) -> bool:
        return {">": self.lhs > self.rhs, ">=": self.lhs >= self.rhs, "<": self.lhs < self.rhs,
                "=": self.lhs == self.rhs}[self.op]

    def line(self) -> str:
        verdict = "ok" if self.ok else "VIOLATED"
        return (f"relation {self.index} k={self.k} {fmt_rational(self.lhs)} {self.op} "
                f"{fmt_rational(self.rhs)} {verdict}")


def relation_checks(c: MtrConstants) -> list[RelationCheck]:
    """All nine gadget relations for k = 1..n.

    The third is checked as ``>=``: with l defined through a ceiling it holds
    with equality whenever (nx + r_t) / (beta x) is an integer.
    """
    b, n, x, r_t = c.beta, c.n, c.x, c.r_t
    target = n * x + r_t
    out = []
    for k in range(1, n + 1):
        g, h = c.g(k), c.h(k)
        out += [
            RelationCheck(1, k, h / b + 6 * (k - 1), ">", target),
            RelationCheck(2, k, g / b + 6 * k, ">", target),
            RelationCheck(3, k, (c.l - 1) * b * x, ">=", r_t + n * x),
            RelationCheck(4, k, h, "<", x + g + 6),
            RelationCheck(5, k, x + g - x + 6 * k, "<", r_t),
            RelationCheck(6, k, x + g - x + 6 * k, "<", h + 6 * (k - 1)),
            RelationCheck(7, k, b * x + g - x + 6 * k, "<", r_t),
            RelationCheck(8, k, 6 / b + 6 * (n - 1) + 6 * n, "=", r_t),
            RelationCheck(9, k, x + g - x + 6 * k, "<", g / b - x + 6 * k),
        ]
    return out


def verify_constants(gadget: MtrGadget) -> list[RelationCheck]:
    checks = relation_checks(gadget.consts)
    bad = [ch for ch in checks if not ch.ok]
    if bad:
        raise RelationViolated("; ".join(ch.line() for ch in bad))
    return checks


# ---------------------------------------------------------------- assignments and rewards


def _padded_assignment(gadget: MtrGadget, asg) -> Assignment:
    asg = tuple(bool(v) for v in asg)
    if len(asg) < gadget.source.num_vars:
        raise AssignmentNotSatisfying("assignment is shorter than the number of variables")
    return asg[: gadget.consts.n] + (False,) * (gadget.consts.n - len(asg))


def assignment_to_rewards(gadget: MtrGadget, asg) -> dict[str, Fraction]:
    full = _padded_assignment(gadget, asg)
    if not gadget.formula.satisfied_by(full):
        raise AssignmentNotSatisfying("assignment does not satisfy the formula")
    rw = {"t": gadget.consts.r_t}
    for k, val in enumerate(full, 1):
        rw[f"v{k}" if val else f"v{k}'"] = gadget.consts.x
    return rw


def rewards_to_assignment(gadget: MtrGadget, rw) -> Assignment:
    """x_k = true iff v_k carries reward; audited against feasibility and the bound."""
    rw = {v: as_rational(r) for v, r in rw.items() if r}
    c = gadget.consts
    total = sum((abs(r) for r in rw.values()), Fraction(0))
    if total > c.target_objective:
        raise InfeasibleRewards(f"total reward {total} exceeds nx + r_t = {c.target_objective}")
    traj = simulate_with_rewards(gadget.graph, AgentConfig(c.beta), rw)
    if not traj.reached:
        raise InfeasibleRewards(f"agent stops at {traj.stopped_at}")
    both = [k for k in range(1, c.n + 1) if rw.get(f"v{k}") and rw.get(f"v{k}'")]
    if both:
        raise InfeasibleRewards(f"rewards on both v{both[0]} and v{both[0]}'")
    asg = tuple(bool(rw.get(f"v{k}")) for k in range(1, c.n + 1))
    if not gadget.formula.satisfied_by(asg):
        raise InfeasibleRewards("extracted assignment does not satisfy the formula")
    return asg[: gadget.source.num_vars]


def length_values(gadget: MtrGadget, rw) -> dict[str, Fraction]:
    """Min over v->t paths of cost minus rewards strictly inside the path."""
    adj = reward_adjusted_distances(gadget.graph, rw)
    r_t = rw.get("t", Fraction(0))
    return {v: dv + rw.get(v, Fraction(0)) + (r_t if v != "t" else 0) for v, dv in adj.items()}


@dataclass(frozen=True)
class LeadTo:
    index: int
    description: str
    ok: bool


def lead_to_checks(gadget: MtrGadget, asg, traj: Trajectory) -> list[LeadTo]:
    """The eight step statements for the walk under the assignment's rewards."""
    full = _padded_assignment(gadget, asg)
    l, m, n = gadget.consts.l, gadget.m, gadget.consts.n
    moves = {st.node: st.chosen for st in traj.steps}

    def leads(p, q):
        return moves.get(p) == q

    star = f"u{n}" if full[n - 1] else f"u{n}'"
    after = traj.nodes[traj.nodes.index(star):] if star in traj.nodes else ()
    return [
        LeadTo(1, f"s leads to {a(1, 1)}", leads("s", a(1, 1))),
        LeadTo(2, "every a_i,1 leads to a_i,2", all(leads(a(i, 1), a(i, 2)) for i in range(1, m + 1))),
        LeadTo(3, "every a_i,j (j<l) leads to a_i,j+1",
               all(leads(a(i, j), a(i, j + 1)) for i in range(1, m + 1) for j in range(1, l))),
        LeadTo(4, "every a_i,l (i<m) leads to a_i+1,1",
               all(leads(a(i, l), a(i + 1, 1)) for i in range(1, m))),
        LeadTo(5, f"{a(m, l)} leads to c1", leads(a(m, l), "c1")),
        LeadTo(6, "every c_i (i<n) leads to c_i+1", all(leads(f"c{i}", f"c{i + 1}") for i in range(1, n))),
        LeadTo(7, f"c{n} leads to {star}", leads(f"c{n}", star)),
        LeadTo(8, f"{star} continues to t", bool(after) and traj.reached and after[-1] == "t"),
    ]


def render_gadget(gadget: MtrGadget) -> str:
    c = gadget.consts
    header = [
        f"formula {gadget.source}",
        f"beta {fmt_rational(c.beta)}",
        f"n {c.n}",
        f"x {fmt_rational(c.x)}",
        f"r_t {fmt_rational(c.r_t)}",
        f"l {c.l}",
    ]
    node_notes = {u: f"role: {r}" for u, r in gadget.node_roles.items()}
    edge_notes = {e: f"role: {r}" for e, r in gadget.edge_roles.items()}
    return render_graph(gadget.graph, node_notes, edge_notes, header)


def constants_report(gadget: MtrGadget) -> str:
    c = gadget.consts
    lines = [
        f"n {c.n}",
        f"x {fmt_rational(c.x)}",
        f"y {fmt_rational(c.y)}",
        f"r_t {fmt_rational(c.r_t)}",
        f"l {c.l}",
        f"target_objective {fmt_rational(c.target_objective)}",
    ]
    lines += [f"g_{k} {fmt_rational(c.g(k))} h_{k} {fmt_rational(c.h(k))}" for k in range(1, c.n + 1)]
    lines += [ch.line() for ch in relation_checks(c)]
    return "\n".join(lines) + "\n"
