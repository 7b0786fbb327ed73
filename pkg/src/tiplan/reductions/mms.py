"""Gadget reducing 3-SAT to finding a (minimal) motivating subgraph.

Layout: a *bus* s -> u_1 -> ... -> u_m -> w_1 -> ... -> w_l -> t of cheap
edges, one node u_i per clause, and for every variable x_k a node v_k with
two routes to a merge node w: the *cheap path* v_k -> w (cost 0) and the
*expensive path* v_k -> v_k' -> w (cost 1 - beta).  A positive literal x_k in
clause i gives the expensive edge (u_i, v_k) of cost 2, a negative literal
the cheap edge (u_i, v_k) of cost 1 + beta.  The final edge (w, t) is so
costly that an agent reaching w abandons; the off-bus routes only serve to
keep the agent's view of the future cheap enough while it walks the bus.
A minimal motivating subgraph keeps exactly one route per used v_k, which
encodes the truth value of x_k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from ..agent import AgentConfig
from ..errors import AssignmentNotSatisfying, BadParameter, NotMinimalMotivating
from ..graph import Edge, Subgraph, TaskGraph, as_rational, fmt_rational, render_graph
from ..motivating import is_motivating
from .cnf import Assignment, Formula3CNF, Literal, is_tautology


@dataclass(frozen=True)
class MmsConstants:
    beta: Fraction
    f: Fraction
    z: Fraction
    ell: int
    r: Fraction
    last_bus: Fraction
    exit_cost: Fraction

    @classmethod
    def of(cls, beta) -> MmsConstants:
        beta = as_rational(beta)
        if not 0 < beta < 1:
            raise BadParameter(f"beta must lie strictly between 0 and 1, got {beta}")
        f = 1 - beta / 2 - beta * beta / 2
        z = 2 + Fraction(3, 2) * beta + (1 + beta) / (1 - beta)
        ell = ceil(z / f)
        r = 1 + beta / 2 + 1 / beta + 2 / (1 - beta)
        exit_cost = Fraction(3, 2) * beta + (1 + beta) / (1 - beta)
        return cls(beta, f, z, ell, r, f + z - f * ell, exit_cost)


@dataclass(frozen=True)
class MmsGadget:
    """The gadget graph plus its bookkeeping.

    ``formula`` is the formula actually encoded: an always-true clause (one
    containing both x_k and not x_k) is replaced by ``(y | y | y)`` over a
    fresh variable y, because both of its literals would need the same node
    pair.  ``source`` is the formula as given.
    """

    graph: TaskGraph
    consts: MmsConstants
    source: Formula3CNF
    formula: Formula3CNF
    clause_edges: tuple[tuple[tuple[str, str], ...], ...]
    node_roles: dict[str, str] = field(default_factory=dict)
    edge_roles: dict[tuple[str, str], str] = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    @property
    def bus(self) -> tuple[str, ...]:
        m = len(self.formula.clauses)
        return ("s",) + tuple(f"u{i}" for i in range(1, m + 1)) + tuple(
            f"w{j}" for j in range(1, self.consts.ell + 1)
        ) + ("t",)

    @property
    def bus_edges(self) -> frozenset[tuple[str, str]]:
        b = self.bus
        return frozenset(zip(b, b[1:]))

    def cfg(self, tie_break="lex") -> AgentConfig:
        return AgentConfig(self.consts.beta, tie_break, self.consts.r)


def _normalise(f: Formula3CNF) -> tuple[Formula3CNF, list[str]]:
    notes = []
    clauses = []
    extra = 0
    for i, c in enumerate(f.clauses, 1):
        if is_tautology(c):
            extra += 1
            y = f.num_vars + extra
            clauses.append((Literal(y, True),) * 3)
            notes.append(f"clause {i} is always true; encoded as (x{y} | x{y} | x{y}) with fresh x{y}")
        else:
            if len(set(c)) < 3:
                notes.append(f"clause {i} repeats a literal; one edge per distinct literal")
            clauses.append(c)
    return Formula3CNF(f.num_vars + extra, tuple(clauses)), notes


def build_mms_gadget(f: Formula3CNF, beta) -> MmsGadget:
    k = MmsConstants.of(beta)
    formula, notes = _normalise(f)
    n, m = formula.num_vars, len(formula.clauses)
    if m == 0:
        raise BadParameter("the gadget needs at least one clause")
    beta = k.beta
    nodes = ["s"] + [f"u{i}" for i in range(1, m + 1)]
    nodes += [f"v{j}" for j in range(1, n + 1)] + [f"v{j}'" for j in range(1, n + 1)]
    nodes += ["w"] + [f"w{j}" for j in range(1, k.ell + 1)] + ["t"]
    edges: dict[tuple[str, str], Fraction] = {}
    node_roles = {"s": "start", "t": "target", "w": "merge"}
    edge_roles: dict[tuple[str, str], str] = {}

    def add(u, v, c, role):
        edges[(u, v)] = c
        edge_roles[(u, v)] = role

    bus = ["s"] + [f"u{i}" for i in range(1, m + 1)] + [f"w{j}" for j in range(1, k.ell + 1)] + ["t"]
    for a, b in zip(bus[:-2], bus[1:-1]):
        add(a, b, k.f, "bus")
    add(bus[-2], "t", k.last_bus, "bus")
    clause_edges = []
    for i, c in enumerate(formula.clauses, 1):
        node_roles[f"u{i}"] = "clause " + " | ".join(str(l) for l in c)
        mine = []
        for lit in dict.fromkeys(c):
            e = (f"u{i}", f"v{lit.var}")
            if lit.positive:
                add(*e, Fraction(2), f"expensive edge ({lit})")
            else:
                add(*e, 1 + beta, f"cheap edge ({lit})")
            mine.append(e)
        clause_edges.append(tuple(mine))
    for j in range(1, n + 1):
        v, vp = f"v{j}", f"v{j}'"
        node_roles[v] = f"variable x{j}"
        node_roles[vp] = f"expensive path of x{j}"
        add(v, vp, 1 - beta, "expensive path")
        add(vp, "w", Fraction(0), "expensive path")
        add(v, "w", Fraction(0), "cheap path")
    for j in range(1, k.ell + 1):
        node_roles[f"w{j}"] = "bus"
    add("w", "t", k.exit_cost, "exit")
    order = {u: i for i, u in enumerate(nodes)}
    edge_list = tuple(
        Edge(u, v, c) for (u, v), c in sorted(edges.items(), key=lambda kv: (order[kv[0][0]], order[kv[0][1]]))
    )
    g = TaskGraph(tuple(nodes), edge_list, "s", "t", name="mms", goal_reward=k.r)
    return MmsGadget(g, k, f, formula, tuple(clause_edges), node_roles, edge_roles, tuple(notes))


def _extend(gadget: MmsGadget, asg) -> Assignment:
    asg = tuple(bool(a) for a in asg)
    if len(asg) < gadget.source.num_vars:
        raise AssignmentNotSatisfying("assignment is shorter than the number of variables")
    asg = asg[: gadget.source.num_vars]
    return asg + (True,) * (gadget.formula.num_vars - len(asg))


def assignment_to_mms(gadget: MmsGadget, asg) -> Subgraph:
    """Subgraph for a satisfying assignment: one route per variable, one literal edge per clause."""
    full = _extend(gadget, asg)
    if not gadget.formula.satisfied_by(full):
        raise AssignmentNotSatisfying("assignment does not satisfy the formula")
    keep = set(gadget.bus_edges) | {("w", "t")}
    for j, val in enumerate(full, 1):
        if val:
            keep.add((f"v{j}", "w"))
        else:
            keep |= {(f"v{j}", f"v{j}'"), (f"v{j}'", "w")}
    for c, mine in zip(gadget.formula.clauses, gadget.clause_edges):
        lit = next(l for l in dict.fromkeys(c) if l.holds(full))
        keep.add((mine[0][0], f"v{lit.var}"))
    # drop nodes nobody enters (other than s), repeatedly
    while True:
        entered = {v for _, v in keep}
        dead = {e for e in keep if e[0] != "s" and e[0] not in entered}
        if not dead:
            break
        keep -= dead
    return Subgraph.from_edges(gadget.graph, keep).prune_isolated()


def audit_structure(gadget: MmsGadget, sub) -> list[str]:
    """Structural facts every minimal motivating subgraph of the gadget has."""
    problems = []
    kept = sub.kept_edges
    missing = gadget.bus_edges - kept
    if missing:
        problems.append(f"bus edge {sorted(missing)[0]} missing")
    for i, mine in enumerate(gadget.clause_edges, 1):
        off = [e for e in kept if e[0] == f"u{i}" and e[1].startswith("v")]
        if len(off) != 1:
            problems.append(f"u{i} keeps {len(off)} literal edges")
            continue
        v = off[0][1]
        cheap = (v, "w") in kept
        expensive = (v, v + "'") in kept and (v + "'", "w") in kept
        if cheap == expensive:
            problems.append(f"{v} keeps {int(cheap) + int(expensive)} routes to w")
            continue
        edge_expensive = gadget.edge_roles[off[0]].startswith("expensive")
        if edge_expensive == expensive:
            kind = "expensive" if expensive else "cheap"
            problems.append(f"u{i} -> {v} -> w is {kind} on both legs")
    return problems


def mms_to_assignment(gadget: MmsGadget, sub) -> Assignment:
    """Read x_j = 0 iff the expensive path from v_j survives; check the result."""
    if not is_motivating(sub, gadget.cfg()):
        raise NotMinimalMotivating("subgraph is not motivating")
    problems = audit_structure(gadget, sub)
    if problems:
        raise NotMinimalMotivating("; ".join(problems))
    kept = sub.kept_edges
    full = tuple(
        not ((f"v{j}", f"v{j}'") in kept and (f"v{j}'", "w") in kept)
        for j in range(1, gadget.formula.num_vars + 1)
    )
    if not gadget.formula.satisfied_by(full):
        raise NotMinimalMotivating("extracted assignment does not satisfy the formula")
    asg = full[: gadget.source.num_vars]
    if not gadget.source.satisfied_by(asg):
        raise NotMinimalMotivating("extracted assignment does not satisfy the formula")
    return asg


def render_gadget(gadget: MmsGadget) -> str:
    k = gadget.consts
    header = [
        f"formula {gadget.source}",
        f"beta {fmt_rational(k.beta)}",
        f"f {fmt_rational(k.f)}",
        f"z {fmt_rational(k.z)}",
        f"ell {k.ell}",
        f"r {fmt_rational(k.r)}",
    ] + [f"note {n}" for n in gadget.notes]
    node_notes = {u: f"role: {r}" for u, r in gadget.node_roles.items()}
    edge_notes = {e: f"role: {r}" for e, r in gadget.edge_roles.items()}
    return render_graph(gadget.graph, node_notes, edge_notes, header)


def constants_report(gadget: MmsGadget) -> str:
    k = gadget.consts
    lines = [
        f"f {fmt_rational(k.f)}",
        f"z {fmt_rational(k.z)}",
        f"ell {k.ell}",
        f"r {fmt_rational(k.r)}",
        f"beta_r {fmt_rational(k.beta * k.r)}",
        f"last_bus_edge {fmt_rational(k.last_bus)}",
        f"exit_edge {fmt_rational(k.exit_cost)}",
    ]
    lines += [f"note {n}" for n in gadget.notes]
    return "\n".join(lines) + "\n"
