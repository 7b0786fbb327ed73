"""Exact-rational task graphs: validation, distances, generators and text I/O.

Every weight in the package is a :class:`fractions.Fraction`.  Node ids are
opaque strings; whenever an order is needed (tie-breaking, canonical paths,
enumeration) it is plain lexicographic order on the ids.
"""

from __future__ import annotations

import heapq
import math
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import (
    BadParameter,
    CycleDetected,
    DuplicateEdge,
    GraphError,
    GraphFormatError,
    MissingEndpoint,
    NegativeCost,
    Unreachable,
)

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")
_ID_RE = re.compile(r"^[^\s#]+$")


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats and decimal strings are rejected on purpose: a silently rounded
    ``0.9`` can flip the strict comparisons the reductions rely on.
    """
    if isinstance(value, bool):
        raise BadParameter(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_RE.match(text):
            raise BadParameter(f"expected a rational of the form P/Q, got {value!r}")
        num, _, den = text.partition("/")
        if den and int(den) == 0:
            raise BadParameter(f"zero denominator in {value!r}")
        return Fraction(int(num), int(den) if den else 1)
    raise BadParameter(f"not a rational: {value!r}")


def fmt_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


class Edge(NamedTuple):
    src: str
    dst: str
    cost: Fraction


class _Queries:
    """Distance queries shared by full graphs and subgraph views.

    Subclasses provide ``start``, ``target``, ``nodes``, ``topo_order`` and
    ``succ`` (node -> tuple of (next node, cost), sorted by next node id).
    """

    @cached_property
    def _dist_cache(self) -> dict[str, dict[str, Fraction]]:
        return {}

    def successors(self, u: str) -> tuple[tuple[str, Fraction], ...]:
        return self.succ.get(u, ())

    def cost(self, u: str, v: str) -> Fraction:
        for w, c in self.succ.get(u, ()):
            if w == v:
                return c
        raise KeyError((u, v))

    def distances_to(self, target: str | None = None) -> dict[str, Fraction]:
        """Exact min-cost distance from every node that can reach ``target``.

        Nodes that cannot reach the target are absent from the mapping.
        """
        target = self.target if target is None else target
        cached = self._dist_cache.get(target)
        if cached is not None:
            return cached
        d: dict[str, Fraction] = {target: Fraction(0)}
        for u in reversed(self.topo_order):
            if u == target:
                continue
            best = None
            for v, c in self.succ.get(u, ()):
                dv = d.get(v)
                if dv is not None and (best is None or c + dv < best):
                    best = c + dv
            if best is not None:
                d[u] = best
        self._dist_cache[target] = d
        return d

    def dist(self, u: str, v: str | None = None) -> Fraction:
        v = self.target if v is None else v
        self._check_node(u)
        self._check_node(v)
        d = self.distances_to(v).get(u)
        if d is None:
            raise Unreachable(f"no path from {u} to {v}")
        return d

    def shortest_path(self, u: str, v: str | None = None) -> tuple[str, ...]:
        """Canonical min-cost u->v path: lexicographically smallest next node among minimizers."""
        v = self.target if v is None else v
        d = self.distances_to(v)
        if u not in d:
            self._check_node(u)
            raise Unreachable(f"no path from {u} to {v}")
        path = [u]
        while path[-1] != v:
            x = path[-1]
            for w, c in self.succ.get(x, ()):
                if w in d and c + d[w] == d[x]:
                    path.append(w)
                    break
        return tuple(path)

    def reaches_target(self) -> bool:
        return self.start in self.distances_to()

    def all_paths(self, u: str, v: str | None = None) -> Iterator[tuple[str, ...]]:
        """Every u->v path, in lexicographic order of node sequences."""
        v = self.target if v is None else v
        can_reach = self.distances_to(v)
        if u not in can_reach:
            return
        stack = [u]

        def walk() -> Iterator[tuple[str, ...]]:
            x = stack[-1]
            if x == v:
                yield tuple(stack)
                return
            for w, _ in self.succ.get(x, ()):
                if w in can_reach:
                    stack.append(w)
                    yield from walk()
                    stack.pop()

        yield from walk()

    def path_cost(self, path: Sequence[str]) -> Fraction:
        return sum((self.cost(a, b) for a, b in zip(path, path[1:])), Fraction(0))

    def _check_node(self, u: str) -> None:
        if u not in self.node_set:
            raise MissingEndpoint(f"unknown node {u!r}")


@dataclass(frozen=True)
class TaskGraph(_Queries):
    """Weighted DAG with a start and a target node.  Validated on construction."""

    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    start: str
    target: str
    name: str = "g"
    goal_reward: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(
            self, "edges", tuple(Edge(e[0], e[1], as_rational(e[2])) for e in self.edges)
        )
        if self.goal_reward is not None:
            object.__setattr__(self, "goal_reward", as_rational(self.goal_reward))
        validate(self)

    @cached_property
    def node_set(self) -> frozenset[str]:
        return frozenset(self.nodes)

    @cached_property
    def succ(self) -> dict[str, tuple[tuple[str, Fraction], ...]]:
        out: dict[str, list[tuple[str, Fraction]]] = {}
        for e in self.edges:
            out.setdefault(e.src, []).append((e.dst, e.cost))
        return {u: tuple(sorted(vs)) for u, vs in out.items()}

    @cached_property
    def topo_order(self) -> tuple[str, ...]:
        return _topological_order(self.nodes, self.edges)

    @cached_property
    def edge_keys(self) -> tuple[tuple[str, str], ...]:
        return tuple(sorted((e.src, e.dst) for e in self.edges))

    @cached_property
    def edge_key_set(self) -> frozenset[tuple[str, str]]:
        return frozenset(self.edge_keys)

    def with_goal_reward(self, r) -> TaskGraph:
        return TaskGraph(self.nodes, self.edges, self.start, self.target, self.name, r)


def _topological_order(nodes: Sequence[str], edges: Iterable[Edge]) -> tuple[str, ...]:
    indeg = {u: 0 for u in nodes}
    out: dict[str, list[str]] = {}
    for e in edges:
        indeg[e.dst] += 1
        out.setdefault(e.src, []).append(e.dst)
    heap = [u for u, k in indeg.items() if k == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        u = heapq.heappop(heap)
        order.append(u)
        for v in out.get(u, ()):
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(heap, v)
    if len(order) != len(indeg):
        stuck = sorted(u for u, k in indeg.items() if k > 0)
        raise CycleDetected(f"graph has a directed cycle through {stuck[:5]}")
    return tuple(order)


def validate(g: TaskGraph) -> tuple[str, ...]:
    """Check every TaskGraph invariant; return the topological order."""
    seen: set[str] = set()
    for u in g.nodes:
        if not isinstance(u, str) or not _ID_RE.match(u):
            raise GraphError(f"bad node id {u!r}")
        if u in seen:
            raise GraphError(f"duplicate node id {u!r}")
        seen.add(u)
    for end in (g.start, g.target):
        if end not in seen:
            raise MissingEndpoint(f"start/target {end!r} is not a node")
    pairs: set[tuple[str, str]] = set()
    for e in g.edges:
        if e.src not in seen or e.dst not in seen:
            raise MissingEndpoint(f"edge {e.src}->{e.dst} has an unknown endpoint")
        if e.cost < 0:
            raise NegativeCost(f"edge {e.src}->{e.dst} has cost {e.cost}")
        if (e.src, e.dst) in pairs:
            raise DuplicateEdge(f"edge {e.src}->{e.dst} appears twice")
        pairs.add((e.src, e.dst))
    if g.goal_reward is not None and g.goal_reward < 0:
        raise BadParameter("goal reward must be non-negative")
    order = _topological_order(g.nodes, g.edges)
    # cache it; the graph is immutable from here on
    g.__dict__["topo_order"] = order
    return order


@dataclass(frozen=True)
class Subgraph(_Queries):
    """Edge-subset view of a parent graph.

    Behaves like a TaskGraph for every query in this package, without
    rebuilding or re-validating anything (a subgraph of a DAG is a DAG).
    """

    parent: TaskGraph
    kept_edges: frozenset[tuple[str, str]]
    kept_nodes: frozenset[str] = field(default=frozenset())

    def __post_init__(self):
        edges = frozenset(self.kept_edges)
        nodes = frozenset(self.kept_nodes) | {u for e in edges for u in e}
        object.__setattr__(self, "kept_edges", edges)
        object.__setattr__(self, "kept_nodes", nodes)
        bad = edges - self.parent.edge_key_set
        if bad:
            raise MissingEndpoint(f"edges not in parent graph: {sorted(bad)[:3]}")
        unknown = nodes - self.parent.node_set
        if unknown:
            raise MissingEndpoint(f"nodes not in parent graph: {sorted(unknown)[:3]}")

    @classmethod
    def from_edges(cls, parent: TaskGraph, edges: Iterable[tuple[str, str]]) -> Subgraph:
        """Subgraph spanned by ``edges`` plus the start and target."""
        return cls(parent, frozenset(edges), frozenset((parent.start, parent.target)))

    @classmethod
    def full(cls, g: TaskGraph) -> Subgraph:
        return cls(g, frozenset(g.edge_keys), frozenset(g.nodes))

    @property
    def start(self) -> str:
        return self.parent.start

    @property
    def target(self) -> str:
        return self.parent.target

    @property
    def goal_reward(self) -> Fraction | None:
        return self.parent.goal_reward

    @property
    def name(self) -> str:
        return self.parent.name

    @cached_property
    def node_set(self) -> frozenset[str]:
        return self.kept_nodes

    @cached_property
    def nodes(self) -> tuple[str, ...]:
        return tuple(u for u in self.parent.nodes if u in self.kept_nodes)

    @cached_property
    def topo_order(self) -> tuple[str, ...]:
        return tuple(u for u in self.parent.topo_order if u in self.kept_nodes)

    @cached_property
    def succ(self) -> dict[str, tuple[tuple[str, Fraction], ...]]:
        out = {}
        for u, vs in self.parent.succ.items():
            kept = tuple((v, c) for v, c in vs if (u, v) in self.kept_edges)
            if kept:
                out[u] = kept
        return out

    @cached_property
    def edge_keys(self) -> tuple[tuple[str, str], ...]:
        return tuple(sorted(self.kept_edges))

    @property
    def edge_key_set(self) -> frozenset[tuple[str, str]]:
        return self.kept_edges

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(Edge(u, v, c) for u in self.nodes for v, c in self.succ.get(u, ()))

    def contains_endpoints(self) -> bool:
        return self.start in self.kept_nodes and self.target in self.kept_nodes

    def without_edge(self, e: tuple[str, str]) -> Subgraph:
        return Subgraph(self.parent, self.kept_edges - {e}, self.kept_nodes)

    def without_node(self, u: str) -> Subgraph:
        edges = frozenset(e for e in self.kept_edges if u not in e)
        return Subgraph(self.parent, edges, self.kept_nodes - {u})

    def prune_isolated(self) -> Subgraph:
        """Drop nodes with no kept edge, except the start and target."""
        touched = {u for e in self.kept_edges for u in e} | {self.start, self.target}
        return Subgraph(self.parent, self.kept_edges, self.kept_nodes & touched)

    def to_graph(self) -> TaskGraph:
        return TaskGraph(
            self.nodes, self.edges, self.start, self.target, self.name, self.goal_reward
        )


# ---------------------------------------------------------------- generators


def gen_akerlof(k: int, beta, base_cost=1) -> TaskGraph:
    """Weighted fan F_{k-1}: the procrastination chain with cost ratio beta^(2-k).

    Nodes v1..v_{k-1} and t; free edges v_i -> v_{i+1}; edge v_i -> t costs
    ``base_cost * beta^(1-i)``.  Every "do it now vs. tomorrow" decision is an
    exact tie, so the ratio is attained under the procrastinate tie-break.
    """
    beta = as_rational(beta)
    base_cost = as_rational(base_cost)
    if not isinstance(k, int) or k < 2:
        raise BadParameter("k must be an integer >= 2")
    if not 0 < beta < 1:
        raise BadParameter("beta must lie strictly between 0 and 1")
    if base_cost <= 0:
        raise BadParameter("base cost must be positive")
    chain = [f"v{i}" for i in range(1, k)]
    edges = [Edge(a, b, Fraction(0)) for a, b in zip(chain, chain[1:])]
    edges += [Edge(v, "t", base_cost * beta ** (1 - i)) for i, v in enumerate(chain, 1)]
    return TaskGraph(tuple(chain) + ("t",), tuple(edges), "v1", "t", name=f"akerlof_k{k}")


def gen_random_dag(
    n: int,
    edge_prob=Fraction(1, 3),
    cost_range=(0, 4),
    seed: int = 0,
    max_denominator: int = 3,
) -> TaskGraph:
    """Random DAG on ``n`` nodes with a guaranteed start->target backbone.

    Nodes are ``n00 .. n{n-1}`` in topological order; ``n00`` is the start and
    the last node the target.  Costs are rationals ``p/q`` inside
    ``cost_range`` with ``q <= max_denominator``.
    """
    if n < 2:
        raise BadParameter("need at least two nodes")
    edge_prob = as_rational(edge_prob)
    lo, hi = (as_rational(x) for x in cost_range)
    rng = random.Random(seed)
    width = max(2, len(str(n - 1)))
    ids = [f"n{i:0{width}d}" for i in range(n)]

    def draw_cost() -> Fraction:
        q = rng.randint(1, max_denominator)
        p_lo = math.ceil(lo * q)
        p_hi = math.floor(hi * q)
        return Fraction(rng.randint(p_lo, p_hi), q)

    backbone = [0] + [i for i in range(1, n - 1) if rng.random() < 0.5] + [n - 1]
    pairs = set(zip(backbone, backbone[1:]))
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in pairs and rng.randrange(edge_prob.denominator) < edge_prob.numerator:
                pairs.add((i, j))
    edges = tuple(Edge(ids[i], ids[j], draw_cost()) for i, j in sorted(pairs))
    return TaskGraph(tuple(ids), edges, ids[0], ids[-1], name=f"random_n{n}_s{seed}")


# ---------------------------------------------------------------- text format


def render_graph(
    g,
    node_notes: dict[str, str] | None = None,
    edge_notes: dict[tuple[str, str], str] | None = None,
    header: Sequence[str] = (),
) -> str:
    """Line-oriented text form; ``parse_graph(render_graph(g)) == g``."""
    node_notes = node_notes or {}
    edge_notes = edge_notes or {}
    lines = [f"# {h}" for h in header]
    lines.append(f"graph {g.name}")
    for u in g.nodes:
        note = node_notes.get(u)
        lines.append(f"node {u}" + (f"  # {note}" if note else ""))
    for e in g.edges:
        note = edge_notes.get((e.src, e.dst))
        lines.append(
            f"edge {e.src} {e.dst} {fmt_rational(e.cost)}" + (f"  # {note}" if note else "")
        )
    lines.append(f"start {g.start}")
    lines.append(f"target {g.target}")
    if g.goal_reward is not None:
        lines.append(f"goalreward {fmt_rational(g.goal_reward)}")
    return "\n".join(lines) + "\n"


def render_subgraph(sub: Subgraph) -> str:
    notes = {e: "kept-edge" for e in sub.kept_edges}
    header = [
        f"subgraph of {sub.parent.name}: kept {len(sub.kept_edges)} of "
        f"{len(sub.parent.edges)} edges, {len(sub.kept_nodes)} of {len(sub.parent.nodes)} nodes"
    ]
    return render_graph(sub.to_graph(), edge_notes=notes, header=header)


def parse_graph(text: str) -> TaskGraph:
    name = "g"
    nodes: list[str] = []
    edges: list[Edge] = []
    start = target = None
    reward = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw, args = parts[0], parts[1:]
        try:
            if kw == "graph" and len(args) == 1:
                name = args[0]
            elif kw == "node" and len(args) == 1:
                nodes.append(args[0])
            elif kw == "edge" and len(args) == 3:
                edges.append(Edge(args[0], args[1], as_rational(args[2])))
            elif kw == "start" and len(args) == 1:
                start = args[0]
            elif kw == "target" and len(args) == 1:
                target = args[0]
            elif kw == "goalreward" and len(args) == 1:
                reward = as_rational(args[0])
            else:
                raise GraphFormatError(f"line {lineno}: cannot parse {raw!r}")
        except BadParameter as exc:
            raise GraphFormatError(f"line {lineno}: {exc}") from None
    if start is None or target is None:
        raise GraphFormatError("graph text needs both 'start' and 'target' lines")
    return TaskGraph(tuple(nodes), tuple(edges), start, target, name, reward)
