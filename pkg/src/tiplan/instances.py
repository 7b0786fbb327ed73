"""Small hand-built task graphs used by the reward-placement experiments.

Every graph has at most eight nodes.  Parallel edges are modelled by
subdividing each copy with a free edge, since edge pairs must be unique.
"""

from __future__ import annotations

from fractions import Fraction

from .graph import Edge, TaskGraph, gen_akerlof

F = Fraction


def _g(name: str, edges, start="s", target="t") -> TaskGraph:
    nodes: list[str] = []
    for u, v, _ in edges:
        for x in (u, v):
            if x not in nodes:
                nodes.append(x)
    return TaskGraph(tuple(nodes), tuple(Edge(u, v, F(c)) for u, v, c in edges), start, target, name)


def single_edge(c) -> TaskGraph:
    return _g(f"single_{F(c).numerator}_{F(c).denominator}", [("s", "t", c)])


def parallel(costs) -> TaskGraph:
    edges = []
    for i, c in enumerate(costs):
        edges += [("s", f"p{i}", c), (f"p{i}", "t", 0)]
    return _g("parallel_" + "_".join(str(F(c)).replace("/", "o") for c in costs), edges)


def chain(costs) -> TaskGraph:
    ids = ["s"] + [f"c{i}" for i in range(1, len(costs))] + ["t"]
    return _g(f"chain{len(costs)}", [(a, b, c) for a, b, c in zip(ids, ids[1:], costs)])


def catalogue() -> list[tuple[TaskGraph, Fraction]]:
    """(graph, beta) pairs; includes the single-edge and parallel-edge cases."""
    half, third, three_q = F(1, 2), F(1, 3), F(3, 4)
    out: list[tuple[TaskGraph, Fraction]] = []
    for c, b in [(1, half), (2, half), (1, third), (F(3, 2), three_q), (F(1, 2), F(2, 3))]:
        out.append((single_edge(c), b))
    out += [
        (parallel([1, 2]), half),
        (parallel([1, 2]), three_q),
        (parallel([1, 1]), half),
        (parallel([1, 2, 3]), third),
        (parallel([F(1, 2), 2]), half),
    ]
    out += [
        (chain([1, 1]), half),
        (chain([1, 0, 1]), half),
        (chain([0, 0, 2]), third),
        (chain([1, 1, 1, 1]), three_q),
        (chain([2, 0, 0, 1]), half),
    ]
    diamond = [("s", "a", 1), ("s", "b", 0), ("a", "t", 0), ("b", "t", 2)]
    out += [(_g("diamond", diamond), half), (_g("diamond", diamond), three_q)]
    lure = [("s", "a", 1), ("a", "t", 1), ("s", "b", 0), ("b", "t", F(14, 5))]
    out += [(_g("lure", lure), half), (_g("lure", lure), third)]
    shortcut_late = [("s", "a", 0), ("a", "b", 0), ("b", "t", 3), ("s", "t", 2), ("a", "t", F(5, 2))]
    out.append((_g("shortcut_late", shortcut_late), half))
    ladder = [
        ("s", "a1", F(1, 2)), ("a1", "a2", F(1, 2)), ("a2", "t", F(1, 2)),
        ("s", "b1", 0), ("b1", "b2", 0), ("b2", "t", 2),
        ("a1", "b2", 0), ("b1", "a2", 1),
    ]
    out += [(_g("ladder", ladder), half), (_g("ladder", ladder), three_q)]
    fork = [("s", "a", 1), ("a", "x", 0), ("a", "y", 1), ("x", "t", 2), ("y", "t", 0)]
    out.append((_g("fork", fork), half))
    skip = [("s", "a", 1), ("a", "b", 1), ("b", "c", 1), ("c", "t", 1), ("s", "c", 3), ("a", "t", 3)]
    out += [(_g("skip", skip), half), (_g("skip", skip), third)]
    for k in (3, 4, 5):
        out.append((gen_akerlof(k, half), half))
    out.append((gen_akerlof(4, three_q), three_q))
    grid = [
        ("s", "a", 0), ("s", "b", 1), ("a", "c", 1), ("a", "d", 0),
        ("b", "d", 0), ("c", "t", 0), ("d", "e", 1), ("e", "t", 0), ("b", "e", 2),
    ]
    out += [(_g("grid", grid), half), (_g("grid", grid), three_q)]
    deadend = [("s", "a", 0), ("a", "t", 2), ("s", "b", 1), ("b", "t", 0), ("s", "x", 0)]
    out.append((_g("deadend", deadend), half))
    return out
