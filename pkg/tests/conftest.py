from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from tiplan.graph import Edge, TaskGraph

BETAS = [Fraction(1, 3), Fraction(1, 2), Fraction(3, 4)]


@st.composite
def small_dags(draw, max_nodes: int = 7, max_cost: int = 4, backbone: bool = True):
    """DAG on nodes a0..a{n-1} (topological by index), start a0, target last."""
    n = draw(st.integers(2, max_nodes))
    ids = [f"a{i}" for i in range(n)]
    cost = st.builds(Fraction, st.integers(0, 2 * max_cost), st.sampled_from([1, 2]))
    pairs = set()
    if backbone:
        pairs.add((0, n - 1))
    for i in range(n):
        for j in range(i + 1, n):
            if draw(st.booleans()):
                pairs.add((i, j))
    edges = tuple(Edge(ids[i], ids[j], draw(cost)) for i, j in sorted(pairs))
    return TaskGraph(tuple(ids), edges, ids[0], ids[-1])


betas = st.sampled_from(BETAS + [Fraction(9, 10), Fraction(1)])
