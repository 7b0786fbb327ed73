"""Executable cost-ratio certificates built from the agent's shortcut nodes.

For the path ``P`` the agent walks, a *shortcut* is a node of ``P`` where the
agent's step is not on any min-cost continuation.  Each shortcut ``u_i``
comes with a canonical min-cost path ``P_i``, the node ``w_i`` where ``P_i``
first meets ``P`` again, and an index ``t_i`` locating ``w_i`` among the
shortcuts (integers for ``w_i = u_j``, half-integers for ``w_i = u_j'``).  The
coefficients ``a_i, b_i`` weight the segments of ``P`` in a lower bound on
the optimal cost, which in turn bounds the cost ratio by
``beta ** -max|S_i|``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .agent import AgentConfig, simulate_plain
from .errors import PreconditionViolated
from .graph import fmt_rational

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Shortcut:
    node: str
    via: str
    merge: str
    path: tuple[str, ...]
    t_value: Fraction


@dataclass(frozen=True)
class ShortcutCertificate:
    path: tuple[str, ...]
    beta: Fraction
    shortcuts: tuple[Shortcut, ...]
    # S[i-1] is S_i for i = 1..n+1; a[i-1] is a_i (n+1 entries); b[i-1] is b_i (n entries)
    S: tuple[frozenset[int], ...]
    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]

    @property
    def n(self) -> int:
        return len(self.shortcuts)

    @property
    def max_s(self) -> int:
        return max(len(s) for s in self.S)

    def position(self, node: str) -> int:
        return self.path.index(node)

    def successor(self, i: int) -> str:
        """u_i' for 1-based shortcut index i; u_0' is the start."""
        if i == 0:
            return self.path[0]
        return self.path[self.position(self.shortcuts[i - 1].node) + 1]


def _t_value(path_pos: dict[str, int], anchors: list[int], w: str) -> Fraction:
    q = path_pos[w]
    for j, p in enumerate(anchors, 1):
        if p == q:
            return Fraction(j)
    for j, p in enumerate(anchors, 1):
        if p + 1 == q:
            return j + HALF
    for j, p in enumerate(anchors, 1):
        if p > q:
            return Fraction(j)
    return Fraction(len(anchors) + 1)


def analyze(g, cfg: AgentConfig) -> ShortcutCertificate:
    """Simulate the plain agent and build the shortcut certificate for its path.

    A node ``u`` of ``P`` counts as a shortcut when ``c(u, u') + d(u') > d(u)``.
    Nodes where the agent's step is itself min-cost are not shortcuts even if
    the canonical min-cost path leaves ``P`` there: choosing ``P_i`` through
    ``u'`` is always allowed and keeps ``t_i >= i + 1``.
    """
    traj = simulate_plain(g, cfg)
    path = traj.nodes
    d = g.distances_to()
    pos = {u: i for i, u in enumerate(path)}
    beta = cfg.beta

    anchors = [
        i for i, u in enumerate(path[:-1]) if g.cost(u, path[i + 1]) + d[path[i + 1]] > d[u]
    ]
    shortcuts = []
    for i in anchors:
        u = path[i]
        p_i = g.shortest_path(u)
        w = next(x for x in p_i[1:] if x in pos)
        shortcuts.append(Shortcut(u, p_i[1], w, p_i, _t_value(pos, anchors, w)))

    n = len(shortcuts)
    t = [sc.t_value for sc in shortcuts]
    S = tuple(
        frozenset(j for j in range(1, i) if t[j - 1] >= i) for i in range(1, n + 2)
    )
    a: list[Fraction] = []
    b: list[Fraction] = []
    for i in range(1, n + 2):
        if i == 1:
            ai = Fraction(1)
        else:
            ai = beta * b[i - 2] + sum(
                ((1 - beta) * b[j - 1] for j in range(1, i) if i - 1 < t[j - 1] < i), Fraction(0)
            )
        a.append(ai)
        if i <= n:
            b.append(ai + sum(((1 - beta) * b[j - 1] for j in range(1, i) if t[j - 1] == i), Fraction(0)))
    return ShortcutCertificate(path, beta, tuple(shortcuts), S, tuple(a), tuple(b))


def _segment_cost(g, path: Sequence[str], i: int, j: int) -> Fraction:
    return sum((g.cost(path[k], path[k + 1]) for k in range(i, j)), Fraction(0))


def certified_lower_bound(cert: ShortcutCertificate, g) -> Fraction:
    """Weighted sum of P's segments that never exceeds d(s)."""
    path = cert.path
    pos = {u: i for i, u in enumerate(path)}
    anchors = [pos[sc.node] for sc in cert.shortcuts]
    total = Fraction(0)
    prev = 0  # position of u'_{j-1}; u'_0 is the start
    for j, p in enumerate(anchors, 1):
        total += cert.a[j - 1] * _segment_cost(g, path, prev, p)
        total += cert.b[j - 1] * _segment_cost(g, path, p, p + 1)
        prev = p + 1
    total += cert.a[cert.n] * _segment_cost(g, path, prev, len(path) - 1)
    return total


def ratio_bound(cert: ShortcutCertificate, beta=None) -> Fraction:
    beta = cert.beta if beta is None else Fraction(beta)
    return (1 / beta) ** cert.max_s


def check_certificate(cert: ShortcutCertificate, g) -> list[str]:
    """Every identity and inequality the certificate promises; returns the violations."""
    beta = cert.beta
    n = cert.n
    t = [sc.t_value for sc in cert.shortcuts]
    bad = []
    for i, ti in enumerate(t, 1):
        if ti < i + 1:
            bad.append(f"t_{i} = {ti} < {i + 1}")
    for i in range(1, n + 2):
        ai = cert.a[i - 1]
        floor = beta ** len(cert.S[i - 1])
        if not ai >= floor:
            bad.append(f"a_{i} = {ai} < beta^|S_{i}| = {floor}")
        if i <= n and not cert.b[i - 1] >= ai:
            bad.append(f"b_{i} < a_{i}")
        if ai <= 0:
            bad.append(f"a_{i} not positive")
        partial = ai + sum(((1 - beta) * cert.b[j - 1] for j in cert.S[i - 1]), Fraction(0))
        if partial != 1:
            bad.append(f"a_{i} + sum_(S_{i}) (1-beta) b_j = {partial} != 1")
    for m in range(2, n + 2):
        lhs = sum((cert.b[j - 1] for j in cert.S[m - 1]), Fraction(0))
        rhs = cert.b[m - 2] + sum(
            (cert.b[j - 1] for j in cert.S[m - 2] if t[j - 1] >= m), Fraction(0)
        )
        if lhs != rhs:
            bad.append(f"running-sum identity fails at m={m}: {lhs} != {rhs}")
    d_s = g.dist(g.start)
    lower = certified_lower_bound(cert, g)
    walked = g.path_cost(cert.path)
    if not d_s >= lower:
        bad.append(f"d(s) = {d_s} < certified bound {lower}")
    if not lower >= beta ** cert.max_s * walked:
        bad.append(f"certified bound {lower} < beta^max|S| * cost(P)")
    return bad


def render_certificate(cert: ShortcutCertificate, g) -> str:
    lines = []
    for sc in cert.shortcuts:
        lines.append(f"shortcut {sc.node} via {sc.via} merge {sc.merge} t={_fmt_t(sc.t_value)}")
    for i, s in enumerate(cert.S, 1):
        lines.append(f"S_{i} {{{','.join(str(j) for j in sorted(s))}}}")
    for i, x in enumerate(cert.a, 1):
        lines.append(f"a_{i} {fmt_rational(x)}")
    for i, x in enumerate(cert.b, 1):
        lines.append(f"b_{i} {fmt_rational(x)}")
    lines.append(f"lower {fmt_rational(certified_lower_bound(cert, g))}")
    lines.append(f"bound {fmt_rational(ratio_bound(cert))}")
    return "\n".join(lines) + "\n"


def _fmt_t(t: Fraction) -> str:
    return str(t.numerator) if t.denominator == 1 else f"{t.numerator}/{t.denominator}"


# ---------------------------------------------------------------- minor witnesses


@dataclass(frozen=True)
class MinorWitness:
    """Branch sets U_1..U_k and W of an F_k minor in the skeleton.

    ``connecting_edges`` maps each F_k edge, named ``("U1", "U2")`` or
    ``("U3", "W")``, to a directed graph edge joining the two branch sets.
    """

    k: int
    branch_sets: tuple[frozenset[str], ...]
    hub: frozenset[str]
    connecting_edges: dict[tuple[str, str], tuple[str, str]]


def fan_edges(k: int) -> list[tuple[str, str]]:
    edges = [(f"U{i}", f"U{i + 1}") for i in range(1, k)]
    edges += [(f"U{i}", "W") for i in range(1, k + 1)]
    return edges


def _crossing(path_pos: dict[str, int], other: Sequence[str]) -> int:
    for x in other[1:]:
        if x in path_pos:
            return path_pos[x]
    raise PreconditionViolated(f"path from {other[0]} never meets P again")


def build_minor_witness(
    g,
    path: Sequence[str],
    anchors: Sequence[str],
    u_prime: str,
    paths: Sequence[Sequence[str]],
) -> MinorWitness:
    """Construct an F_k minor (k = len(anchors) + 1) from paths that jump over ``u_prime``.

    ``anchors`` lie on ``path`` in order and ``u_prime`` follows the last one;
    ``paths[l]`` starts at ``anchors[l]`` and must first meet ``path`` again
    strictly after ``u_prime``.
    """
    path = tuple(path)
    pos = {u: i for i, u in enumerate(path)}
    k = len(anchors) + 1
    if len(paths) != len(anchors):
        raise PreconditionViolated("need exactly one path per anchor")
    try:
        apos = [pos[a] for a in anchors] + [pos[u_prime]]
    except KeyError as exc:
        raise PreconditionViolated(f"{exc.args[0]} is not on P") from None
    if any(x >= y for x, y in zip(apos, apos[1:])):
        raise PreconditionViolated("anchors and u' must appear on P in order")
    for i, (x, y) in enumerate(zip(path, path[1:])):
        if (x, y) not in g.edge_key_set:
            raise PreconditionViolated(f"P uses a non-edge {x}->{y}")
    for anchor, p in zip(anchors, paths):
        if not p or p[0] != anchor:
            raise PreconditionViolated(f"path for anchor {anchor} must start there")
        for x, y in zip(p, p[1:]):
            if (x, y) not in g.edge_key_set:
                raise PreconditionViolated(f"path for {anchor} uses a non-edge {x}->{y}")
        if _crossing(pos, p) <= apos[-1]:
            raise PreconditionViolated(
                f"path from {anchor} rejoins P at or before {u_prime}"
            )

    branch = [frozenset(path[apos[i]:apos[i + 1]]) for i in range(k - 1)]
    branch.append(frozenset([u_prime]))
    hub = set(path[apos[-1] + 1:])
    for p in paths:
        cut = next(i for i, x in enumerate(p[1:], 1) if x in pos)
        hub.update(p[1:cut + 1])

    connecting = {}
    for i in range(1, k):
        y = path[apos[i]]
        connecting[(f"U{i}", f"U{i + 1}")] = (path[apos[i] - 1], y)
    for i, p in enumerate(paths, 1):
        connecting[(f"U{i}", "W")] = (p[0], p[1])
    connecting[(f"U{k}", "W")] = (u_prime, path[apos[-1] + 1])

    witness = MinorWitness(k, tuple(branch), frozenset(hub), connecting)
    problems = validate_minor_witness(g, witness)
    if problems:
        raise PreconditionViolated("; ".join(problems))
    return witness


def validate_minor_witness(g, witness: MinorWitness) -> list[str]:
    """Independent check of a witness against the skeleton of ``g``."""
    sets = {f"U{i}": s for i, s in enumerate(witness.branch_sets, 1)}
    sets["W"] = witness.hub
    problems = []
    if len(witness.branch_sets) != witness.k:
        problems.append("wrong number of branch sets")
    names = sorted(sets)
    for i, x in enumerate(names):
        if not sets[x]:
            problems.append(f"{x} is empty")
        if not sets[x] <= g.node_set:
            problems.append(f"{x} has nodes outside the graph")
        for y in names[i + 1:]:
            if sets[x] & sets[y]:
                problems.append(f"{x} and {y} overlap")

    undirected: dict[str, set[str]] = {}
    for e in g.edges:
        undirected.setdefault(e.src, set()).add(e.dst)
        undirected.setdefault(e.dst, set()).add(e.src)

    for name, s in sets.items():
        if not s:
            continue
        first = next(iter(s))
        seen = {first}
        queue = deque([first])
        while queue:
            x = queue.popleft()
            for y in undirected.get(x, ()):
                if y in s and y not in seen:
                    seen.add(y)
                    queue.append(y)
        if seen != s:
            problems.append(f"{name} is not connected in the skeleton")

    for x, y in fan_edges(witness.k):
        if not any(v in undirected.get(u, ()) for u in sets[x] for v in sets[y]):
            problems.append(f"no skeleton edge between {x} and {y}")
        e = witness.connecting_edges.get((x, y))
        if e is None or e not in g.edge_key_set:
            problems.append(f"missing or bogus connecting edge for {x}-{y}")
            continue
        if not ({e[0], e[1]} & sets[x] and {e[0], e[1]} & sets[y]):
            problems.append(f"connecting edge {e} does not join {x} and {y}")
    return problems


def witness_from_certificate(cert: ShortcutCertificate, g, i: int, path_cap: int = 20000) -> MinorWitness:
    """F_{|S_i|+1} witness using every element of S_i (1-based ``i``).

    The direct construction anchors at the shortcuts of S_i and uses u' of the
    last one.  It breaks down when that u' is itself the shortcut u_i and some
    P_j lands exactly on it; then :func:`search_fan_witness` looks for another
    path and anchor set meeting the same hypotheses.
    """
    members = sorted(cert.S[i - 1])
    if not members:
        raise PreconditionViolated(f"S_{i} is empty")
    anchors = [cert.shortcuts[j - 1].node for j in members]
    paths = [cert.shortcuts[j - 1].path for j in members]
    try:
        return build_minor_witness(g, cert.path, anchors, cert.successor(members[-1]), paths)
    except PreconditionViolated:
        found = search_fan_witness(g, len(members) + 1, first=cert.path, path_cap=path_cap)
        if found is None:
            raise
        return found


def _escape(g, on_path: dict[str, int], anchor: str, beyond: int) -> list[str] | None:
    """A directed path from ``anchor`` whose first return to the path is past position ``beyond``."""
    parent: dict[str, str] = {}
    queue = deque([anchor])
    seen = {anchor}
    while queue:
        x = queue.popleft()
        for y, _ in g.successors(x):
            if y in on_path:
                if on_path[y] > beyond:
                    out = [y, x]
                    while out[-1] != anchor:
                        out.append(parent[out[-1]])
                    return out[::-1]
                continue
            if y not in seen:
                seen.add(y)
                parent[y] = x
                queue.append(y)
    return None


def search_fan_witness(g, k: int, first: Sequence[str] | None = None, path_cap: int = 20000):
    """Look for any path, k-1 anchors and u' satisfying the minor construction's hypotheses.

    Tries ``first`` and then every s->t path (at most ``path_cap``); for each
    candidate u' it keeps the anchors before u' that can escape past it.
    Returns a validated witness or None.
    """
    def candidates():
        if first is not None:
            yield tuple(first)
        for n, p in enumerate(g.all_paths(g.start, g.target)):
            if n >= path_cap:
                return
            yield tuple(p)

    for path in candidates():
        pos = {u: i for i, u in enumerate(path)}
        for cut in range(k - 1, len(path) - 1):
            chosen = []
            for q in range(cut):
                esc = _escape(g, pos, path[q], cut)
                if esc is not None:
                    chosen.append((path[q], esc))
            if len(chosen) < k - 1:
                continue
            chosen = chosen[-(k - 1):]
            try:
                return build_minor_witness(
                    g, path, [a for a, _ in chosen], path[cut], [p for _, p in chosen]
                )
            except PreconditionViolated:
                continue
    return None
