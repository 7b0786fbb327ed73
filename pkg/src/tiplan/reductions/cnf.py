"""3-CNF formulas: DIMACS parsing, evaluation and a brute-force SAT oracle."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from ..errors import BadParameter, DimacsSyntaxError, NotThreeCnf

Assignment = tuple[bool, ...]


class Literal(NamedTuple):
    var: int
    positive: bool

    def holds(self, asg: Sequence[bool]) -> bool:
        return asg[self.var - 1] == self.positive

    def __str__(self) -> str:
        return f"x{self.var}" if self.positive else f"~x{self.var}"


Clause = tuple[Literal, Literal, Literal]


@dataclass(frozen=True)
class Formula3CNF:
    num_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise BadParameter("a formula needs at least one variable")
        clauses = tuple(tuple(Literal(int(v), bool(p)) for v, p in c) for c in self.clauses)
        for c in clauses:
            if len(c) != 3:
                raise NotThreeCnf(f"clause {c} has {len(c)} literals")
            for lit in c:
                if not 1 <= lit.var <= self.num_vars:
                    raise BadParameter(f"variable {lit.var} outside 1..{self.num_vars}")
        object.__setattr__(self, "clauses", clauses)

    @classmethod
    def from_ints(cls, num_vars: int, clauses: Sequence[Sequence[int]]) -> Formula3CNF:
        """Build from DIMACS-style signed integers, e.g. ``[[1, -2, 3]]``."""
        return cls(num_vars, tuple(tuple(Literal(abs(x), x > 0) for x in c) for c in clauses))

    def satisfied_by(self, asg: Sequence[bool]) -> bool:
        if len(asg) < self.num_vars:
            raise BadParameter(f"assignment covers {len(asg)} of {self.num_vars} variables")
        return all(any(lit.holds(asg) for lit in c) for c in self.clauses)

    def padded(self, n: int) -> Formula3CNF:
        """Same clauses over ``n >= num_vars`` variables."""
        if n < self.num_vars:
            raise BadParameter(f"cannot pad {self.num_vars} variables down to {n}")
        return Formula3CNF(n, self.clauses)

    def __str__(self) -> str:
        return " & ".join("(" + " | ".join(str(l) for l in c) + ")" for c in self.clauses)


def is_tautology(clause: Clause) -> bool:
    return any(Literal(l.var, not l.positive) in clause for l in clause)


def parse_dimacs(text: str) -> Formula3CNF:
    header = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise DimacsSyntaxError(f"line {lineno}: bad problem line {raw!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsSyntaxError(f"line {lineno}: bad problem line {raw!r}") from None
            continue
        if header is None:
            raise DimacsSyntaxError(f"line {lineno}: clause before the problem line")
        for tok in line.split():
            try:
                x = int(tok)
            except ValueError:
                raise DimacsSyntaxError(f"line {lineno}: bad literal {tok!r}") from None
            if x == 0:
                clauses.append(tuple(current))
                current = []
            else:
                if abs(x) > header[0]:
                    raise DimacsSyntaxError(f"line {lineno}: variable {abs(x)} exceeds {header[0]}")
                current.append(x)
    if header is None:
        raise DimacsSyntaxError("missing 'p cnf' problem line")
    if current:
        clauses.append(tuple(current))
    if len(clauses) != header[1]:
        raise DimacsSyntaxError(f"header promises {header[1]} clauses, found {len(clauses)}")
    for c in clauses:
        if len(c) != 3:
            raise NotThreeCnf(f"clause {' '.join(map(str, c))} has {len(c)} literals")
    return Formula3CNF.from_ints(header[0], clauses)


def render_dimacs(f: Formula3CNF) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    for c in f.clauses:
        lines.append(" ".join(str(l.var if l.positive else -l.var) for l in c) + " 0")
    return "\n".join(lines) + "\n"


def sat_oracle(f: Formula3CNF) -> Assignment | None:
    """First satisfying assignment in the order False < True per variable, or None."""
    if f.num_vars > 20:
        raise BadParameter("brute-force oracle is limited to 20 variables")
    for asg in itertools.product((False, True), repeat=f.num_vars):
        if f.satisfied_by(asg):
            return asg
    return None


def _canonical(num_vars: int, clauses: Sequence[tuple[int, ...]]) -> tuple:
    """Smallest relabelled form of a clause multiset under variable permutations."""
    best = None
    for perm in itertools.permutations(range(1, num_vars + 1)):
        relabelled = sorted(
            tuple(sorted((perm[abs(x) - 1] if x > 0 else -perm[abs(x) - 1]) for x in c))
            for c in clauses
        )
        key = tuple(relabelled)
        if best is None or key < best:
            best = key
    return best


def formula_family(max_vars: int, max_clauses: int) -> list[Formula3CNF]:
    """Every 3-CNF with at most the given sizes, one per variable renaming class.

    Clauses are multisets of literals (repeats and complementary pairs
    allowed); every variable 1..n occurs somewhere.
    """
    out = []
    seen = set()
    for n in range(1, max_vars + 1):
        lits = [x for v in range(1, n + 1) for x in (v, -v)]
        clause_pool = list(itertools.combinations_with_replacement(sorted(lits), 3))
        for m in range(1, max_clauses + 1):
            for combo in itertools.combinations_with_replacement(clause_pool, m):
                used = {abs(x) for c in combo for x in c}
                if len(used) != n:
                    continue
                key = (n, _canonical(n, combo))
                if key in seen:
                    continue
                seen.add(key)
                out.append(Formula3CNF.from_ints(n, key[1]))
    return out


def random_formula(num_vars: int, num_clauses: int, rng) -> Formula3CNF:
    """Clauses over three distinct variables with random signs; ``rng`` is a random.Random."""
    if num_vars < 3:
        raise BadParameter("need at least three variables for distinct-variable clauses")
    clauses = []
    for _ in range(num_clauses):
        vs = rng.sample(range(1, num_vars + 1), 3)
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return Formula3CNF.from_ints(num_vars, clauses)
