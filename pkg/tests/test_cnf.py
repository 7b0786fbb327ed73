from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tiplan.errors import DimacsSyntaxError, NotThreeCnf
from tiplan.reductions.cnf import (
    Formula3CNF,
    formula_family,
    is_tautology,
    parse_dimacs,
    random_formula,
    render_dimacs,
    sat_oracle,
)

EXAMPLE = "c example\np cnf 4 2\n1 -2 3 0\n2 -3 4 0\n"


def test_parse_example_formula():
    f = parse_dimacs(EXAMPLE)
    assert f.num_vars == 4 and len(f.clauses) == 2
    assert str(f) == "(x1 | ~x2 | x3) & (x2 | ~x3 | x4)"
    assert f.satisfied_by((True, False, False, True))


def test_clauses_may_span_lines_and_stop_at_percent():
    f = parse_dimacs("p cnf 3 1\n1 2\n-3 0\n%\n0\n")
    assert f.clauses[0][2].positive is False


@pytest.mark.parametrize(
    "text, err",
    [
        ("1 2 3 0\n", DimacsSyntaxError),
        ("p cnf 3\n1 2 3 0\n", DimacsSyntaxError),
        ("p cnf 3 2\n1 2 3 0\n", DimacsSyntaxError),
        ("p cnf 3 1\n1 2 x 0\n", DimacsSyntaxError),
        ("p cnf 2 1\n1 2 3 0\n", DimacsSyntaxError),
        ("p cnf 3 1\n1 2 0\n", NotThreeCnf),
    ],
)
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_dimacs(text)


def test_unsat_and_tautology():
    f = Formula3CNF.from_ints(1, [[1, 1, 1], [-1, -1, -1]])
    assert sat_oracle(f) is None
    assert is_tautology(Formula3CNF.from_ints(2, [[1, -1, 2]]).clauses[0])
    assert not is_tautology(f.clauses[0])


def test_family_is_closed_under_renaming_and_complete():
    fam = formula_family(2, 1)
    # clauses over {x1, x2} using both variables, modulo swapping the names
    keys = {tuple(sorted(tuple(sorted((l.var if l.positive else -l.var) for l in c)) for c in f.clauses))
            for f in fam if f.num_vars == 2}
    for k in keys:
        swapped = tuple(sorted(tuple(sorted(-(3 - abs(x)) if x < 0 else 3 - x for x in c)) for c in k))
        assert swapped == k or swapped not in keys


def test_random_formula_deterministic():
    a = random_formula(4, 3, random.Random(7))
    b = random_formula(4, 3, random.Random(7))
    assert a == b
    assert all(len({l.var for l in c}) == 3 for c in a.clauses)


clause = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), min_size=3, max_size=3)


@settings(max_examples=150, deadline=None)
@given(st.lists(clause, min_size=1, max_size=4))
def test_oracle_matches_exhaustive_truth_table(clauses):
    f = Formula3CNF.from_ints(3, clauses)
    truth = [a for a in itertools.product((False, True), repeat=3) if f.satisfied_by(a)]
    got = sat_oracle(f)
    assert (got is None) == (not truth)
    if got is not None:
        assert got == truth[0]


@settings(max_examples=100, deadline=None)
@given(st.lists(clause, min_size=1, max_size=4))
def test_dimacs_round_trip(clauses):
    f = Formula3CNF.from_ints(3, clauses)
    assert parse_dimacs(render_dimacs(f)) == f
