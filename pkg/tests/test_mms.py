from __future__ import annotations

from fractions import Fraction

import pytest

from tiplan.agent import simulate_with_goal_reward
from tiplan.errors import AssignmentNotSatisfying, NotMinimalMotivating
from tiplan.graph import Subgraph
from tiplan.motivating import check_minimality, find_motivating_subgraph, is_motivating
from tiplan.reductions import mms
from tiplan.reductions.cnf import Formula3CNF

NINE = Fraction(9, 10)
EXAMPLE = Formula3CNF.from_ints(4, [[1, -2, 3], [2, -3, 4]])
EXAMPLE_ASG = (True, False, False, True)


@pytest.fixture(scope="module")
def gadget():
    return mms.build_mms_gadget(EXAMPLE, NINE)


def test_constants_at_nine_tenths():
    k = mms.MmsConstants.of(NINE)
    assert k.f == Fraction(29, 200)
    assert k.z == Fraction(447, 20)
    assert k.ell == 155
    assert k.r == Fraction(40610, 1800)
    assert k.exit_cost == Fraction(407, 20)


def test_bus_cost(gadget):
    k, m = gadget.consts, 2
    bus = gadget.bus
    assert len(bus) == 1 + m + k.ell + 1
    assert gadget.graph.path_cost(bus) == k.f * (m + k.ell) + (k.f + k.z - k.f * k.ell)


def test_literal_edges(gadget):
    g = gadget.graph
    assert g.cost("u1", "v1") == 2
    assert g.cost("u1", "v2") == 1 + NINE
    assert g.cost("v1", "v1'") == 1 - NINE
    assert g.cost("v1", "w") == 0


def test_whole_gadget_is_not_motivating(gadget):
    assert not simulate_with_goal_reward(gadget.graph, gadget.cfg()).reached


def test_forward_and_back(gadget):
    sub = mms.assignment_to_mms(gadget, EXAMPLE_ASG)
    assert gadget.bus_edges <= sub.kept_edges
    assert is_motivating(sub, gadget.cfg())
    assert check_minimality(sub, gadget.cfg())
    assert mms.audit_structure(gadget, sub) == []
    back = mms.mms_to_assignment(gadget, sub)
    assert EXAMPLE.satisfied_by(back)
    # variables on kept routes keep their values
    assert back[0] is True and back[2] is False


def test_search_finds_structured_subgraph(gadget):
    res = find_motivating_subgraph(gadget.graph, gadget.cfg())
    assert res.found
    assert gadget.bus_edges <= res.subgraph.kept_edges


def test_non_satisfying_assignment_rejected(gadget):
    with pytest.raises(AssignmentNotSatisfying):
        mms.assignment_to_mms(gadget, (False, True, False, False))


def test_bus_only_is_not_motivating(gadget):
    sub = Subgraph.from_edges(gadget.graph, gadget.bus_edges)
    with pytest.raises(NotMinimalMotivating):
        mms.mms_to_assignment(gadget, sub)


def test_unsat_formula_has_no_motivating_subgraph():
    f = Formula3CNF.from_ints(1, [[1, 1, 1], [-1, -1, -1]])
    g = mms.build_mms_gadget(f, NINE)
    assert not find_motivating_subgraph(g.graph, g.cfg()).found


def test_tautological_clause_gets_fresh_variable():
    f = Formula3CNF.from_ints(1, [[1, -1, 1], [-1, -1, -1]])
    g = mms.build_mms_gadget(f, NINE)
    assert g.formula.num_vars == 2 and g.notes
    assert find_motivating_subgraph(g.graph, g.cfg()).found
    sub = mms.assignment_to_mms(g, (False,))
    assert check_minimality(sub, g.cfg())
    assert mms.mms_to_assignment(g, sub) == (False,)


def test_render_mentions_roles(gadget):
    text = mms.render_gadget(gadget)
    assert "# role: exit" in text and "# ell 155" in text
    assert "exit_edge 407/20" in mms.constants_report(gadget)
