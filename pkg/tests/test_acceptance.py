"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

from __future__ import annotations

import io
import random
import time
from contextlib import redirect_stdout
from fractions import Fraction

from tiplan.agent import AgentConfig, simulate_with_rewards
from tiplan.cli import main
from tiplan.graph import Subgraph, gen_random_dag, parse_graph
from tiplan.instances import catalogue
from tiplan.motivating import (
    audit_out_degree,
    check_minimality,
    find_minimal_motivating_subgraph,
    find_motivating_subgraph,
    is_motivating,
)
from tiplan.reductions import mms, mtr
from tiplan.reductions.cnf import Formula3CNF, formula_family, random_formula, sat_oracle
from tiplan.rewards import MtrInstance, Variant, grid_oracle, solve_exact
from tiplan.shortcut import (
    analyze,
    certified_lower_bound,
    check_certificate,
    ratio_bound,
    validate_minor_witness,
    witness_from_certificate,
)

F = Fraction
BETAS = [F(1, 3), F(1, 2), F(3, 4)]


def report(n: int, ok: bool, detail: str) -> None:
    print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")


def cli(*argv) -> str:
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main([str(a) for a in argv])
    assert code == 0, (argv, buf.getvalue())
    return buf.getvalue()


def test_criterion_1_akerlof_tightness(tmp_path):
    t0 = time.perf_counter()
    bad = []
    for beta in (F(1, 2), F(9, 10)):
        for k in range(2, 9):
            path = tmp_path / f"ak{k}.txt"
            cli("gen", "akerlof", "--k", k, "--beta", beta, "--out", path)
            g = parse_graph(path.read_text())
            out = cli("simulate", "--graph", path, "--beta", beta, "--tie", "procrastinate")
            steps = [line.split() for line in out.splitlines() if line.startswith("step")]
            walk = [steps[0][1]] + [s[2] for s in steps]
            ratio = g.path_cost(walk) / g.dist(g.start)
            if ratio != beta ** (2 - k) or walk[-1] != g.target:
                bad.append((beta, k, ratio))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 1
    report(1, ok, f"14 instances, mismatches {bad}, {elapsed:.2f}s (limit 1s)")
    assert ok


def test_criterion_2_bound_certificate():
    t0 = time.perf_counter()
    violations = []
    witnesses = 0
    graphs = 1200
    for seed in range(graphs):
        n = 6 + seed % 5
        beta = BETAS[seed % 3]
        tie = "procrastinate" if seed % 2 else "lex"
        g = gen_random_dag(n, seed=seed)
        cfg = AgentConfig(beta, tie)
        cert = analyze(g, cfg)
        d = g.dist(g.start)
        if d < certified_lower_bound(cert, g):
            violations.append((seed, "a"))
        if d > 0:
            walked = g.path_cost(cert.path)
            if walked / d > ratio_bound(cert):
                violations.append((seed, "b"))
        # c and d: bounds on a_i, b_i and the running-sum identities
        violations += [(seed, p) for p in check_certificate(cert, g)]
        for i, s in enumerate(cert.S, 1):
            if s:
                w = witness_from_certificate(cert, g, i)
                witnesses += 1
                if w.k != len(s) + 1 or validate_minor_witness(g, w):
                    violations.append((seed, f"e S_{i}"))
    elapsed = time.perf_counter() - t0
    ok = not violations and elapsed < 30
    report(2, ok, f"{graphs} graphs, {witnesses} minor witnesses, "
                  f"{len(violations)} violations {violations[:3]}, {elapsed:.1f}s (limit 30s)")
    assert ok


def test_criterion_3_mms_equivalence():
    t0 = time.perf_counter()
    beta = F(9, 10)
    family = formula_family(3, 2)
    rng = random.Random(2024)
    randoms = [random_formula(4, 3, rng) for _ in range(60)]
    failures = []
    max_calls = 0
    n_sat = 0
    for f in family + randoms:
        gadget = mms.build_mms_gadget(f, beta)
        cfg = gadget.cfg()
        asg = sat_oracle(f)
        res = find_motivating_subgraph(gadget.graph, cfg, budget=1_000_000)
        max_calls = max(max_calls, res.stats.oracle_calls)
        if (asg is not None) != res.found:
            failures.append((str(f), "verdict"))
            continue
        if asg is None:
            continue
        n_sat += 1
        sub = mms.assignment_to_mms(gadget, asg)
        if not (is_motivating(sub, cfg) and check_minimality(sub, cfg, budget=1_000_000)):
            failures.append((str(f), "construction"))
            continue
        if not f.satisfied_by(mms.mms_to_assignment(gadget, sub)):
            failures.append((str(f), "round trip"))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 300
    report(3, ok, f"{len(family)} exhaustive + {len(randoms)} random formulas ({n_sat} SAT), "
                  f"max oracle calls {max_calls}, failures {failures[:3]}, {elapsed:.1f}s (limit 300s)")
    assert ok


def test_criterion_4_mtr_forward():
    t0 = time.perf_counter()
    beta = F(1, 2)
    rng = random.Random(5)
    formulas = [Formula3CNF.from_ints(4, [[1, -2, 3], [2, -3, 4]])]
    while len(formulas) < 8:
        f = random_formula(rng.choice([3, 4, 5]), rng.choice([2, 3, 4]), rng)
        if sat_oracle(f) is not None:
            formulas.append(f)
    problems = []
    for f in formulas:
        gadget = mtr.build_mtr_gadget(f, beta, pad_n=5)
        problems += [(str(f), ch.line()) for ch in mtr.relation_checks(gadget.consts) if not ch.ok]
        asg = sat_oracle(f)
        rw = mtr.assignment_to_rewards(gadget, asg)
        if sum(rw.values()) != 71:
            problems.append((str(f), "objective"))
        traj = simulate_with_rewards(gadget.graph, AgentConfig(beta), rw)
        if not traj.reached:
            problems.append((str(f), "not reached"))
        leads = mtr.lead_to_checks(gadget, asg, traj)
        if len(leads) != 8 or not all(lt.ok for lt in leads):
            problems.append((str(f), "lead-to"))
    checks = mtr.relation_checks(mtr.MtrConstants.of(beta, 5))
    n_rel = len({ch.index for ch in checks})
    elapsed = time.perf_counter() - t0
    ok = not problems and n_rel == 9 and elapsed < 10
    report(4, ok, f"{len(formulas)} padded formulas, {len(checks)} relation checks over 9 relations, "
                  f"problems {problems[:3]}, {elapsed:.1f}s (limit 10s)")
    assert ok


def test_criterion_5_mtr_solver_vs_grid():
    t0 = time.perf_counter()
    delta = F(1, 8)
    problems = []
    instances = catalogue()
    for g, beta in instances:
        vals = {}
        for v in Variant:
            inst = MtrInstance(g, beta, v)
            exact = solve_exact(inst).objective
            slack = len(g.nodes) * delta
            grid = grid_oracle(inst, delta, exact + slack)
            vals[v] = exact
            if grid is None or not exact <= grid <= exact + slack:
                problems.append((g.name, beta, v.name, exact, grid))
        if not vals[Variant.III] <= vals[Variant.I] <= vals[Variant.II]:
            problems.append((g.name, beta, "ordering"))
        if g.name.startswith("single"):
            if any(x != g.edges[0].cost / beta for x in vals.values()):
                problems.append((g.name, beta, "c/beta"))
    names = {g.name for g, _ in instances}
    covered = any(n.startswith("single") for n in names) and "parallel_1_2" in names
    elapsed = time.perf_counter() - t0
    ok = not problems and covered and len(instances) >= 30 and elapsed < 120
    report(5, ok, f"{len(instances)} graphs x 3 variants, delta 1/8, problems {problems[:3]}, "
                  f"{elapsed:.1f}s (limit 120s)")
    assert ok


def test_criterion_6_minimality_audit():
    t0 = time.perf_counter()
    checked = nontrivial = seed = 0
    violations = []
    while nontrivial < 100:
        g = gen_random_dag(6 + seed % 4, F(1, 2), seed=seed)
        beta = BETAS[seed % 3]
        seed += 1
        if len(g.edges) > 25:
            continue
        # smallest reward on a quarter grid for which a motivating subgraph exists
        for k in range(400):
            cfg = AgentConfig(beta, goal_reward=F(k, 4))
            if find_motivating_subgraph(g, cfg).found:
                break
        else:
            continue
        res = find_minimal_motivating_subgraph(g, cfg)
        checked += 1
        if not is_motivating(Subgraph.full(g), cfg):
            nontrivial += 1
        if not res.found or not check_minimality(res.subgraph, cfg) or audit_out_degree(res.subgraph):
            violations.append(seed - 1)
    elapsed = time.perf_counter() - t0
    ok = not violations and checked >= 100
    report(6, ok, f"{checked} motivatable graphs ({nontrivial} where the whole graph is not "
                  f"motivating), violations {violations[:5]}, {elapsed:.1f}s")
    assert ok
