"""Command-line front end.

Exit codes: 0 success, 1 property violated or nothing found, 2 usage or
input error, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .agent import (
    AgentConfig,
    cost_ratio,
    render_trajectory,
    simulate_plain,
    simulate_with_goal_reward,
    simulate_with_rewards,
)
from .errors import BudgetExceeded, PlanningError, ZeroOptimalCost
from .graph import as_rational, fmt_rational, gen_akerlof, gen_random_dag, parse_graph, render_graph, render_subgraph
from .motivating import (
    DEFAULT_BUDGET,
    audit_out_degree,
    check_minimality,
    find_minimal_motivating_subgraph,
    find_motivating_subgraph,
    is_motivating,
)
from .reductions import mms, mtr
from .reductions.cnf import parse_dimacs, sat_oracle
from .rewards import MtrInstance, parse_rewards, render_solution, solve_exact
from .shortcut import (
    analyze,
    certified_lower_bound,
    check_certificate,
    ratio_bound,
    render_certificate,
    witness_from_certificate,
)

OK, VIOLATED, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _fmt_asg(asg) -> str:
    return " ".join(f"x{i}={int(v)}" for i, v in enumerate(asg, 1))


# ---------------------------------------------------------------- gen


def cmd_gen(args) -> int:
    if args.kind == "akerlof":
        _emit(render_graph(gen_akerlof(args.k, args.beta, args.base)), args.out)
    elif args.kind == "random":
        g = gen_random_dag(args.n, args.edge_prob, (0, args.max_cost), args.seed)
        _emit(render_graph(g), args.out)
    elif args.kind == "mms":
        gadget = mms.build_mms_gadget(parse_dimacs(_read(args.cnf)), args.beta)
        _emit(mms.render_gadget(gadget), args.out)
        if args.out:
            sys.stdout.write(mms.constants_report(gadget))
    else:
        gadget = mtr.build_mtr_gadget(parse_dimacs(_read(args.cnf)), args.beta, args.pad_n)
        _emit(mtr.render_gadget(gadget), args.out)
        if args.out:
            sys.stdout.write(mtr.constants_report(gadget))
    return OK


# ---------------------------------------------------------------- agent commands


def cmd_simulate(args) -> int:
    g = parse_graph(_read(args.graph))
    cfg = AgentConfig(args.beta, args.tie)
    if args.rewards:
        traj = simulate_with_rewards(g, cfg, parse_rewards(_read(args.rewards)))
    elif args.reward is not None or g.goal_reward is not None:
        r = args.reward if args.reward is not None else g.goal_reward
        traj = simulate_with_goal_reward(g, cfg.with_goal_reward(r))
    else:
        traj = simulate_plain(g, cfg)
    sys.stdout.write(render_trajectory(traj, machine=not args.human))
    return OK


def cmd_ratio(args) -> int:
    g = parse_graph(_read(args.graph))
    cfg = AgentConfig(args.beta, args.tie)
    try:
        ratio = cost_ratio(g, cfg)
    except ZeroOptimalCost:
        sys.stdout.write("ratio undefined (optimal cost is 0)\n")
        return VIOLATED
    cert = analyze(g, cfg)
    sys.stdout.write(f"ratio {fmt_rational(ratio)}\n")
    sys.stdout.write(render_certificate(cert, g))
    return OK


def cmd_motivate(args) -> int:
    g = parse_graph(_read(args.graph))
    r = args.reward if args.reward is not None else g.goal_reward
    if r is None:
        raise UsageError("motivate needs --reward or a goalreward line in the graph")
    cfg = AgentConfig(args.beta, args.tie, r)
    search = find_minimal_motivating_subgraph if args.minimal else find_motivating_subgraph
    res = search(g, cfg, args.budget)
    if not res.found:
        sys.stdout.write("NONE\n")
        return VIOLATED
    sys.stdout.write(render_subgraph(res.subgraph))
    sys.stdout.write(f"# oracle_calls {res.stats.oracle_calls}\n")
    if args.minimal:
        bad = audit_out_degree(res.subgraph)
        for u, deg in bad:
            sys.stdout.write(f"# out-degree violation {u} {deg}\n")
        if bad:
            return VIOLATED
    return OK


def cmd_rewards(args) -> int:
    g = parse_graph(_read(args.graph))
    inst = MtrInstance(g, args.beta, args.variant, args.bound)
    try:
        sol = solve_exact(inst, args.budget, strict_epsilon=args.strict)
    except BudgetExceeded:
        sys.stdout.write("budget exhausted before any feasible configuration\n")
        return BUDGET
    if sol is None:
        sys.stdout.write("NONE\n")
        return VIOLATED
    sys.stdout.write(render_solution(sol))
    sys.stdout.write(render_trajectory(sol.trajectory))
    return OK if sol.optimal else BUDGET


# ---------------------------------------------------------------- verify


def _verify_mms(args) -> int:
    formula = parse_dimacs(_read(args.cnf))
    gadget = mms.build_mms_gadget(formula, args.beta)
    cfg = gadget.cfg()
    asg = sat_oracle(formula)
    res = find_motivating_subgraph(gadget.graph, cfg, args.budget)
    lines = [f"sat {'SAT' if asg else 'UNSAT'}", f"search {'Found' if res.found else 'NONE'}"]
    lines += [f"note {n}" for n in gadget.notes]
    ok = (asg is not None) == res.found
    if asg is not None:
        sub = mms.assignment_to_mms(gadget, asg)
        motivating = is_motivating(sub, cfg)
        minimal = check_minimality(sub, cfg, args.budget)
        back = mms.mms_to_assignment(gadget, sub)
        satisfied = formula.satisfied_by(back)
        lines += [
            f"assignment {_fmt_asg(asg)}",
            f"constructed_motivating {str(motivating).lower()}",
            f"constructed_minimal {str(minimal).lower()}",
            f"roundtrip {_fmt_asg(back)} satisfying {str(satisfied).lower()}",
        ]
        ok = ok and motivating and minimal and satisfied
    lines.append(f"equivalence {'ok' if ok else 'VIOLATED'}")
    sys.stdout.write("\n".join(lines) + "\n")
    return OK if ok else VIOLATED


def _verify_mtr(args) -> int:
    formula = parse_dimacs(_read(args.cnf))
    gadget = mtr.build_mtr_gadget(formula, args.beta, args.pad_n)
    checks = mtr.relation_checks(gadget.consts)
    lines = [ch.line() for ch in checks]
    ok = all(ch.ok for ch in checks)
    asg = sat_oracle(formula)
    lines.append(f"sat {'SAT' if asg else 'UNSAT'}")
    if asg is None:
        lines.append("forward direction not applicable")
    else:
        rw = mtr.assignment_to_rewards(gadget, asg)
        traj = simulate_with_rewards(gadget.graph, AgentConfig(gadget.consts.beta), rw)
        total = sum(rw.values(), Fraction(0))
        lines.append(f"assignment {_fmt_asg(asg)}")
        lines.append(f"objective {fmt_rational(total)} target {fmt_rational(gadget.consts.target_objective)}")
        lines.append(f"outcome {'reached' if traj.reached else traj.outcome.value + ' ' + traj.stopped_at}")
        leads = mtr.lead_to_checks(gadget, asg, traj)
        lines += [f"lead_to {lt.index} {'ok' if lt.ok else 'FAILED'} {lt.description}" for lt in leads]
        ok = ok and traj.reached and total == gadget.consts.target_objective and all(lt.ok for lt in leads)
    lines.append(f"forward {'ok' if ok else 'VIOLATED'}")
    sys.stdout.write("\n".join(lines) + "\n")
    return OK if ok else VIOLATED


def _verify_bound(args) -> int:
    g = parse_graph(_read(args.graph))
    cfg = AgentConfig(args.beta, args.tie)
    cert = analyze(g, cfg)
    problems = check_certificate(cert, g)
    d = g.dist(g.start)
    lower = certified_lower_bound(cert, g)
    bound = ratio_bound(cert)
    lines = [f"dist {fmt_rational(d)}", f"lower {fmt_rational(lower)}", f"bound {fmt_rational(bound)}"]
    if d > 0:
        ratio = cost_ratio(g, cfg)
        lines.append(f"ratio {fmt_rational(ratio)}")
        if ratio > bound:
            problems.append(f"ratio {ratio} exceeds bound {bound}")
    for i in range(1, cert.n + 2):
        if cert.S[i - 1]:
            witness_from_certificate(cert, g, i)
            lines.append(f"witness F_{len(cert.S[i - 1]) + 1} from S_{i} ok")
    lines += [f"violation {p}" for p in problems]
    lines.append("bound ok" if not problems else "bound VIOLATED")
    sys.stdout.write("\n".join(lines) + "\n")
    return OK if not problems else VIOLATED


def cmd_verify(args) -> int:
    if args.what == "bound":
        return _verify_bound(args)
    if args.which == "mms":
        return _verify_mms(args)
    return _verify_mtr(args)


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tiplan", description="Present-biased planning on task graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate graphs and gadgets")
    gsub = gen.add_subparsers(dest="kind", required=True)
    ak = gsub.add_parser("akerlof")
    ak.add_argument("--k", type=int, required=True)
    ak.add_argument("--beta", type=_rational, required=True)
    ak.add_argument("--base", type=_rational, default=Fraction(1))
    rnd = gsub.add_parser("random")
    rnd.add_argument("--n", type=int, required=True)
    rnd.add_argument("--seed", type=int, default=0)
    rnd.add_argument("--edge-prob", type=_rational, default=Fraction(1, 3))
    rnd.add_argument("--max-cost", type=int, default=4)
    for name in ("mms", "mtr"):
        gp = gsub.add_parser(name)
        gp.add_argument("--cnf", required=True)
        gp.add_argument("--beta", type=_rational, required=True)
        if name == "mtr":
            gp.add_argument("--pad-n", type=int)
    for gp in gsub.choices.values():
        gp.add_argument("--out", help="write the graph here instead of stdout")

    def agent_flags(sp, tie="lex"):
        sp.add_argument("--graph", required=True)
        sp.add_argument("--beta", type=_rational, required=True)
        sp.add_argument("--tie", choices=("lex", "procrastinate"), default=tie)

    sim = sub.add_parser("simulate", help="walk the agent through a graph")
    agent_flags(sim)
    sim.add_argument("--reward", type=_rational, help="goal reward (abandonment model)")
    sim.add_argument("--rewards", help="node reward file (intermediate-reward model)")
    sim.add_argument("--human", action="store_true", help="evaluation tables instead of step lines")

    rat = sub.add_parser("ratio", help="cost ratio and shortcut certificate")
    agent_flags(rat, tie="procrastinate")

    mot = sub.add_parser("motivate", help="search a motivating subgraph")
    agent_flags(mot)
    mot.add_argument("--reward", type=_rational)
    mot.add_argument("--minimal", action="store_true")
    mot.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    rw = sub.add_parser("rewards", help="minimum total reward placement")
    rw.add_argument("--graph", required=True)
    rw.add_argument("--beta", type=_rational, required=True)
    rw.add_argument("--variant", choices=("1", "2", "3"), required=True)
    rw.add_argument("--bound", type=_rational)
    rw.add_argument("--budget", type=int, default=200_000)
    rw.add_argument("--strict", type=_rational, help="require competing paths worse by this margin")

    ver = sub.add_parser("verify", help="end-to-end checks")
    vsub = ver.add_subparsers(dest="what", required=True)
    red = vsub.add_parser("reduction")
    red.add_argument("--cnf", required=True)
    red.add_argument("--beta", type=_rational, required=True)
    red.add_argument("--which", choices=("mms", "mtr"), required=True)
    red.add_argument("--pad-n", type=int)
    red.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    bnd = vsub.add_parser("bound")
    agent_flags(bnd, tie="procrastinate")
    return p


COMMANDS = {
    "gen": cmd_gen,
    "simulate": cmd_simulate,
    "ratio": cmd_ratio,
    "motivate": cmd_motivate,
    "rewards": cmd_rewards,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except PlanningError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return VIOLATED


if __name__ == "__main__":
    sys.exit(main())
