"""Reward gadget: forward direction and constant relations for a DIMACS formula."""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from tiplan.agent import AgentConfig, simulate_with_rewards
from tiplan.graph import as_rational, fmt_rational
from tiplan.reductions import mtr
from tiplan.reductions.cnf import Formula3CNF, parse_dimacs, sat_oracle

EXAMPLE = Formula3CNF.from_ints(4, [[1, -2, 3], [2, -3, 4]])


@dataclass
class Config:
    beta: Fraction = Fraction(1, 2)
    pad_n: int | None = 5


def run(f: Formula3CNF, cfg: Config) -> bool:
    gadget = mtr.build_mtr_gadget(f, cfg.beta, cfg.pad_n)
    checks = mtr.relation_checks(gadget.consts)
    for ch in checks:
        print(ch.line())
    asg = sat_oracle(f)
    if asg is None:
        print("formula is unsatisfiable; forward direction not applicable")
        return all(ch.ok for ch in checks)
    rw = mtr.assignment_to_rewards(gadget, asg)
    traj = simulate_with_rewards(gadget.graph, AgentConfig(cfg.beta), rw)
    leads = mtr.lead_to_checks(gadget, asg, traj)
    for lt in leads:
        print(f"lead_to {lt.index} {'ok' if lt.ok else 'FAILED'} {lt.description}")
    total = sum(rw.values(), Fraction(0))
    print(f"nodes {len(gadget.graph.nodes)}, objective {fmt_rational(total)}, "
          f"target {fmt_rational(gadget.consts.target_objective)}, reached {traj.reached}")
    return (all(ch.ok for ch in checks) and all(lt.ok for lt in leads) and traj.reached
            and total == gadget.consts.target_objective)


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--cnf", type=Path, help="DIMACS file (default: a small 4-variable example)")
    p.add_argument("--beta", type=as_rational, default=Fraction(1, 2))
    p.add_argument("--pad-n", type=int, default=5)
    args = p.parse_args()
    f = parse_dimacs(args.cnf.read_text()) if args.cnf else EXAMPLE
    raise SystemExit(0 if run(f, Config(args.beta, args.pad_n)) else 1)


if __name__ == "__main__":
    main()
