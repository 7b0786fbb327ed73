"""Satisfiability against motivating-subgraph existence on the gadget, over a formula family."""

from __future__ import annotations

import argparse
import random
import time
from dataclasses import dataclass
from fractions import Fraction

from tiplan.graph import as_rational
from tiplan.motivating import check_minimality, find_motivating_subgraph, is_motivating
from tiplan.reductions import mms
from tiplan.reductions.cnf import formula_family, random_formula, sat_oracle


@dataclass
class Config:
    beta: Fraction = Fraction(9, 10)
    max_vars: int = 3
    max_clauses: int = 2
    n_random: int = 50
    seed: int = 0
    budget: int = 1_000_000


def run(cfg: Config) -> int:
    rng = random.Random(cfg.seed)
    formulas = formula_family(cfg.max_vars, cfg.max_clauses)
    formulas += [random_formula(4, 3, rng) for _ in range(cfg.n_random)]
    bad = 0
    t0 = time.perf_counter()
    for f in formulas:
        gadget = mms.build_mms_gadget(f, cfg.beta)
        asg = sat_oracle(f)
        res = find_motivating_subgraph(gadget.graph, gadget.cfg(), cfg.budget)
        ok = (asg is not None) == res.found
        if ok and asg is not None:
            sub = mms.assignment_to_mms(gadget, asg)
            ok = is_motivating(sub, gadget.cfg()) and check_minimality(sub, gadget.cfg(), cfg.budget)
            ok = ok and f.satisfied_by(mms.mms_to_assignment(gadget, sub))
        if not ok:
            bad += 1
            print(f"MISMATCH {f}")
    print(f"formulas {len(formulas)}, mismatches {bad}, {time.perf_counter() - t0:.1f}s")
    return bad


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--beta", type=as_rational, default=Fraction(9, 10))
    p.add_argument("--max-vars", type=int, default=3)
    p.add_argument("--max-clauses", type=int, default=2)
    p.add_argument("--random", type=int, default=50, dest="n_random")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    cfg = Config(args.beta, args.max_vars, args.max_clauses, args.n_random, args.seed)
    raise SystemExit(1 if run(cfg) else 0)


if __name__ == "__main__":
    main()
