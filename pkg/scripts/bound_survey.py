"""Survey random DAGs: walked cost against the certified lower bound and the ratio bound."""

from __future__ import annotations

import argparse
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from tiplan.agent import AgentConfig
from tiplan.graph import gen_random_dag
from tiplan.shortcut import analyze, certified_lower_bound, check_certificate, ratio_bound, witness_from_certificate

BETAS = (Fraction(1, 3), Fraction(1, 2), Fraction(3, 4))


@dataclass
class Config:
    seeds: int = 1000
    n: int = 10
    tie: str = "procrastinate"


def run(cfg: Config) -> int:
    max_s = Counter()
    violations = 0
    tightest = Fraction(0)
    for seed in range(cfg.seeds):
        g = gen_random_dag(cfg.n, seed=seed)
        beta = BETAS[seed % len(BETAS)]
        cert = analyze(g, AgentConfig(beta, cfg.tie))
        max_s[cert.max_s] += 1
        problems = check_certificate(cert, g)
        d = g.dist(g.start)
        if d < certified_lower_bound(cert, g):
            problems.append("lower bound")
        if d > 0:
            used = (g.path_cost(cert.path) / d) / ratio_bound(cert)
            tightest = max(tightest, used)
            if used > 1:
                problems.append("ratio bound")
        for i, s in enumerate(cert.S, 1):
            if s:
                witness_from_certificate(cert, g, i)
        if problems:
            violations += 1
            print(f"seed {seed}: {problems}")
    print(f"graphs {cfg.seeds}, violations {violations}")
    print("max |S_i| histogram: " + ", ".join(f"{k}:{v}" for k, v in sorted(max_s.items())))
    print(f"largest ratio / bound: {float(tightest):.4f}")
    return violations


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seeds", type=int, default=1000)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--tie", choices=("lex", "procrastinate"), default="procrastinate")
    args = p.parse_args()
    raise SystemExit(1 if run(Config(args.seeds, args.n, args.tie)) else 0)


if __name__ == "__main__":
    main()
