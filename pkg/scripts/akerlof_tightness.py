"""Cost ratio of the procrastination chain against beta^(2-k)."""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from fractions import Fraction

from tiplan.agent import AgentConfig, cost_ratio
from tiplan.graph import as_rational, fmt_rational, gen_akerlof
from tiplan.shortcut import analyze, ratio_bound


@dataclass
class Config:
    betas: list[Fraction] = field(default_factory=lambda: [Fraction(1, 2), Fraction(9, 10)])
    k_max: int = 8


def run(cfg: Config) -> bool:
    ok = True
    print(f"{'beta':>6} {'k':>3} {'ratio':>14} {'beta^(2-k)':>14} {'bound':>14}")
    for beta in cfg.betas:
        for k in range(2, cfg.k_max + 1):
            g = gen_akerlof(k, beta)
            agent = AgentConfig(beta, "procrastinate")
            ratio = cost_ratio(g, agent)
            bound = ratio_bound(analyze(g, agent))
            ok &= ratio == beta ** (2 - k) <= bound
            print(f"{fmt_rational(beta):>6} {k:>3} {fmt_rational(ratio):>14} "
                  f"{fmt_rational(beta ** (2 - k)):>14} {fmt_rational(bound):>14}")
    return ok


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--beta", type=as_rational, action="append")
    p.add_argument("--k-max", type=int, default=8)
    args = p.parse_args()
    cfg = Config(k_max=args.k_max)
    if args.beta:
        cfg.betas = args.beta
    raise SystemExit(0 if run(cfg) else 1)


if __name__ == "__main__":
    main()
