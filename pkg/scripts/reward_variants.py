"""Minimum total reward under the three placement rules, with the lattice search as a check."""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from fractions import Fraction

from tiplan.graph import as_rational, fmt_rational
from tiplan.instances import catalogue
from tiplan.rewards import MtrInstance, Variant, grid_oracle, solve_exact


@dataclass
class Config:
    delta: Fraction = Fraction(1, 8)
    grid: bool = True


def run(cfg: Config) -> int:
    bad = 0
    print(f"{'graph':<16} {'beta':>5} {'I':>7} {'II':>7} {'III':>7}  grid")
    for g, beta in catalogue():
        vals, grids = {}, []
        for v in Variant:
            inst = MtrInstance(g, beta, v)
            vals[v] = solve_exact(inst).objective
            if cfg.grid:
                slack = len(g.nodes) * cfg.delta
                got = grid_oracle(inst, cfg.delta, vals[v] + slack)
                grids.append(got is not None and vals[v] <= got <= vals[v] + slack)
        ordered = vals[Variant.III] <= vals[Variant.I] <= vals[Variant.II]
        bad += not ordered or not all(grids)
        print(f"{g.name:<16} {fmt_rational(beta):>5} "
              + " ".join(f"{fmt_rational(vals[v]):>7}" for v in Variant)
              + ("  ok" if all(grids) else "  MISMATCH") * cfg.grid)
    return bad


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--delta", type=as_rational, default=Fraction(1, 8))
    p.add_argument("--no-grid", action="store_true")
    args = p.parse_args()
    raise SystemExit(1 if run(Config(args.delta, not args.no_grid)) else 0)


if __name__ == "__main__":
    main()
