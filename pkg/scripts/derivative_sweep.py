"""Compare coefficient extraction against finite differences across the univariate corpus.

Prints, per function, the worst relative gap of the first-order coefficient against a Richardson
stencil and of the order-k jet against symbolic derivatives.

    python3 scripts/derivative_sweep.py [--points 50] [--order 4] [--seed 0]
"""

import argparse
import math
import random
from dataclasses import dataclass

from nilrad import corpus
from nilrad.expr import differentiate, eval_real, parse
from nilrad.lift import derive
from nilrad.oracle import StencilConfig, fd_derivative


@dataclass
class SweepConfig:
    points: int = 50
    order: int = 4
    seed: int = 0
    step: float = 1e-4


def rel_gap(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1.0)


def sweep(cfg: SweepConfig) -> list[tuple[str, float, float]]:
    rng = random.Random(cfg.seed)
    stencil = StencilConfig(cfg.step, "central-2nd")
    rows = []
    for text, lo, hi in corpus.UNIVARIATE:
        e = parse(text)
        tower = [e]
        for _ in range(cfg.order):
            tower.append(differentiate(tower[-1], "x"))
        fd_worst = sym_worst = 0.0
        for _ in range(cfg.points):
            x0 = rng.uniform(lo, hi)
            c1 = derive(e, "x", x0, 1).coeffs[1]
            fd_worst = max(fd_worst, rel_gap(c1, fd_derivative(e, "x", x0, 1, stencil)))
            jet = derive(e, "x", x0, cfg.order)
            for i, c in enumerate(jet.coeffs):
                sym_worst = max(sym_worst, rel_gap(c, eval_real(tower[i], {"x": x0}) / math.factorial(i)))
        rows.append((text, fd_worst, sym_worst))
    return rows


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    cfg = SweepConfig(**vars(p.parse_args()))
    print(f"{'function':<24} {'vs stencil':>12} {'vs symbolic':>12}")
    for text, a, b in sweep(cfg):
        print(f"{text:<24} {a:12.2e} {b:12.2e}")
