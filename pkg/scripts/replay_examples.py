"""Replay every scripted example and print a one-line verdict per example.

    python3 scripts/replay_examples.py [--seed N] [--verbose]
"""

import argparse
import sys
from dataclasses import dataclass

from nilrad import scenarios


@dataclass
class ReplayConfig:
    seed: int = 0
    verbose: bool = False


def main(cfg: ReplayConfig) -> int:
    failed = 0
    for name in sorted(scenarios.SCENARIOS):
        report = scenarios.run(name, seed=cfg.seed)
        if cfg.verbose:
            print(report.text(), end="")
        passed = sum(ok for _, ok in report.checks)
        print(f"{name:<22} {'PASS' if report.passed else 'FAIL'}  {passed}/{len(report.checks)} checks")
        failed += not report.passed
    return 1 if failed else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verbose", action="store_true")
    sys.exit(main(ReplayConfig(**vars(p.parse_args()))))
