"""Error of the first-order integral h*f(x) against quadrature as the infinitesimal shrinks.

For h = c*t the gap should scale like t^2; the fitted log-log slope is printed per case.
"""

import math
import statistics
from dataclasses import dataclass, field

from nilrad.expr import parse
from nilrad.fermat import FermatReal
from nilrad.lift import infinitesimal_integral
from nilrad.oracle import quadrature, representative


@dataclass
class ScalingConfig:
    ts: tuple[float, ...] = (1e-2, 1e-3, 1e-4)
    cases: list[tuple[str, float, float]] = field(default_factory=lambda: [
        ("exp(s)", 1.0, 2.0), ("cos(s)", 0.5, 1.0), ("log(s)", 2.0, 0.5), ("s^3", 1.5, 1.0),
        ("atan(s)", -0.4, 3.0), ("sqrt(s)", 1.0, 1.0), ("exp(-s^2)", 0.6, 1.0)])


def main(cfg: ScalingConfig) -> None:
    print(f"{'f':<12} {'x':>5} {'c':>5} " + " ".join(f"{'t=' + format(t, 'g'):>11}" for t in cfg.ts)
          + f" {'slope':>7}")
    for text, x, c in cfg.cases:
        e = parse(text)
        approx = infinitesimal_integral(e, "s", x, FermatReal.monomial(1, c))
        errs = [abs(quadrature(e, "s", x, x + c * t) - float(representative(approx, t))) for t in cfg.ts]
        slope = statistics.linear_regression([math.log(t) for t in cfg.ts], [math.log(v) for v in errs]).slope
        print(f"{text:<12} {x:5g} {c:5g} " + " ".join(f"{v:11.3e}" for v in errs) + f" {slope:7.3f}")


if __name__ == "__main__":
    main(ScalingConfig())
