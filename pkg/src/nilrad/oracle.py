"""Independent numerical references: finite differences, adaptive Simpson, brute-force truncation.

Nothing here imports the lifting layer, so tests that compare against these cannot be circular.
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass
from typing import Mapping, Sequence

import mpmath

from .errors import DomainError
from .expr import Expr, eval_real
from .fermat import FermatReal
from .weil import WeilAlgebra, WeilElement

SCHEMES = ("central-1st", "central-2nd", "cross-mixed")

# step sizes balancing truncation against cancellation for each derivative order
DEFAULT_STEPS = {1: 1e-5, 2: 1e-4, 3: 1e-3, 4: 1e-2}


@dataclass(frozen=True)
class StencilConfig:
    """``central-1st``: plain central stencil, error O(step^2).
    ``central-2nd``: one Richardson extrapolation on top, error O(step^4).
    ``cross-mixed``: four-point stencil for mixed second partials."""

    step: float = 1e-4
    scheme: str = "central-1st"

    def __post_init__(self):
        if not 1e-8 <= self.step <= 1e-2:
            raise ValueError(f"step {self.step} outside [1e-8, 1e-2]")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")


def _central(f, x0: float, order: int, step: float) -> float:
    # points x0 + (order/2 - i)*step with binomial weights
    total = math.fsum((-1) ** i * math.comb(order, i) * f(x0 + (order / 2 - i) * step)
                      for i in range(order + 1))
    return total / step ** order


def fd_derivative(e: Expr, var: str, x0: float, order: int = 1, cfg: StencilConfig | None = None,
                  env: Mapping[str, float] | None = None) -> float:
    if not 1 <= order <= 4:
        raise ValueError("order must be between 1 and 4")
    cfg = cfg or StencilConfig(DEFAULT_STEPS[order])
    if cfg.scheme == "cross-mixed":
        raise ValueError("cross-mixed is for fd_mixed")
    point = dict(env or {})

    def f(x):
        point[var] = x
        return eval_real(e, point)

    coarse = _central(f, x0, order, cfg.step)
    if cfg.scheme == "central-1st":
        return coarse
    fine = _central(f, x0, order, cfg.step / 2)
    return (4 * fine - coarse) / 3


def fd_mixed(e: Expr, names: Sequence[str], u: Sequence[float], v: Sequence[float],
             x0: Sequence[float], cfg: StencilConfig | None = None) -> float:
    """Cross stencil for the second directional derivative d_u d_v f(x0)."""
    cfg = cfg or StencilConfig(1e-4, "cross-mixed")
    s = cfg.step

    def f(a, b):
        return eval_real(e, {n: x + a * s * ui + b * s * vi
                             for n, x, ui, vi in zip(names, x0, u, v)})

    return (f(1, 1) - f(1, -1) - f(-1, 1) + f(-1, -1)) / (4 * s * s)


def quadrature(e: Expr, var: str, a: float, b: float, env: Mapping[str, float] | None = None,
               tol: float = 1e-10, max_depth: int = 50) -> float:
    """Adaptive Simpson integral of ``e`` over [a, b] to absolute tolerance ``tol``."""
    point = dict(env or {})

    def f(x):
        point[var] = x
        return eval_real(e, point)

    if a == b:
        return 0.0

    def simpson(lo, hi, flo, fmid, fhi):
        return (hi - lo) / 6 * (flo + 4 * fmid + fhi)

    def recurse(lo, hi, flo, fmid, fhi, whole, eps, depth):
        mid = (lo + hi) / 2
        lm, rm = (lo + mid) / 2, (mid + hi) / 2
        flm, frm = f(lm), f(rm)
        left = simpson(lo, mid, flo, flm, fmid)
        right = simpson(mid, hi, fmid, frm, fhi)
        delta = left + right - whole
        if depth <= 0:
            raise DomainError("adaptive Simpson did not converge")
        if abs(delta) <= 15 * eps:
            return left + right + delta / 15
        return (recurse(lo, mid, flo, flm, fmid, left, eps / 2, depth - 1)
                + recurse(mid, hi, fmid, frm, fhi, right, eps / 2, depth - 1))

    fa, fb, fm = f(a), f(b), f((a + b) / 2)
    return recurse(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, max_depth)


def brute_truncate(algebra: WeilAlgebra, poly: Mapping[tuple[int, ...], float]) -> WeilElement:
    """Reduce a full polynomial modulo the monomial ideal by direct comparison with every alpha."""
    std = 0
    kept = {}
    for beta, c in poly.items():
        beta = tuple(beta)
        if not any(beta):
            std += c
            continue
        killed = all(any(b > a for b, a in zip(beta, alpha)) for alpha in algebra.alphas)
        if not killed and c != 0:
            kept[beta] = kept.get(beta, 0) + c
    return algebra.element(std, kept)


def poly_mul(p: Mapping[tuple[int, ...], float], q: Mapping[tuple[int, ...], float]) -> dict:
    """Plain polynomial product with no truncation."""
    out: dict[tuple[int, ...], list] = {}
    for a, c in p.items():
        for b, d in q.items():
            out.setdefault(tuple(x + y for x, y in zip(a, b)), []).append(c * d)
    return {m: math.fsum(v) for m, v in out.items()}


def as_poly(x: WeilElement) -> dict:
    poly = dict(x.coeffs)
    poly[(0,) * x.algebra.n] = x.std
    return poly


def _mpf(c):
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    return mpmath.mpf(c)


def representative(x: FermatReal, t, dps: int = 60):
    """Value of std + sum(c |t|^q) at t, evaluated in high precision."""
    with mpmath.workdps(dps):
        s = abs(mpmath.mpf(t))
        total = _mpf(x.std)
        for q, c in x.terms:
            total += _mpf(c) * s ** (mpmath.mpf(q.numerator) / q.denominator)
        return total
