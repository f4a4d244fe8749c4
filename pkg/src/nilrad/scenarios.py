"""Scripted worked examples replayed by ``nilrad example <name>``.

Each scenario writes its algebraic steps to a ``Report`` and records named checks.  Random choices
come from ``random.Random(seed)`` so that repeated runs print identical bytes.
"""

from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass, field
from typing import Callable

from . import expr as ex
from .errors import DomainError
from .fermat import FermatReal, fmt_num
from .lift import derive, infinitesimal_integral, lift_eval, mixed_partial
from .oracle import fd_mixed, quadrature

D1 = FermatReal.witness(1)
D2 = FermatReal.witness(2)


@dataclass
class Report:
    name: str
    lines: list[str] = field(default_factory=list)
    checks: list[tuple[str, bool]] = field(default_factory=list)

    def step(self, text: str) -> None:
        self.lines.append("  " + text)

    def check(self, label: str, ok: bool) -> bool:
        self.checks.append((label, bool(ok)))
        self.lines.append(f"  [{'PASS' if ok else 'FAIL'}] {label}")
        return ok

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(ok for _, ok in self.checks)

    def text(self) -> str:
        head = f"example {self.name}"
        tail = f"example {self.name}: {'PASS' if self.passed else 'FAIL'}"
        return "\n".join([head, *self.lines, tail]) + "\n"


def seed_from_env() -> int:
    return int(os.environ.get("NILRAD_SEED", "0"))


def _dyadic(rng: random.Random, lo: int, hi: int, den: int = 8) -> float:
    return rng.randint(lo * den, hi * den) / den


def _vec(xs) -> str:
    return "(" + ", ".join(fmt_num(x, 6) for x in xs) + ")"


def dipole(report: Report, rng: random.Random) -> None:
    r2 = ex.parse("((rx + dx/2)^2 + (ry + dy/2)^2 + (rz + dz/2)^2)^(-0.5)")
    r1 = ex.parse("((rx - dx/2)^2 + (ry - dy/2)^2 + (rz - dz/2)^2)^(-0.5)")
    report.step("d = |t| (a first order infinitesimal), dipole vector d⃗ = d·û, observer at r⃗ with r finite")
    for trial in range(3):
        axis = rng.randrange(3)
        r = [0.0, 0.0, 0.0]
        r[axis] = rng.choice([0.5, 2.0, 4.0]) * rng.choice([-1.0, 1.0])
        direction = [_dyadic(rng, -2, 2) for _ in range(3)]
        d = [D1 * c for c in direction]
        env = {"rx": r[0], "ry": r[1], "rz": r[2], "dx": d[0], "dy": d[1], "dz": d[2]}
        norm = math.sqrt(sum(c * c for c in r))
        rd = sum((d_i * r_i for d_i, r_i in zip(d, r)), FermatReal(0))
        dd = sum((d_i * d_i for d_i in d), FermatReal(0))
        report.step(f"trial {trial}: r⃗ = {_vec(r)}, û = {_vec(direction)}, r⃗·d⃗ = {rd}")
        report.check(f"trial {trial}: d⃗·d⃗ = 0", dd.is_zero())
        inv_r2 = lift_eval(r2, env)
        inv_r1 = lift_eval(r1, env)
        factor = rd / (2 * norm * norm)
        report.step(f"1/r₂ = {inv_r2}")
        report.check(f"trial {trial}: 1/r₂ = r⁻¹(1 − r⃗·d⃗/(2r²))", inv_r2 == (1 - factor) / norm)
        report.check(f"trial {trial}: 1/r₁ = r⁻¹(1 + r⃗·d⃗/(2r²))", inv_r1 == (1 + factor) / norm)
        potential = inv_r1 - inv_r2
        report.step(f"1/r₁ − 1/r₂ = {potential}")
        report.check(f"trial {trial}: 1/r₁ − 1/r₂ = (r⃗·d⃗)/r³", potential == rd / norm ** 3)


def curvature(report: Report, rng: random.Random) -> None:
    r = 0.5
    c = rng.choice([0.5, 1.0, 2.0, 4.0])
    g0 = [_dyadic(rng, -2, 2) for _ in range(3)]
    w = [_dyadic(rng, -1, 1) for _ in range(3)]
    tangent, normal = (1.0, 0.0, 0.0), (0.0, 1.0, 0.0)
    comps = [ex.parse(f"{g0[i]!r} + (s - {r!r})*{tangent[i]!r} + (s - {r!r})^2/2*{c * normal[i]!r}"
                      f" + (s - {r!r})^3*{w[i]!r}") for i in range(3)]
    report.step(f"γ(s) = γ_r + (s−r)t⃗ + (s−r)²/2·c·n⃗ + (s−r)³w⃗ with r = {r}, c = {fmt_num(c, 6)}, "
                f"γ_r = {_vec(g0)}, w⃗ = {_vec(w)}")
    h = D2
    report.step("h = |t|^(1/2) ∈ D₂")
    at = {"s": FermatReal(r) + h}
    lifted = [lift_eval(e, at) for e in comps]
    taylor = []
    for e in comps:
        d1 = ex.eval_real(ex.differentiate(e, "s"), {"s": r})
        d2 = ex.eval_real(ex.differentiate(ex.differentiate(e, "s"), "s"), {"s": r})
        taylor.append(ex.eval_real(e, {"s": r}) + h * d1 + (h * h) * (d2 / 2))
    for i, (a, b) in enumerate(zip(lifted, taylor)):
        report.step(f"γ_{i + 1}(r+h) = {a}")
    report.check("γ(r+h) = γ_r + h·γ'_r + h²/2·γ''_r", lifted == taylor)
    sin_ch = lift_eval(ex.parse("sin(c*h)"), {"c": c, "h": h})
    cos_ch = lift_eval(ex.parse("cos(c*h)"), {"c": c, "h": h})
    report.step(f"sin(ch) = {sin_ch},  cos(ch) = {cos_ch}")
    report.check("sin(ch) = ch", sin_ch == h * c)
    report.check("cos(ch) = 1 − c²h²/2", cos_ch == 1 - (h * h) * (c * c) / 2)
    circle = [g0[i] + normal[i] / c + (sin_ch * tangent[i] - cos_ch * normal[i]) / c for i in range(3)]
    report.check("γ(r+h) = γ_r + n⃗/c + (sin(ch)t⃗ − cos(ch)n⃗)/c", circle == lifted)


def schwarz(report: Report, rng: random.Random) -> None:
    report.step("k = |t|^(1/2) ∈ D₂, h = j = |t|^(1/4), jkh = |t| ≠ 0")
    for text in ("sin(x)*cos(y)", "exp(x*y)", "x^2*y^3 + atan(x*y)"):
        e = ex.parse(text)
        for _ in range(2):
            x0 = [_dyadic(rng, -1, 1), _dyadic(rng, -1, 1)]
            u = [_dyadic(rng, -1, 1), _dyadic(rng, -1, 1)]
            v = [_dyadic(rng, -1, 1), _dyadic(rng, -1, 1)]
            uv = mixed_partial(e, u, v, x0, ("x", "y"))
            vu = mixed_partial(e, v, u, x0, ("x", "y"))
            fd = fd_mixed(e, ("x", "y"), u, v, x0)
            report.step(f"f = {text}, x = {_vec(x0)}, u = {_vec(u)}, v = {_vec(v)}: "
                        f"∂u∂v f = {fmt_num(uv, 6)}, ∂v∂u f = {fmt_num(vu, 6)}, stencil {fmt_num(fd, 6)}")
            report.check(f"{text} at {_vec(x0)}: ∂u∂v f = ∂v∂u f", uv == vu)
            report.check(f"{text} at {_vec(x0)}: agrees with cross stencil", abs(uv - fd) <= 1e-4 * max(1.0, abs(fd)))


def ode_roots(report: Report, rng: random.Random) -> None:
    r1 = _dyadic(rng, -2, 2, 4)
    r3 = r1 + rng.choice([-1.5, 1.0, 2.5])
    a2, a1, a0 = -(2 * r1 + r3), r1 * r1 + 2 * r1 * r3, -r1 * r1 * r3
    report.step(f"L(y) = y''' + ({fmt_num(a2, 6)})y'' + ({fmt_num(a1, 6)})y' + ({fmt_num(a0, 6)})y, "
                f"characteristic (r − {fmt_num(r1, 6)})²(r − {fmt_num(r3, 6)})")
    h = D1
    r = FermatReal(r1) + h
    square = lift_eval(ex.parse("(r - r1)^2"), {"r": r, "r1": r1})
    report.check("(r − r₁)² = 0 for r = r₁ + h, h ∈ D", square.is_zero())
    charpoly = lift_eval(ex.parse("(r - r1)^2*(r - r3)"), {"r": r, "r1": r1, "r3": r3})
    report.check("p(r₁ + h) = 0, so e^{(r₁+h)t} solves L(y) = 0", charpoly.is_zero())
    growth = ex.parse("exp(r*t)")
    for _ in range(4):
        t0 = _dyadic(rng, -2, 2, 4)
        lifted = lift_eval(growth, {"r": r, "t": t0})
        base = math.exp(r1 * t0)
        report.step(f"t = {fmt_num(t0, 6)}: e^((r₁+h)t) = {lifted}")
        report.check(f"t = {fmt_num(t0, 6)}: e^((r₁+h)t) = e^(r₁t) + h·t·e^(r₁t)",
                     lifted == base + h * (t0 * base))
    y = ex.parse(f"t*exp({r1!r}*t)")
    d1 = ex.differentiate(y, "t")
    d2 = ex.differentiate(d1, "t")
    d3 = ex.differentiate(d2, "t")
    for _ in range(3):
        t0 = _dyadic(rng, -2, 2, 4)
        vals = [ex.eval_real(e, {"t": t0}) for e in (d3, d2, d1, y)]
        residual = vals[0] + a2 * vals[1] + a1 * vals[2] + a0 * vals[3]
        scale = max(1.0, *(abs(c * v) for c, v in zip((1, a2, a1, a0), vals)))
        report.step(f"L[t·e^(r₁t)] at t = {fmt_num(t0, 6)}: residual {abs(residual) / scale:.1e} (relative)")
        report.check(f"L[t·e^(r₁t)](t = {fmt_num(t0, 6)}) = 0", abs(residual) <= 1e-9 * scale)


def newtonian_limit(report: Report, rng: random.Random) -> None:
    v = D2
    report.step(f"v = |t|^(1/2) ∈ D₂: v² = {v * v}, v³ = {v * v * v}")
    gamma = ex.parse("1/sqrt(1 - v^2/c^2)")
    for c in (1.0, 2.0, rng.choice([4.0, 8.0])):
        value = lift_eval(gamma, {"v": v, "c": c})
        report.step(f"c = {fmt_num(c, 6)}: 1/√(1 − v²/c²) = {value}")
        report.check(f"c = {fmt_num(c, 6)}: 1/√(1 − v²/c²) = 1 + v²/(2c²)", value == 1 + (v * v) / (2 * c * c))
    h44 = D1 * rng.choice([0.25, 0.5, 1.0])
    metric = lift_eval(ex.parse("sqrt(1 - h44)"), {"h44": h44})
    report.step(f"h₄₄ = {h44} ∈ D: √(1 − h₄₄) = {metric}")
    report.check("√(1 − h₄₄) = 1 − h₄₄/2", metric == 1 - h44 / 2)
    try:
        lift_eval(ex.parse("sqrt(h)"), {"h": D1})
        rejected = False
    except DomainError:
        rejected = True
    report.check("√h is rejected for h ∈ D (standard part not strictly positive)", rejected)


def diff_under_integral(report: Report, rng: random.Random) -> None:
    f = ex.parse("exp(-x*t)*cos(t)")
    alpha = ex.parse("x^2")
    beta = ex.parse("sin(x) + 2")
    x0 = rng.choice([0.25, 0.5, 0.75])
    report.step(f"F(x) = ∫ from α(x) = {alpha} to β(x) = {beta} of f(x,t) = {f} dt, at x = {x0}")
    a0, b0 = ex.eval_real(alpha, {"x": x0}), ex.eval_real(beta, {"x": x0})
    da = derive(alpha, "x", x0, 1).coeffs[1]
    db = derive(beta, "x", x0, 1).coeffs[1]
    h = D1
    report.step(f"β(x+h) = {FermatReal(b0) + h * db},  α(x+h) = {FermatReal(a0) + h * da}")
    # f(x+h, t) - f(x, t) = h ∂f/∂x(x, t) for each t, integrated over the fixed interval
    dfdx = ex.differentiate(f, "x")
    interior = quadrature(dfdx, "t", a0, b0, {"x": x0})
    upper = infinitesimal_integral(f, "t", b0, h * db, {"x": x0})
    lower = infinitesimal_integral(f, "t", a0, h * da, {"x": x0})
    increment = h * interior + upper - lower
    slope = increment.coefficient(1)
    report.step(f"∫_β^(β+hβ') f dt = {upper},  ∫_α^(α+hα') f dt = {lower}")
    report.step(f"F(x+h) − F(x) = {increment}")

    def big_f(x):
        return quadrature(f, "t", ex.eval_real(alpha, {"x": x}), ex.eval_real(beta, {"x": x}), {"x": x})

    s = 1e-3
    coarse = (big_f(x0 + s) - big_f(x0 - s)) / (2 * s)
    fine = (big_f(x0 + s / 2) - big_f(x0 - s / 2)) / s
    reference = (4 * fine - coarse) / 3
    report.step(f"F'(x) from the increment: {fmt_num(slope, 6)},  finite differences: {fmt_num(reference, 6)}")
    report.check("F'(x) = ∫ ∂f/∂x dt + β'·f(x,β) − α'·f(x,α)",
                 abs(slope - reference) <= 1e-6 * max(1.0, abs(reference)))
    report.check("F(x+h) − F(x) ∈ D", increment.std == 0 and all(q == 1 for q, _ in increment.terms))


SCENARIOS: dict[str, Callable[[Report, random.Random], None]] = {
    "dipole": dipole,
    "curvature": curvature,
    "schwarz": schwarz,
    "ode-roots": ode_roots,
    "newtonian-limit": newtonian_limit,
    "diff-under-integral": diff_under_integral,
}


def run(name: str, seed: int | None = None) -> Report:
    if name not in SCENARIOS:
        raise KeyError(name)
    report = Report(name)
    SCENARIOS[name](report, random.Random(seed_from_env() if seed is None else seed))
    return report
