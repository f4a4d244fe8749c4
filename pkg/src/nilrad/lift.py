"""Extension of smooth expressions to nilpotent arguments, and derivatives read off as coefficients.

An elementary function g at a + n (a real, n nilpotent with index N) is replaced by the finite sum
sum_{m<N} g^(m)(a)/m! * n^m.  Nothing is approximated: every term of order N and above is
exactly zero in the ring.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from . import expr as ex
from .errors import AlgebraMismatch, DomainError, NotFirstOrder, RatioUndefined, UnboundVariable
from .expr import Expr
from .fermat import FermatReal, fmt_json, ideal_membership, try_ratio
from .weil import WeilAlgebra, WeilElement

_U = "_u"


@lru_cache(maxsize=None)
def derivative_tower(kind: str, exponent: float | None, m: int) -> Expr:
    """m-th derivative of an elementary function as an expression in the variable ``_u``."""
    if m == 0:
        u = ex.Var(_U)
        return ex.Pow(u, exponent) if kind == "pow" else ex.Func(kind, u)
    return ex.differentiate(derivative_tower(kind, exponent, m - 1), _U)


def _apply(x, kind: str, exponent: float | None, const: Callable):
    a = float(x.std)
    if kind in ("log", "sqrt", "pow") and not a > 0:
        raise DomainError(f"{'power' if kind == 'pow' else kind} needs a strictly positive "
                          f"standard part, got {a!r}")
    n = x.infinitesimal_part()
    result = const(ex.eval_real(derivative_tower(kind, exponent, 0), {_U: a}))
    power = None
    for m in range(1, n.nilpotency_index()):
        power = n if power is None else power * n
        c = ex.eval_real(derivative_tower(kind, exponent, m), {_U: a}) / math.factorial(m)
        result = result + power * c
    return result


def _lift(e: Expr, env: Mapping, const: Callable):
    if isinstance(e, ex.Const):
        return const(e.value)
    if isinstance(e, ex.Var):
        try:
            return env[e.name]
        except KeyError:
            raise UnboundVariable(e.name) from None
    if isinstance(e, ex.Add):
        return _lift(e.left, env, const) + _lift(e.right, env, const)
    if isinstance(e, ex.Sub):
        return _lift(e.left, env, const) - _lift(e.right, env, const)
    if isinstance(e, ex.Mul):
        return _lift(e.left, env, const) * _lift(e.right, env, const)
    if isinstance(e, ex.Div):
        return _lift(e.left, env, const) / _lift(e.right, env, const)
    if isinstance(e, ex.Neg):
        return -_lift(e.arg, env, const)
    if isinstance(e, ex.Pow):
        base = _lift(e.base, env, const)
        if e.exponent.is_integer():
            return base ** int(e.exponent)
        return _apply(base, "pow", e.exponent, const)
    if isinstance(e, ex.Func):
        return _apply(_lift(e.arg, env, const), e.name, None, const)
    raise TypeError(e)


def lift_eval(e: Expr, env: Mapping[str, FermatReal | float]) -> FermatReal:
    values = {name: FermatReal.coerce(v) for name, v in env.items()}
    return _lift(e, values, FermatReal)


def lift_eval_weil(e: Expr, env: Mapping[str, WeilElement | float],
                   algebra: WeilAlgebra | None = None) -> WeilElement:
    for v in env.values():
        if isinstance(v, WeilElement):
            if algebra is not None and v.algebra != algebra:
                raise AlgebraMismatch("environment mixes elements of different algebras")
            algebra = v.algebra
    if algebra is None:
        raise ValueError("no Weil algebra given and none inferable from the environment")
    values = {name: v if isinstance(v, WeilElement) else algebra.const(v) for name, v in env.items()}
    return _lift(e, values, algebra.const)


def evaluate(e: Expr, env: Mapping) -> FermatReal | WeilElement:
    """Lift into whichever value universe the variables of ``e`` live in."""
    used = {name: env[name] for name in ex.free_vars(e) if name in env}
    weil = [v for v in used.values() if isinstance(v, WeilElement)]
    if weil:
        if any(isinstance(v, FermatReal) and not v.is_real() for v in used.values()):
            raise AlgebraMismatch("cannot mix Fermat reals and Weil algebra elements")
        return lift_eval_weil(e, {k: v.std if isinstance(v, FermatReal) else v
                                  for k, v in used.items()})
    return lift_eval(e, used)


@dataclass(frozen=True)
class TaylorJet:
    x0: float
    k: int
    coeffs: tuple[float, ...]

    def derivatives(self) -> tuple[float, ...]:
        return tuple(c * math.factorial(i) for i, c in enumerate(self.coeffs))

    def to_json(self) -> str:
        return (f'{{"x0": {fmt_json(self.x0)}, "k": {self.k}, "coeffs": ['
                + ", ".join(fmt_json(c) for c in self.coeffs) + "]}")


def derive(e: Expr, var: str, x0: float, k: int, env: Mapping[str, float] | None = None) -> TaylorJet:
    """Coefficients f^(i)(x0)/i!, i <= k, read from f(x0 + h) with h = |t|^(1/k) in D_k."""
    if k < 1:
        raise ValueError("order must be at least 1")
    values = dict(env or {})
    values[var] = FermatReal(float(x0)) + FermatReal.witness(k)
    y = lift_eval(e, values)
    coeffs = [float(y.std)] + [float(y.coefficient(Fraction(i, k))) for i in range(1, k + 1)]
    return TaylorJet(float(x0), k, tuple(coeffs))


@lru_cache(maxsize=None)
def partial_derivative(e: Expr, names: tuple[str, ...], orders: tuple[int, ...]) -> Expr:
    """The mixed partial of ``e`` with ``orders[i]`` derivatives in ``names[i]``."""
    for i, m in enumerate(orders):
        if m:
            lower = orders[:i] + (m - 1,) + orders[i + 1:]
            return ex.differentiate(partial_derivative(e, names, lower), names[i])
    return e


def taylor_lift(e: Expr, base: Mapping[str, float], increments: Mapping[str, FermatReal],
                exact: bool = False) -> FermatReal:
    """f(a + n) as sum_{|m|<N} d^m f(a)/m! * n^m with symbolic partials.

    ``increments`` must be infinitesimal.  With ``exact`` the real partial values are converted
    to fractions so that the sum is formed without rounding.
    """
    names = tuple(sorted(increments))
    for name in names:
        if increments[name].std != 0:
            raise ValueError(f"increment for {name!r} is not infinitesimal")
    qs = [increments[n].min_exponent() for n in names if not increments[n].is_zero()]
    top = math.floor(1 / min(qs)) + 1 if qs else 1
    point = {k: float(v) for k, v in base.items()}
    total = FermatReal(0)
    for degree in range(top):
        for orders in _compositions(degree, len(names)):
            mono = FermatReal(1)
            for name, m in zip(names, orders):
                mono = mono * increments[name] ** m
            if mono.is_zero() and degree:
                continue
            value = ex.eval_real(partial_derivative(e, names, orders), point)
            denom = math.prod(math.factorial(m) for m in orders)
            coef = Fraction(value) / denom if exact else value / denom
            total = total + mono * coef
    return total


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for combo in itertools.product(range(total + 1), repeat=parts):
        if sum(combo) == total:
            yield combo


def mixed_partial(e: Expr, u: Sequence[float], v: Sequence[float], x0: Sequence[float],
                  names: Sequence[str] | None = None) -> float:
    """d_u(d_v f)(x0) as the unique real ratio j[f(x+hu+kv) - f(x+hu) - f(x+kv) + f(x)] / (jkh).

    k = |t|^(1/2) lies in D_2 and h = j = |t|^(1/4), so jkh = |t| is a nonzero first order
    infinitesimal while j*k^2 = 0.
    """
    names = tuple(names) if names is not None else tuple(sorted(ex.free_vars(e)))
    if not len(names) == len(u) == len(v) == len(x0):
        raise ValueError("direction, point and variable lists must have equal length")
    h = j = FermatReal.monomial(Fraction(1, 4), Fraction(1))
    k = FermatReal.monomial(Fraction(1, 2), Fraction(1))
    base = dict(zip(names, map(float, x0)))

    def f(hu: bool, kv: bool) -> FermatReal:
        incr = {}
        for name, ui, vi in zip(names, u, v):
            d = FermatReal(0)
            if hu:
                d = d + h * Fraction(ui)
            if kv:
                d = d + k * Fraction(vi)
            incr[name] = d
        return taylor_lift(e, base, incr, exact=True)

    bracket = f(True, True) - f(True, False) - f(False, True) + f(False, False)
    ratio = try_ratio(j * bracket, j * k * h)
    if ratio is None:
        raise RatioUndefined("second order incremental ratio has no real value")
    return float(ratio)


def infinitesimal_integral(e: Expr, var: str, x: float, h: FermatReal,
                           env: Mapping[str, float] | None = None) -> FermatReal:
    """The integral of f from x to x + h for h in D, which is exactly h * f(x)."""
    h = FermatReal.coerce(h)
    if not ideal_membership(h, 1):
        raise NotFirstOrder(f"{h} is not a first order infinitesimal")
    point = dict(env or {})
    point[var] = float(x)
    return h * ex.eval_real(e, point)


def second_derivation_check(e: Expr, var: str, x: float, h: FermatReal, k: FermatReal,
                            env: Mapping[str, float] | None = None) -> bool:
    """Whether k*f(x+h) == k*f(x) + kh*f'(x) holds exactly (requires hk in D)."""
    h, k = FermatReal.coerce(h), FermatReal.coerce(k)
    if not ideal_membership(h * k, 1):
        raise NotFirstOrder("h*k must be a first order infinitesimal")
    point = dict(env or {})
    point[var] = float(x)
    shifted = {name: FermatReal(val) for name, val in point.items()}
    shifted[var] = FermatReal(float(x)) + h
    lhs = k * lift_eval(e, shifted)
    fx = ex.eval_real(e, point)
    dfx = ex.eval_real(ex.differentiate(e, var), point)
    rhs = k * fx + (k * h) * dfx
    return lhs == rhs
