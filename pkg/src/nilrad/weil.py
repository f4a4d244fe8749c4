"""Weil algebras R[x_1..x_n] / <monomial ideal> attached to infinitesimal objects D_alpha.

An algebra is given by multi-indices alpha_1..alpha_c.  The first n are the diagonal bounds
k_j * e_j, the rest are bounded componentwise by those k_j.  A monomial x^r survives when
r <= alpha_i componentwise for some i; every other monomial is zero.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from numbers import Real
from typing import Iterable, Mapping, Sequence

from .errors import AlgebraMismatch, MalformedAlpha, NotInvertible
from .fermat import fmt_json, join_signed

MultiIndex = tuple[int, ...]


def _sum(values: list) -> Real:
    if any(isinstance(v, float) for v in values):
        return math.fsum(values)
    return sum(values)


def leq(r: Sequence[int], s: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(r, s))


@dataclass(frozen=True)
class WeilAlgebra:
    alphas: tuple[MultiIndex, ...]
    surviving: frozenset[MultiIndex] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        alphas = tuple(tuple(int(a) for a in alpha) for alpha in self.alphas)
        object.__setattr__(self, "alphas", alphas)
        if not alphas:
            raise MalformedAlpha("at least one multi-index is required")
        n = len(alphas[0])
        if n == 0 or any(len(a) != n for a in alphas):
            raise MalformedAlpha("multi-indices must share one positive length")
        if len(alphas) < n:
            raise MalformedAlpha(f"need at least {n} multi-indices for {n} generators")
        bounds = []
        for j in range(n):
            diag = alphas[j]
            if diag[j] < 1 or any(diag[i] != 0 for i in range(n) if i != j):
                raise MalformedAlpha(f"alpha_{j + 1} = {diag} is not of the form k*e_{j + 1} with k >= 1")
            bounds.append(diag[j])
        for alpha in alphas[n:]:
            if any(a < 0 for a in alpha) or not leq(alpha, bounds):
                raise MalformedAlpha(f"{alpha} exceeds the diagonal bounds {tuple(bounds)}")
        surviving = set()
        for alpha in alphas:
            surviving.update(itertools.product(*(range(a + 1) for a in alpha)))
        surviving.discard((0,) * n)
        object.__setattr__(self, "surviving", frozenset(surviving))

    @property
    def n(self) -> int:
        return len(self.alphas[0])

    @property
    def bounds(self) -> MultiIndex:
        return tuple(self.alphas[j][j] for j in range(self.n))

    @property
    def dimension(self) -> int:
        return 1 + len(self.surviving)

    def basis(self) -> list[MultiIndex]:
        return sorted(self.surviving)

    def element(self, std: Real = 0, coeffs: Mapping | Iterable = ()) -> WeilElement:
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        merged: dict[MultiIndex, list] = {}
        zero = (0,) * self.n
        extra_std = []
        for mono, c in items:
            mono = tuple(int(m) for m in mono)
            if len(mono) != self.n:
                raise ValueError(f"monomial {mono} has wrong length")
            if mono == zero:
                extra_std.append(c)
            elif mono in self.surviving:
                merged.setdefault(mono, []).append(c)
        if extra_std:
            std = _sum([std, *extra_std])
        canon = []
        for mono in sorted(merged):
            c = _sum(merged[mono])
            if c != 0:
                canon.append((mono, c))
        return WeilElement(self, std, tuple(canon))

    def const(self, x: Real) -> WeilElement:
        return WeilElement(self, x)

    def generator(self, j: int) -> WeilElement:
        mono = tuple(1 if i == j else 0 for i in range(self.n))
        return self.element(0, [(mono, 1.0)])

    def generators(self) -> list[WeilElement]:
        return [self.generator(j) for j in range(self.n)]

    def to_json(self) -> str:
        return '{"alphas": [' + ", ".join("[" + ", ".join(map(str, a)) + "]" for a in self.alphas) + "]}"

    @classmethod
    def from_dict(cls, data: Mapping) -> WeilAlgebra:
        return cls(tuple(tuple(a) for a in data["alphas"]))


def make_algebra(alphas: Iterable[Sequence[int]]) -> WeilAlgebra:
    return WeilAlgebra(tuple(tuple(a) for a in alphas))


def weil_taylor_monomials(algebra: WeilAlgebra) -> frozenset[MultiIndex]:
    """Monomials carrying a coefficient in the Taylor formula on D_alpha (the constant included)."""
    return algebra.surviving | {(0,) * algebra.n}


@dataclass(frozen=True)
class WeilElement:
    algebra: WeilAlgebra
    std: Real = 0
    coeffs: tuple[tuple[MultiIndex, Real], ...] = ()

    def __post_init__(self):
        keys = [m for m, _ in self.coeffs]
        if keys != sorted(set(keys)) or any(m not in self.algebra.surviving for m in keys):
            raise ValueError(f"coefficients not canonical: {self.coeffs!r}")
        if any(c == 0 for _, c in self.coeffs):
            raise ValueError("zero coefficient stored")

    def _coerce(self, other) -> WeilElement:
        if isinstance(other, WeilElement):
            if other.algebra != self.algebra:
                raise AlgebraMismatch("elements belong to different Weil algebras")
            return other
        if isinstance(other, Real):
            return self.algebra.const(other)
        raise TypeError(f"cannot combine WeilElement with {type(other).__name__}")

    def is_real(self) -> bool:
        return not self.coeffs

    def is_zero(self) -> bool:
        return self.std == 0 and not self.coeffs

    def coefficient(self, mono: Sequence[int]) -> Real:
        mono = tuple(mono)
        if mono == (0,) * self.algebra.n:
            return self.std
        return dict(self.coeffs).get(mono, 0)

    def infinitesimal_part(self) -> WeilElement:
        return WeilElement(self.algebra, 0, self.coeffs)

    def __add__(self, other) -> WeilElement:
        other = self._coerce(other)
        return self.algebra.element(self.std + other.std, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self) -> WeilElement:
        return WeilElement(self.algebra, -self.std, tuple((m, -c) for m, c in self.coeffs))

    def __sub__(self, other) -> WeilElement:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> WeilElement:
        return self._coerce(other) - self

    def scale(self, r: Real) -> WeilElement:
        return self.algebra.element(self.std * r, [(m, c * r) for m, c in self.coeffs])

    def __mul__(self, other) -> WeilElement:
        if isinstance(other, Real):
            return self.scale(other)
        return weil_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> WeilElement:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.invert() ** (-n)
        result = self.algebra.const(1)
        for _ in range(n):
            result = result * self
        return result

    def __truediv__(self, other) -> WeilElement:
        other = self._coerce(other)
        if other.is_real():
            if other.std == 0:
                raise NotInvertible("division by zero")
            return self.algebra.element(self.std / other.std,
                                        [(m, c / other.std) for m, c in self.coeffs])
        return self * other.invert()

    def __rtruediv__(self, other) -> WeilElement:
        return self._coerce(other) / self

    def nilpotency_index(self) -> int | None:
        return nilpotency_index_weil(self)

    def invert(self) -> WeilElement:
        a = self.std
        if a == 0:
            raise NotInvertible("element has zero standard part")
        ratio = -(self.infinitesimal_part() / a)
        total = power = self.algebra.const(1)
        for _ in range(1, nilpotency_index_weil(ratio)):
            power = power * ratio
            total = total + power
        return total / a

    def to_json(self) -> str:
        coeffs = ", ".join(
            '{"mono": [' + ", ".join(map(str, m)) + f'], "coef": {fmt_json(c)}}}'
            for m, c in self.coeffs)
        return f'{{"std": {fmt_json(self.std)}, "coeffs": [{coeffs}]}}'

    def render(self, names: Sequence[str] | None = None, digits: int = 6) -> str:
        names = names or [f"x{j + 1}" for j in range(self.algebra.n)]
        parts: list[tuple[Real, str]] = []
        if self.std != 0 or not self.coeffs:
            parts.append((self.std, ""))
        for mono, c in self.coeffs:
            factors = [name if p == 1 else f"{name}^{p}" for name, p in zip(names, mono) if p]
            parts.append((c, "·" + "·".join(factors)))
        return join_signed(parts, digits)

    def __str__(self) -> str:
        return self.render()


def weil_mul(x: WeilElement, y: WeilElement) -> WeilElement:
    y = x._coerce(y)
    surviving = x.algebra.surviving
    products: list[tuple[MultiIndex, Real]] = []
    for m, c in y.coeffs:
        products.append((m, x.std * c))
    for m, c in x.coeffs:
        products.append((m, c * y.std))
        for p, d in y.coeffs:
            r = tuple(a + b for a, b in zip(m, p))
            if r in surviving:
                products.append((r, c * d))
    return x.algebra.element(x.std * y.std, products)


def nilpotency_index_weil(x: WeilElement) -> int | None:
    if x.std != 0:
        return None
    if x.is_zero():
        return 1
    bound = 1 + max(sum(m) for m in x.algebra.surviving)
    power = x
    for n in range(2, bound + 1):
        power = power * x
        if power.is_zero():
            return n
    raise AssertionError("nilpotent element did not vanish within the degree bound")


def element_from_dict(algebra: WeilAlgebra, data: Mapping) -> WeilElement:
    return algebra.element(float(data["std"]),
                           [(tuple(c["mono"]), float(c["coef"])) for c in data.get("coeffs", [])])
