"""Canonical Fermat reals: a standard part plus finitely many terms c * |t|**q, q in (0, 1].

A value stands for the class of the nilpotent function t -> std + sum(c * |t|**q) modulo o(t).
Products whose exponent sum exceeds 1 are o(t) and are dropped, which is all the truncation
the ring needs.  Exponents are exact fractions; coefficients are whatever real type the caller
supplies (floats by default, ``Fraction`` when exact arithmetic is wanted).
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Iterable, Mapping

from .errors import ExprSyntaxError, NotInvertible

ONE = Fraction(1)


def _sum(values: list) -> Real:
    # fsum is order independent, which keeps products commutative bit for bit
    if any(isinstance(v, float) for v in values):
        return math.fsum(values)
    return sum(values)


def _exponent(q) -> Fraction:
    q = Fraction(q)
    if not 0 < q <= 1:
        raise ValueError(f"exponent {q} outside (0, 1]")
    return q


class Order(enum.Enum):
    EQUAL = "equal"
    WEAKLY_LESS = "weakly-less"
    WEAKLY_GREATER = "weakly-greater"
    # never produced on the canonical fragment, kept for representatives that are not comparable
    INCOMPARABLE = "incomparable-by-model"


class Trichotomy(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    CLOSE = "infinitely-close"


@dataclass(frozen=True)
class FermatReal:
    std: Real = 0
    terms: tuple[tuple[Fraction, Real], ...] = ()

    def __post_init__(self):
        prev = Fraction(0)
        for q, c in self.terms:
            if not isinstance(q, Fraction) or not prev < q <= 1:
                raise ValueError(f"terms not canonical: {self.terms!r}")
            if c == 0:
                raise ValueError("zero coefficient stored")
            prev = q

    # construction

    @classmethod
    def from_terms(cls, std: Real, terms: Mapping | Iterable) -> FermatReal:
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: dict[Fraction, list] = {}
        for q, c in items:
            merged.setdefault(_exponent(q), []).append(c)
        canon = []
        for q in sorted(merged):
            c = _sum(merged[q])
            if c != 0:
                canon.append((q, c))
        return cls(std, tuple(canon))

    @classmethod
    def real(cls, x: Real) -> FermatReal:
        return cls(x)

    @classmethod
    def monomial(cls, q, coef: Real = 1.0) -> FermatReal:
        """``coef * |t|**q``."""
        return cls.from_terms(0, [(q, coef)])

    @classmethod
    def witness(cls, k: int) -> FermatReal:
        """The canonical k-th order infinitesimal |t|**(1/k), an element of D_k but not of D_(k-1)."""
        if k < 1:
            raise ValueError("k must be positive")
        return cls.monomial(Fraction(1, k), 1.0)

    @staticmethod
    def coerce(x) -> FermatReal:
        if isinstance(x, FermatReal):
            return x
        if isinstance(x, Real):
            return FermatReal(x)
        raise TypeError(f"cannot use {type(x).__name__} as a Fermat real")

    # queries

    def is_real(self) -> bool:
        return not self.terms

    def is_zero(self) -> bool:
        return self.std == 0 and not self.terms

    def infinitesimal_part(self) -> FermatReal:
        return FermatReal(0, self.terms)

    def coefficient(self, q) -> Real:
        q = Fraction(q)
        for p, c in self.terms:
            if p == q:
                return c
        return 0

    def min_exponent(self) -> Fraction | None:
        return self.terms[0][0] if self.terms else None

    def leading(self) -> tuple[Fraction, Real] | None:
        """Smallest-exponent nonzero part, with the standard part counted as exponent 0."""
        if self.std != 0:
            return Fraction(0), self.std
        return self.terms[0] if self.terms else None

    def __call__(self, t: float) -> float:
        """Evaluate the canonical representative at ``t``."""
        s = abs(t)
        return float(self.std) + sum(float(c) * s ** float(q) for q, c in self.terms)

    # arithmetic

    def __add__(self, other) -> FermatReal:
        try:
            other = FermatReal.coerce(other)
        except TypeError:
            return NotImplemented
        return FermatReal.from_terms(self.std + other.std, self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self) -> FermatReal:
        return FermatReal(-self.std, tuple((q, -c) for q, c in self.terms))

    def __sub__(self, other) -> FermatReal:
        try:
            other = FermatReal.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> FermatReal:
        return FermatReal.coerce(other) - self

    def scale(self, r: Real) -> FermatReal:
        return FermatReal.from_terms(self.std * r, [(q, c * r) for q, c in self.terms])

    def __mul__(self, other) -> FermatReal:
        if isinstance(other, Real) and not isinstance(other, FermatReal):
            return self.scale(other)
        if not isinstance(other, FermatReal):
            return NotImplemented
        products: list[tuple[Fraction, Real]] = []
        for q, c in other.terms:
            products.append((q, self.std * c))
        for q, c in self.terms:
            products.append((q, c * other.std))
            for p, d in other.terms:
                if q + p <= 1:
                    products.append((q + p, c * d))
        return FermatReal.from_terms(self.std * other.std, products)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> FermatReal:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.invert() ** (-n)
        result = FermatReal(1)
        for _ in range(n):
            result = result * self
        return result

    def __truediv__(self, other) -> FermatReal:
        other = FermatReal.coerce(other)
        if other.is_real():
            if other.std == 0:
                raise NotInvertible("division by zero")
            return FermatReal.from_terms(self.std / other.std,
                                         [(q, c / other.std) for q, c in self.terms])
        return self * other.invert()

    def __rtruediv__(self, other) -> FermatReal:
        return FermatReal.coerce(other) / self

    def nilpotency_index(self) -> int | None:
        return nilpotency_index(self)

    def invert(self) -> FermatReal:
        return invert(self)

    # serialization

    def to_dict(self) -> dict:
        return {"std": float(self.std),
                "terms": [{"num": q.numerator, "den": q.denominator, "coef": float(c)}
                          for q, c in self.terms]}

    @classmethod
    def from_dict(cls, data: Mapping) -> FermatReal:
        return cls.from_terms(float(data["std"]),
                              [(Fraction(int(t["num"]), int(t["den"])), float(t["coef"]))
                               for t in data.get("terms", [])])

    def to_json(self) -> str:
        terms = ", ".join(
            f'{{"num": {q.numerator}, "den": {q.denominator}, "coef": {fmt_json(c)}}}'
            for q, c in self.terms)
        return f'{{"std": {fmt_json(self.std)}, "terms": [{terms}]}}'

    def render(self, digits: int = 6) -> str:
        parts: list[tuple[Real, str]] = []
        if self.std != 0 or not self.terms:
            parts.append((self.std, ""))
        for q, c in self.terms:
            parts.append((c, "·" + render_power("t", q)))
        return join_signed(parts, digits)

    def __str__(self) -> str:
        return self.render()


def render_power(base: str, q: Fraction) -> str:
    if q.denominator == 1:
        return f"{base}^{q.numerator}"
    return f"{base}^({q.numerator}/{q.denominator})"


def fmt_num(x: Real, digits: int) -> str:
    x = float(x)
    if x == 0:
        return "0"
    return format(x, f".{digits}g")


def fmt_json(x: Real) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("non-finite value has no JSON form")
    if x == 0:
        return "0"
    return format(x, ".17g")


def join_signed(parts: list[tuple[Real, str]], digits: int) -> str:
    """Join ``coef + suffix`` pieces as ``a + b − c`` with a unicode minus."""
    out = []
    for i, (c, suffix) in enumerate(parts):
        neg = float(c) < 0
        body = fmt_num(abs(c), digits) + suffix
        if i == 0:
            out.append(("−" if neg else "") + body)
        else:
            out.append((" − " if neg else " + ") + body)
    return "".join(out)


# named operations


def add(x: FermatReal, y: FermatReal) -> FermatReal:
    return x + y


def mul(x: FermatReal, y: FermatReal) -> FermatReal:
    return x * y


def standard_part(x: FermatReal) -> Real:
    return FermatReal.coerce(x).std


def ideal_membership(x: FermatReal, k: int) -> bool:
    """Whether ``x`` lies in D_k, i.e. x**k is a first order infinitesimal."""
    if k < 1:
        raise ValueError("k must be positive")
    x = FermatReal.coerce(x)
    if x.std != 0:
        return False
    return not x.terms or x.terms[0][0] >= Fraction(1, k)


def nilpotency_index(x: FermatReal) -> int | None:
    """Least N with x**N == 0, or None when x has a nonzero standard part."""
    x = FermatReal.coerce(x)
    if x.std != 0:
        return None
    if not x.terms:
        return 1
    return math.floor(1 / x.terms[0][0]) + 1


def invert(x: FermatReal) -> FermatReal:
    x = FermatReal.coerce(x)
    a = x.std
    if a == 0:
        raise NotInvertible(f"{x} has zero standard part")
    if x.is_real():
        return FermatReal(1 / a)
    # x = a(1 + n/a) with n/a nilpotent: the geometric series terminates
    ratio = -(x.infinitesimal_part() / a)
    total = power = FermatReal(1)
    for _ in range(1, nilpotency_index(ratio)):
        power = power * ratio
        total = total + power
    return total / a


def try_ratio(h: FermatReal, k: FermatReal):
    """The unique real r with h == r*k, or None when there is none."""
    h, k = FermatReal.coerce(h), FermatReal.coerce(k)
    if k.is_zero():
        return None
    hk = ([(Fraction(0), h.std)] if h.std != 0 else []) + list(h.terms)
    kk = ([(Fraction(0), k.std)] if k.std != 0 else []) + list(k.terms)
    if not hk:
        return 0 * kk[0][1]
    if [q for q, _ in hk] != [q for q, _ in kk]:
        return None
    exact = all(isinstance(c, (int, Fraction)) for _, c in hk + kk)
    r = Fraction(hk[0][1]) / Fraction(kk[0][1])
    for (_, a), (_, b) in zip(hk, kk):
        if Fraction(a) != r * Fraction(b):
            return None
    if exact:
        return r
    r = float(r)
    # the float quotient must reproduce h exactly, otherwise no real (double) ratio exists
    if k * r != h:
        return None
    return r


def weak_order(x: FermatReal, y: FermatReal) -> Order:
    """Decide x ⪯ y by the sign of the leading term of y - x."""
    d = FermatReal.coerce(y) - FermatReal.coerce(x)
    lead = d.leading()
    if lead is None:
        return Order.EQUAL
    return Order.WEAKLY_LESS if lead[1] > 0 else Order.WEAKLY_GREATER


def leq(x: FermatReal, y: FermatReal) -> bool:
    """x ≤ y: equal, or weakly less with an invertible difference."""
    x, y = FermatReal.coerce(x), FermatReal.coerce(y)
    if x == y:
        return True
    return weak_order(x, y) is Order.WEAKLY_LESS and (y - x).std != 0


def lt(x: FermatReal, y: FermatReal) -> bool:
    return leq(x, y) and FermatReal.coerce(x) != FermatReal.coerce(y)


def strict_order(x: FermatReal, y: FermatReal) -> Trichotomy:
    """Weak trichotomy: exactly one of x ≃ y, x < y, y < x."""
    if lt(x, y):
        return Trichotomy.LESS
    if lt(y, x):
        return Trichotomy.GREATER
    return Trichotomy.CLOSE


def is_close(x: FermatReal, y: FermatReal) -> bool:
    """x ≈ y on the canonical fragment: the difference is a first order infinitesimal."""
    return ideal_membership(FermatReal.coerce(x) - FermatReal.coerce(y), 1)


def abs_value(x: FermatReal) -> FermatReal:
    x = FermatReal.coerce(x)
    if weak_order(0.0, x) is Order.WEAKLY_GREATER:
        return -x
    return x


# literal syntax:  2 - 0.5*t^(1/2) + 3·|t|   (what ``render`` prints parses back)

_LIT_TOKEN = re.compile(r"""
    \s*(?:
      (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
    | (?P<t>\|t\||t)
    | (?P<op>[-+*·^()/−])
    )""", re.VERBOSE)


def parse_fermat(text: str) -> FermatReal:
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _LIT_TOKEN.match(stripped, pos)
        if not m or m.end() == pos:
            raise ExprSyntaxError("unexpected character", pos, frozenset({"number", "t", "+", "-"}))
        kind = m.lastgroup
        value = m.group(kind)
        tokens.append((kind, "-" if value == "−" else value, m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(stripped)))
    i = 0

    def peek():
        return tokens[i]

    def take(kind, value=None, expected=None):
        nonlocal i
        tk = tokens[i]
        if tk[0] != kind or (value is not None and tk[1] != value):
            raise ExprSyntaxError(f"unexpected {tk[1] or 'end of input'!r}", tk[2],
                                  frozenset(expected or {value or kind}))
        i += 1
        return tk[1]

    def exponent() -> Fraction:
        if peek()[1] != "^":
            return ONE
        take("op", "^")
        if peek()[1] == "(":
            take("op", "(")
            num = take("num", expected={"integer"})
            take("op", "/")
            den = take("num", expected={"integer"})
            take("op", ")")
            q = Fraction(int(num), int(den))
        else:
            q = Fraction(int(take("num", expected={"integer", "("})))
        if not 0 < q <= 1:
            raise ExprSyntaxError(f"exponent {q} outside (0, 1]", tokens[i - 1][2])
        return q

    std = 0.0
    terms = []
    sign = 1.0
    first = True
    while True:
        if peek()[1] in "+-" and peek()[0] == "op":
            sign = -1.0 if take("op") == "-" else 1.0
        elif not first:
            raise ExprSyntaxError(f"unexpected {peek()[1] or 'end of input'!r}", peek()[2],
                                  frozenset({"+", "-", "end of input"}))
        first = False
        kind, value, at = peek()
        if kind == "num":
            take("num")
            coef = sign * float(value)
            if peek()[1] in ("*", "·"):
                take("op")
                take("t", expected={"t"})
                terms.append((exponent(), coef))
            elif peek()[0] == "t":
                take("t")
                terms.append((exponent(), coef))
            else:
                std += coef
        elif kind == "t":
            take("t")
            terms.append((exponent(), sign))
        else:
            raise ExprSyntaxError(f"unexpected {value or 'end of input'!r}", at,
                                  frozenset({"number", "t"}))
        sign = 1.0
        if peek()[0] == "end":
            break
    return FermatReal.from_terms(std, terms)
