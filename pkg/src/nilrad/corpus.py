"""Reference functions with domains on which they are smooth and well conditioned."""

from __future__ import annotations

from .expr import Expr, parse

# (text, lower, upper): one variable x
UNIVARIATE: list[tuple[str, float, float]] = [
    ("x^2", -3.0, 3.0),
    ("x^3 - 2*x", -2.0, 2.0),
    ("exp(x)", -2.0, 2.0),
    ("log(x)", 0.5, 3.0),
    ("sin(x)", -3.0, 3.0),
    ("cos(x)", -3.0, 3.0),
    ("tan(x)", -1.0, 1.0),
    ("atan(x)", -3.0, 3.0),
    ("sqrt(x)", 0.5, 4.0),
    ("1/(1 + x^2)", -3.0, 3.0),
    ("exp(-x^2)", -2.0, 2.0),
    ("sin(x)*cos(x)", -3.0, 3.0),
    ("x*exp(x)", -2.0, 2.0),
    ("log(1 + x^2)", -3.0, 3.0),
    ("sqrt(1 + x^2)", -3.0, 3.0),
    ("x^2.5", 0.5, 3.0),
    ("exp(sin(x))", -3.0, 3.0),
    ("1/sqrt(1 - x)", -1.0, 0.5),
    ("cos(x)^3 - x", -3.0, 3.0),
    ("log(x)*sqrt(x)", 0.5, 3.0),
]

# (text, lower, upper): variables x, y, both ranging over [lower, upper]
BIVARIATE: list[tuple[str, float, float]] = [
    ("x*y", -1.0, 1.0),
    ("sin(x)*cos(y)", -1.0, 1.0),
    ("exp(x*y)", -1.0, 1.0),
    ("x^2*y^3", -1.0, 1.0),
    ("log(1 + x^2 + y^2)", -1.0, 1.0),
    ("sqrt(1 + x^2*y^2)", -1.0, 1.0),
    ("atan(x*y)", -1.0, 1.0),
    ("exp(x)*sin(y)", -1.0, 1.0),
    ("x*cos(x + 2*y)", -1.0, 1.0),
    ("(x + y)^3/(1 + x^2)", -1.0, 1.0),
]


def univariate() -> list[tuple[Expr, float, float]]:
    return [(parse(text), lo, hi) for text, lo, hi in UNIVARIATE]


def bivariate() -> list[tuple[Expr, float, float]]:
    return [(parse(text), lo, hi) for text, lo, hi in BIVARIATE]
