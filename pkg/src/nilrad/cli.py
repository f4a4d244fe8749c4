"""Command line: ``nilrad eval|deriv|compare|example|repl``.

The REPL and ``--script`` files accept one statement per line (``;`` also separates):

    let h in D_2
    let x = 1 + 0.5*t^(1/2)
    algebra B = [[1,0],[0,1],[1,1]]
    let (u,v) in B
    eval [--json] <expr>
    deriv <expr> at <x0> order <k> [var <name>] [--derivatives] [--json]
    compare <lhs> eq|weak|strict|iso <rhs>
    example <name>

Exit codes: 0 success, 1 user error (syntax, domain, ...), 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from typing import Callable, TextIO

from . import expr as ex
from . import scenarios
from .errors import DuplicateName, ExprSyntaxError, MalformedAlpha, NilradError
from .fermat import FermatReal, fmt_num, parse_fermat, strict_order, weak_order, Trichotomy
from .lift import derive, evaluate
from .weil import WeilAlgebra, WeilElement

RELATIONS = ("eq", "weak", "strict", "iso")


@dataclass
class Session:
    bindings: dict[str, FermatReal | WeilElement] = field(default_factory=dict)
    algebras: dict[str, WeilAlgebra] = field(default_factory=dict)
    # generator names per algebra, for rendering
    labels: dict[WeilAlgebra, tuple[str, ...]] = field(default_factory=dict)
    out: TextIO | None = None  # None means the current sys.stdout
    failed_examples: int = 0

    def _claim(self, name: str) -> None:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name) or name in ex.FUNCTIONS:
            raise ExprSyntaxError(f"invalid name {name!r}", 0, frozenset({"identifier"}))
        if name in self.bindings or name in self.algebras:
            raise DuplicateName(f"{name!r} is already defined")

    def emit(self, text: str) -> None:
        (self.out or sys.stdout).write(text + "\n")

    def render(self, value) -> str:
        if isinstance(value, WeilElement):
            return value.render(self.labels.get(value.algebra))
        return value.render()

    # statements

    def execute(self, line: str) -> None:
        line = line.strip()
        if not line or line.startswith("#"):
            return
        word, _, rest = line.partition(" ")
        handler: Callable[[str], None] | None = {
            "let": self.cmd_let, "algebra": self.cmd_algebra, "eval": self.cmd_eval,
            "deriv": self.cmd_deriv, "compare": self.cmd_compare, "example": self.cmd_example,
        }.get(word)
        if handler is None:
            raise ExprSyntaxError(f"unknown command {word!r}", 0,
                                  frozenset({"let", "algebra", "eval", "deriv", "compare", "example"}))
        handler(rest.strip())

    def run_script(self, text: str) -> None:
        for raw in text.splitlines():
            for stmt in raw.split(";"):
                self.execute(stmt)

    def cmd_let(self, decl: str) -> None:
        m = re.fullmatch(r"(\w+)\s+in\s+D_?(\d+)", decl)
        if m:
            name, k = m.group(1), int(m.group(2))
            self._claim(name)
            if k < 1:
                raise ExprSyntaxError("D_k needs k >= 1", decl.index(m.group(2)))
            self.bindings[name] = FermatReal.witness(k)
            return
        m = re.fullmatch(r"\(\s*(\w+(?:\s*,\s*\w+)*)\s*\)\s+in\s+(\w+)", decl)
        if m:
            names = [n.strip() for n in m.group(1).split(",")]
            alg_name = m.group(2)
            if alg_name not in self.algebras:
                raise NilradError(f"unknown algebra {alg_name!r}")
            algebra = self.algebras[alg_name]
            if len(names) != algebra.n:
                raise MalformedAlpha(f"{alg_name} has {algebra.n} generators, got {len(names)} names")
            if len(set(names)) != len(names):
                raise DuplicateName("generator names must be distinct")
            for n in names:
                self._claim(n)
            for n, g in zip(names, algebra.generators()):
                self.bindings[n] = g
            self.labels[algebra] = tuple(names)
            return
        m = re.fullmatch(r"(\w+)\s*=\s*(.+)", decl)
        if m:
            name, literal = m.group(1), m.group(2).strip()
            self._claim(name)
            if literal.startswith("{"):
                value = FermatReal.from_dict(json.loads(literal))
            else:
                value = parse_fermat(literal)
            self.bindings[name] = value
            return
        raise ExprSyntaxError("malformed declaration", 0,
                              frozenset({"let NAME in D_k", "let NAME = LITERAL", "let (A,B) in ALG"}))

    def cmd_algebra(self, decl: str) -> None:
        m = re.fullmatch(r"(\w+)\s*=\s*(\[.*\])", decl)
        if not m:
            raise ExprSyntaxError("malformed algebra declaration", 0, frozenset({"algebra NAME = [[...], ...]"}))
        name = m.group(1)
        self._claim(name)
        try:
            alphas = json.loads(m.group(2))
        except json.JSONDecodeError as exc:
            raise ExprSyntaxError(f"bad multi-index list: {exc.msg}", m.start(2) + exc.pos) from None
        if not isinstance(alphas, list) or not all(
                isinstance(a, list) and all(isinstance(i, int) for i in a) for a in alphas):
            raise MalformedAlpha("alphas must be a list of integer lists")
        self.algebras[name] = WeilAlgebra(tuple(tuple(a) for a in alphas))

    def value(self, text: str):
        return evaluate(parse_expr(text), self.bindings)

    def cmd_eval(self, text: str) -> None:
        as_json = False
        if text.startswith("--json"):
            as_json, text = True, text[len("--json"):].strip()
        elif text.endswith("--json"):
            as_json, text = True, text[: -len("--json")].strip()
        value = self.value(text)
        self.emit(value.to_json() if as_json else self.render(value))

    def cmd_deriv(self, text: str) -> None:
        flags = set(re.findall(r"--(derivatives|json)\b", text))
        text = re.sub(r"\s*--(derivatives|json)\b", "", text)
        m = re.fullmatch(r"(.+?)\s+at\s+(\S+)\s+order\s+(\d+)(?:\s+var\s+(\w+))?", text.strip())
        if not m:
            raise ExprSyntaxError("expected: deriv EXPR at X0 order K [var NAME]", 0,
                                  frozenset({"at", "order"}))
        e = parse_expr(m.group(1))
        self.deriv(e, m.group(4), float(m.group(2)), int(m.group(3)), "derivatives" in flags, "json" in flags)

    def deriv(self, e: ex.Expr, var: str | None, x0: float, k: int, derivatives: bool, as_json: bool) -> None:
        env = {}
        for name, val in self.bindings.items():
            if isinstance(val, FermatReal) and val.is_real():
                env[name] = float(val.std)
        if var is None:
            free = sorted(ex.free_vars(e) - set(env))
            if len(free) != 1:
                raise NilradError(f"cannot infer the variable from {free}; use var NAME")
            var = free[0]
        env.pop(var, None)
        jet = derive(e, var, x0, k, env)
        if as_json:
            self.emit(jet.to_json())
            return
        for i, c in enumerate(jet.coeffs):
            self.emit(f"c_{i} = {fmt_num(c, 6)}")
        if derivatives:
            for i, d in enumerate(jet.derivatives()):
                self.emit(f"f^({i}) = {fmt_num(d, 6)}")

    def cmd_compare(self, text: str) -> None:
        m = re.fullmatch(r"(.+?)\s+(eq|weak|strict|iso)\s+(.+)", text)
        if not m:
            raise ExprSyntaxError("expected: compare LHS eq|weak|strict|iso RHS", 0, frozenset(RELATIONS))
        self.compare(m.group(1), m.group(2), m.group(3))

    def compare(self, lhs_text: str, relation: str, rhs_text: str) -> None:
        lhs, rhs = self.value(lhs_text), self.value(rhs_text)
        if relation == "eq":
            self.emit("equal" if lhs == rhs else "not-equal")
            return
        if isinstance(lhs, WeilElement) or isinstance(rhs, WeilElement):
            raise NilradError("Weil algebra elements only support the eq relation")
        if relation == "weak":
            self.emit(weak_order(lhs, rhs).value)
        elif relation == "strict":
            verdict = strict_order(lhs, rhs)
            self.emit({Trichotomy.LESS: "strict-less", Trichotomy.GREATER: "strict-greater",
                       Trichotomy.CLOSE: "infinitely-close"}[verdict])
        else:
            same = lhs.std == rhs.std
            self.emit(f"{'iso' if same else 'not-iso'}: st(lhs) = {fmt_num(lhs.std, 6)}, "
                      f"st(rhs) = {fmt_num(rhs.std, 6)}")

    def cmd_example(self, name: str) -> None:
        name = name.strip()
        if name not in scenarios.SCENARIOS:
            raise NilradError(f"unknown example {name!r}; choose from {', '.join(scenarios.SCENARIOS)}")
        report = scenarios.run(name)
        (self.out or sys.stdout).write(report.text())
        if not report.passed:
            self.failed_examples += 1


def parse_expr(text: str) -> ex.Expr:
    try:
        return ex.parse(text)
    except ExprSyntaxError as exc:
        exc.source = text
        raise


def _report_error(exc: NilradError, source: str | None) -> None:
    sys.stderr.write(f"error: {exc}\n")
    source = getattr(exc, "source", source)
    if isinstance(exc, ExprSyntaxError) and source is not None:
        sys.stderr.write(f"  {source}\n  {' ' * exc.pos}^\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nilrad", description="Calculus with nilpotent infinitesimals.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_lets(p):
        p.add_argument("--let", dest="lets", action="append", default=[], metavar="DECL",
                       help="declaration such as 'h in D_2' or 'x = 1 + t^(1/2)'")
        return p

    p = with_lets(sub.add_parser("eval", help="evaluate an expression"))
    p.add_argument("expr")
    p.add_argument("--json", action="store_true")

    p = with_lets(sub.add_parser("deriv", help="Taylor coefficients by coefficient extraction"))
    p.add_argument("expr")
    p.add_argument("--var", default=None)
    p.add_argument("--at", type=float, required=True)
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--derivatives", action="store_true")
    p.add_argument("--json", action="store_true")

    p = with_lets(sub.add_parser("compare", help="compare two expressions"))
    p.add_argument("lhs")
    p.add_argument("relation", choices=RELATIONS)
    p.add_argument("rhs")

    p = sub.add_parser("example", help="replay a worked example")
    p.add_argument("name", choices=sorted(scenarios.SCENARIOS))

    p = sub.add_parser("repl", help="interactive session or batch script")
    p.add_argument("--script", default=None, help="file of statements; '-' reads stdin")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    session = Session()
    source = None
    try:
        for decl in getattr(args, "lets", []):
            source = decl
            if decl.startswith("algebra "):
                session.cmd_algebra(decl[len("algebra "):])
            else:
                session.cmd_let(decl[4:] if decl.startswith("let ") else decl)
        if args.command == "eval":
            source = args.expr
            session.cmd_eval(("--json " if args.json else "") + args.expr)
        elif args.command == "deriv":
            source = args.expr
            session.deriv(parse_expr(args.expr), args.var, args.at, args.order, args.derivatives, args.json)
        elif args.command == "compare":
            source = None
            session.compare(args.lhs, args.relation, args.rhs)
        elif args.command == "example":
            session.cmd_example(args.name)
        else:
            return _repl(session, args.script)
    except NilradError as exc:
        _report_error(exc, source)
        return 1
    except Exception as exc:  # anything else is a bug, not a user error
        sys.stderr.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return 2
    return 1 if session.failed_examples else 0


def _repl(session: Session, script: str | None) -> int:
    interactive = script is None and sys.stdin.isatty()
    if script is None or script == "-":
        stream = sys.stdin
    else:
        stream = open(script, encoding="utf-8")
    status = 0
    with stream:
        while True:
            if interactive:
                sys.stdout.write("nilrad> ")
                sys.stdout.flush()
            raw = stream.readline()
            if not raw:
                break
            for stmt in raw.split(";"):
                try:
                    session.execute(stmt)
                except NilradError as exc:
                    _report_error(exc, stmt.strip())
                    status = max(status, 1)
                    if not interactive:
                        return status
                except Exception as exc:
                    sys.stderr.write(f"internal error: {type(exc).__name__}: {exc}\n")
                    return 2
    if session.failed_examples:
        status = max(status, 1)
    return status


if __name__ == "__main__":
    sys.exit(main())
