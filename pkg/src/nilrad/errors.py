"""Exception hierarchy shared by the library and the command line."""


class NilradError(Exception):
    """Base class; the CLI maps these to exit code 1."""


class NotInvertible(NilradError, ArithmeticError):
    pass


class DomainError(NilradError, ValueError):
    pass


class UnboundVariable(NilradError, KeyError):
    def __str__(self) -> str:
        return f"unbound variable {self.args[0]!r}"


class ExprSyntaxError(NilradError):
    """Parse failure carrying the offending position and the tokens that would have been accepted."""

    def __init__(self, message: str, pos: int, expected: frozenset[str] = frozenset()):
        self.message = message
        self.pos = pos
        self.expected = frozenset(expected)
        super().__init__(str(self))

    def __str__(self) -> str:
        text = f"{self.message} at position {self.pos}"
        if self.expected:
            text += " (expected one of: " + ", ".join(sorted(self.expected)) + ")"
        return text


class MalformedAlpha(NilradError, ValueError):
    pass


class AlgebraMismatch(NilradError, TypeError):
    pass


class NotFirstOrder(NilradError, ValueError):
    pass


class RatioUndefined(NilradError, ArithmeticError):
    """Raised when a construction expected to produce a unique real ratio does not."""


class DuplicateName(NilradError, ValueError):
    pass
