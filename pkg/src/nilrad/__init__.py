"""Arithmetic, order and calculus with nilpotent infinitesimals (Fermat reals and Weil algebras)."""

from .errors import (AlgebraMismatch, DomainError, DuplicateName, ExprSyntaxError, MalformedAlpha,
                     NilradError, NotFirstOrder, NotInvertible, RatioUndefined, UnboundVariable)
from .expr import Expr, differentiate, eval_real, parse, to_text
from .fermat import (FermatReal, Order, Trichotomy, abs_value, ideal_membership, invert, is_close,
                     leq, lt, nilpotency_index, parse_fermat, standard_part, strict_order, try_ratio,
                     weak_order)
from .lift import (TaylorJet, derive, infinitesimal_integral, lift_eval, lift_eval_weil,
                   mixed_partial, second_derivation_check, taylor_lift)
from .weil import (WeilAlgebra, WeilElement, make_algebra, nilpotency_index_weil, weil_mul,
                   weil_taylor_monomials)

__version__ = "0.1.0"
