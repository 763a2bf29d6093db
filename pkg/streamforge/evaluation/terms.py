# streamforge/evaluation/terms.py
"""
Canonical symbolic terms.

Rational functions are kept as a numerator/denominator pair of sympy polynomials
over QQ with gcd 1 and a monic denominator (generators ordered by name). Terms
that contain piecewise branches or min/max/abs are kept in sympy's own normal
form with every branch value canonicalized.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterable, List, Mapping, Tuple

import sympy as sp
from sympy.logic.boolalg import Boolean

from streamforge.errors import EvalError

ELEM_PREFIX = "_x"


def make_symbol(name: str) -> sp.Symbol:
    return sp.Symbol(name, real=True)


def accum_symbol(index: int) -> sp.Symbol:
    return make_symbol(f"y{index}")


NEW_ELEM_SYMBOL = make_symbol("x")
BOX_SYMBOL = make_symbol("_box")


def unknown_symbol(uid: int) -> sp.Symbol:
    return make_symbol(f"_u{uid}")


def elem_symbols(k: int, prefix: str = ELEM_PREFIX) -> List[sp.Symbol]:
    return [make_symbol(f"{prefix}{i}") for i in range(1, k + 1)]


def is_boolean(v) -> bool:
    """Truth values only: sympy symbols are Boolean as well as Expr."""
    return isinstance(v, Boolean) and not isinstance(v, sp.Expr)


def to_sympy_rational(v: Fraction) -> sp.Rational:
    v = Fraction(v)
    return sp.Rational(v.numerator, v.denominator)


def from_sympy_value(v):
    if v is sp.true or v is True:
        return True
    if v is sp.false or v is False:
        return False
    if isinstance(v, sp.Rational):
        return Fraction(int(v.p), int(v.q))
    raise EvalError(f"symbolic value {v} did not reduce to a rational")


def ordered_gens(expr: sp.Expr) -> Tuple[sp.Symbol, ...]:
    return tuple(sorted(expr.free_symbols, key=lambda s: s.name))


def is_rational_function(expr) -> bool:
    return isinstance(expr, sp.Expr) and bool(expr.is_rational_function())


def rational_parts(expr: sp.Expr) -> Tuple[sp.Poly, sp.Poly]:
    """(numerator, monic denominator) of a rational function, gcd 1."""
    gens = ordered_gens(expr) or (make_symbol("_"),)
    num, den = sp.fraction(sp.cancel(sp.together(expr)))
    p = sp.Poly(num, *gens, domain="QQ")
    q = sp.Poly(den, *gens, domain="QQ")
    g = sp.gcd(p, q)
    if not g.is_one:
        p, q = sp.div(p, g)[0], sp.div(q, g)[0]
    lc = q.LC()
    return p.quo_ground(lc), q.monic()


def integer_parts(expr: sp.Expr) -> Tuple[sp.Poly, sp.Poly]:
    """Numerator and denominator with integer coefficients, overall content 1, positive leading denominator."""
    p, q = rational_parts(expr)
    coeffs = [sp.Rational(c) for c in p.coeffs() + q.coeffs()]
    scale = math.lcm(*[int(c.q) for c in coeffs])
    p, q = p.mul_ground(scale), q.mul_ground(scale)
    content = math.gcd(*[int(c) for c in p.coeffs() + q.coeffs()]) or 1
    return p.quo_ground(content), q.quo_ground(content)


def canonical(expr):
    expr = sp.sympify(expr)
    if not isinstance(expr, sp.Expr):
        return expr
    if expr.has(sp.Piecewise):
        folded = sp.piecewise_fold(expr)
        if isinstance(folded, sp.Piecewise):
            return sp.Piecewise(*[(canonical(v), c) for v, c in folded.args])
        return folded
    if is_rational_function(expr):
        if expr.is_number:
            return expr
        p, q = rational_parts(expr)
        return p.as_expr() / q.as_expr()
    return sp.cancel(expr)


def terms_equal(a, b) -> bool:
    a, b = sp.sympify(a), sp.sympify(b)
    if is_rational_function(a) and is_rational_function(b):
        return sp.cancel(sp.together(a - b)) == 0
    return canonical(a) == canonical(b)


def node_count(expr) -> int:
    return sum(1 for _ in sp.preorder_traversal(expr))


@dataclass(frozen=True)
class SymTerm:
    """A canonical symbolic value plus the denominators assumed nonzero."""

    expr: sp.Basic
    side_conditions: FrozenSet[sp.Expr] = frozenset()

    @classmethod
    def of(cls, expr, side_conditions: Iterable = ()) -> "SymTerm":
        conds = frozenset(canonical(c) for c in side_conditions if not sp.sympify(c).is_number)
        return cls(canonical(expr), conds)

    @property
    def is_rational(self) -> bool:
        return is_rational_function(self.expr)

    @property
    def free_symbols(self) -> FrozenSet[sp.Symbol]:
        return frozenset(self.expr.free_symbols)

    def parts(self) -> Tuple[sp.Poly, sp.Poly]:
        return rational_parts(self.expr)

    def evaluate(self, values: Mapping[sp.Symbol, Fraction]):
        subs = {s: to_sympy_rational(v) for s, v in values.items()}
        return from_sympy_value(sp.sympify(self.expr).subs(subs))

    def conditions_hold(self, values: Mapping[sp.Symbol, Fraction]) -> bool:
        subs = {s: to_sympy_rational(v) for s, v in values.items()}
        return all(c.subs(subs) != 0 for c in self.side_conditions)

    def __str__(self) -> str:
        return str(self.expr)
