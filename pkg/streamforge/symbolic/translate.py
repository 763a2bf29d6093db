# streamforge/symbolic/translate.py
"""Turn sympy terms back into online IR expressions."""
from __future__ import annotations

import re
from typing import List, Mapping, Optional

import sympy as sp

from streamforge.evaluation.terms import integer_parts, is_rational_function
from streamforge.ir.syntax import AccumVar, Apply, Box, Builtin, Const, Expr, Ite, NewElem, Unknown, Var, call, num

_ACCUM = re.compile(r"^y(\d+)$")
_UNKNOWN = re.compile(r"^_u(\d+)$")

_RELATIONS = {sp.StrictLessThan: "<", sp.LessThan: "<=", sp.StrictGreaterThan: ">", sp.GreaterThan: ">="}


def symbol_to_ir(s: sp.Symbol, symbols: Optional[Mapping[sp.Symbol, Expr]] = None) -> Expr:
    if symbols and s in symbols:
        return symbols[s]
    name = s.name
    if name == "x":
        return NewElem()
    if name == "_box":
        return Box()
    m = _ACCUM.match(name)
    if m:
        return AccumVar(int(m.group(1)))
    m = _UNKNOWN.match(name)
    if m:
        return Unknown(int(m.group(1)))
    return Var(name)


def from_sympy(expr, symbols: Optional[Mapping[sp.Symbol, Expr]] = None) -> Expr:
    """
    Rational functions come out as (/ numerator denominator) with integer
    coefficients; everything else is translated node by node.
    """
    expr = sp.sympify(expr)
    if isinstance(expr, sp.Expr) and is_rational_function(expr) and not expr.is_number:
        p, q = integer_parts(expr)
        top = _convert(p.as_expr(), symbols)
        if q.is_one:
            return top
        return call("/", top, _convert(q.as_expr(), symbols))
    return _convert(expr, symbols)


def _convert(e, symbols) -> Expr:
    if e is sp.true or e is True:
        return call("=", num(0), num(0))
    if e is sp.false or e is False:
        return call("=", num(0), num(1))
    if isinstance(e, sp.Symbol):
        return symbol_to_ir(e, symbols)
    if isinstance(e, sp.Rational):
        return Const(_fraction(e))
    if isinstance(e, sp.Add):
        return _sum(e, symbols)
    if isinstance(e, sp.Mul):
        n, d = sp.fraction(e)
        if d != 1:
            return call("/", _convert(n, symbols), _convert(d, symbols))
        coeff, factors = e.as_coeff_mul()
        parts: List[Expr] = [_convert(f, symbols) for f in factors]
        if coeff == -1:
            return call("neg", _product(parts))
        if coeff != 1:
            parts.insert(0, Const(_fraction(coeff)))
        return _product(parts)
    if isinstance(e, sp.Pow):
        base, exp = e.args
        if exp.is_Integer and exp > 0:
            if exp == 1:
                return _convert(base, symbols)
            return call("pow", _convert(base, symbols), num(int(exp)))
        if exp.is_Integer and exp < 0:
            return call("/", num(1), _convert(base ** -exp, symbols))
        raise ValueError(f"non-integer power {e} has no IR form")
    if isinstance(e, sp.Min):
        return call("min", *(_convert(a, symbols) for a in e.args))
    if isinstance(e, sp.Max):
        return call("max", *(_convert(a, symbols) for a in e.args))
    if isinstance(e, sp.Abs):
        return call("abs", _convert(e.args[0], symbols))
    if isinstance(e, sp.Piecewise):
        return _piecewise(list(e.args), symbols)
    if isinstance(e, sp.ITE):
        return Ite(*(_convert(a, symbols) for a in e.args))
    if isinstance(e, sp.Eq):
        return call("=", _convert(e.lhs, symbols), _convert(e.rhs, symbols))
    if isinstance(e, sp.Ne):
        return call("not", call("=", _convert(e.lhs, symbols), _convert(e.rhs, symbols)))
    for cls, name in _RELATIONS.items():
        if isinstance(e, cls):
            return call(name, _convert(e.lhs, symbols), _convert(e.rhs, symbols))
    if isinstance(e, sp.And):
        return call("and", *(_convert(a, symbols) for a in e.args))
    if isinstance(e, sp.Or):
        return call("or", *(_convert(a, symbols) for a in e.args))
    if isinstance(e, sp.Not):
        return call("not", _convert(e.args[0], symbols))
    raise ValueError(f"no IR form for {e}")


def _fraction(r: sp.Rational):
    from fractions import Fraction

    return Fraction(int(r.p), int(r.q))


def _sum(e: sp.Add, symbols) -> Expr:
    terms = e.as_ordered_terms()
    first = terms[0]
    if first.could_extract_minus_sign():
        acc = call("neg", _convert(-first, symbols))
    else:
        acc = _convert(first, symbols)
    for t in terms[1:]:
        if t.could_extract_minus_sign():
            acc = call("-", acc, _convert(-t, symbols))
        elif isinstance(acc, Apply) and acc.fn == Builtin("+"):
            acc = Apply(acc.fn, acc.args + (_convert(t, symbols),))
        else:
            acc = call("+", acc, _convert(t, symbols))
    return acc


def _product(parts: List[Expr]) -> Expr:
    return parts[0] if len(parts) == 1 else call("*", *parts)


def _piecewise(branches, symbols) -> Expr:
    value, cond = branches[0]
    if cond is sp.true or len(branches) == 1:
        return _convert(value, symbols)
    return Ite(_convert(cond, symbols), _convert(value, symbols), _piecewise(branches[1:], symbols))
