# streamforge/evaluation/builtins.py
"""Concrete semantics of the builtin operators over exact rationals and booleans."""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from typing import List, Sequence, Union

from streamforge.errors import EvalError
from streamforge.ir.syntax import BUILTINS, accepts_arity

Value = Union[Fraction, bool, tuple, list]


def as_number(v: Value, where: str) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, Fraction):
        raise EvalError(f"{where}: expected a rational, got {v!r}")
    return v


def as_bool(v: Value, where: str) -> bool:
    if not isinstance(v, bool):
        raise EvalError(f"{where}: expected a boolean, got {v!r}")
    return v


def safe_div(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(0) if b == 0 else a / b


def apply_builtin(name: str, args: Sequence[Value]) -> Value:
    spec = BUILTINS[name]
    if not accepts_arity(name, len(args)):
        raise EvalError(f"'{name}' applied to {len(args)} arguments")
    if spec.operands == "bool":
        flags: List[bool] = [as_bool(a, name) for a in args]
        if name == "and":
            return all(flags)
        if name == "or":
            return any(flags)
        return not flags[0]
    vals = [as_number(a, name) for a in args]
    if name == "+":
        return sum(vals, Fraction(0))
    if name == "*":
        return reduce(lambda a, b: a * b, vals, Fraction(1))
    if name == "-":
        return vals[0] - vals[1]
    if name == "/":
        return safe_div(vals[0], vals[1])
    if name == "neg":
        return -vals[0]
    if name == "abs":
        return abs(vals[0])
    if name == "min":
        return min(vals)
    if name == "max":
        return max(vals)
    if name == "pow":
        base, exp = vals
        if exp.denominator != 1 or exp < 0:
            raise EvalError(f"pow exponent must be a nonnegative integer, got {exp}")
        return base ** int(exp)
    a, b = vals
    if name == "<":
        return a < b
    if name == "<=":
        return a <= b
    if name == ">":
        return a > b
    if name == ">=":
        return a >= b
    return a == b
