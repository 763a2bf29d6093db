# streamforge/ir/printer.py
"""Canonical text for programs, schemes and stray expressions."""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Any, Dict, Union

from streamforge.ir.syntax import (
    AccumVar, Apply, Box, Builtin, Const, Expr, Filter, Foldl, Hole, Ite, Lambda, Length, Let,
    ListVar, Map, NewElem, OfflineProgram, OnlineScheme, Snoc, Unknown, Var,
)
from streamforge.ir.tools import bound_names, free_variables, fresh_name, substitute, transform

_ONLINE_NAME = re.compile(r"^(x|y\d+)$")


def print_rational(value: Fraction) -> str:
    return str(Fraction(value))


def print_expr(e: Expr) -> str:
    match e:
        case Const(value):
            return print_rational(value)
        case Var(name):
            return name
        case ListVar():
            return "xs"
        case NewElem():
            return "x"
        case AccumVar(index):
            return f"y{index}"
        case Hole(id):
            return f"(hole {id})"
        case Unknown(id):
            return f"(?? {id})"
        case Box():
            return "(box)"
        case Builtin(name):
            return name
        case Lambda(params, body):
            return f"(lambda ({' '.join(params)}) {print_expr(body)})"
        case Snoc(lst, elem):
            return f"(snoc {print_expr(lst)} {print_expr(elem)})"
        case Map(fn, lst):
            return f"(map {print_expr(fn)} {print_expr(lst)})"
        case Filter(fn, lst):
            return f"(filter {print_expr(fn)} {print_expr(lst)})"
        case Foldl(fn, init, lst):
            return f"(foldl {print_expr(fn)} {print_expr(init)} {print_expr(lst)})"
        case Length(lst):
            return f"(length {print_expr(lst)})"
        case Apply(fn, args):
            return f"({print_expr(fn)} {' '.join(print_expr(a) for a in args)})"
        case Ite(cond, then, orelse):
            return f"(ite {print_expr(cond)} {print_expr(then)} {print_expr(orelse)})"
        case Let(name, bound, body):
            return f"(let ({name} {print_expr(bound)}) {print_expr(body)})"
    raise TypeError(f"cannot print {e!r}")


def print_program(p: OfflineProgram) -> str:
    args = " ".join(("xs",) + tuple(p.extra_args))
    return f"(program ({args}) {print_expr(p.body)})"


def _hygienic(e: Expr) -> Expr:
    """Rename lambda parameters that would read back as y_i or x."""

    def fix(node: Expr) -> Expr:
        if not isinstance(node, Lambda):
            return node
        params, body = list(node.params), node.body
        for i, p in enumerate(params):
            if _ONLINE_NAME.match(p):
                q = fresh_name("p", set(params) | free_variables(body) | bound_names(body))
                body = substitute(body, Var(p), Var(q))
                params[i] = q
        return Lambda(tuple(params), body)

    return transform(e, fix)


def print_update(s: OnlineScheme) -> str:
    names = " ".join(f"y{i}" for i in range(1, s.arity + 1))
    parts = " ".join(print_expr(_hygienic(c)) for c in s.body)
    return f"(update ({names}) x (tuple {parts}))"


def print_scheme(s: OnlineScheme) -> str:
    init = " ".join(print_rational(c) for c in s.initializer)
    args = f" (args {' '.join(s.extra_args)})" if s.extra_args else ""
    return f"(scheme (init {init}){args} {print_update(s)})"


def scheme_to_json(s: OnlineScheme) -> Dict[str, Any]:
    return {
        "init": [print_rational(c) for c in s.initializer],
        "init_approx": [float(c) for c in s.initializer],
        "arity": s.arity,
        "args": list(s.extra_args),
        "update": print_update(s),
    }


def to_text(obj: Union[OfflineProgram, OnlineScheme, Expr]) -> str:
    if isinstance(obj, OfflineProgram):
        return print_program(obj)
    if isinstance(obj, OnlineScheme):
        return print_scheme(obj)
    return print_expr(obj)
