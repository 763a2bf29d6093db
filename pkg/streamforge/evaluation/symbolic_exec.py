# streamforge/evaluation/symbolic_exec.py
"""
Symbolic execution of the IR into sympy terms.

xs is bound to a list of symbolic elements; each element carries a guard so that
filter can keep elements conditionally. Folds are unrolled, filters turn into
Piecewise nests and divisions record their denominators as side conditions.
"""
from __future__ import annotations

from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Set, Tuple

import sympy as sp
from sympy.logic.boolalg import Boolean

from streamforge.errors import EvalError, UnrollBudgetError
from streamforge.evaluation.terms import (
    BOX_SYMBOL, ELEM_PREFIX, NEW_ELEM_SYMBOL, SymTerm, accum_symbol, canonical, elem_symbols,
    is_boolean, make_symbol, node_count, to_sympy_rational, unknown_symbol,
)
from streamforge.ir.syntax import (
    AccumVar, Apply, Box, Builtin, Const, Expr, Filter, Foldl, Ite, Lambda, Length, ListVar, Map,
    NewElem, Snoc, Unknown, Var,
)

DEFAULT_NODE_BUDGET = 10_000

Guarded = List[Tuple[Boolean, sp.Basic]]

_RELATIONS = {"<": sp.Lt, "<=": sp.Le, ">": sp.Gt, ">=": sp.Ge}


class SymbolicExecutor:
    """
    Evaluates one expression symbolically. Unbound variables become free
    indeterminates: extra arguments by name, y_i, x, and template unknowns.
    """

    def __init__(self, xs: Optional[Sequence[sp.Basic]] = None, accums: Optional[Sequence[sp.Basic]] = None,
                 new_elem: Optional[sp.Basic] = None, names: Optional[Mapping[str, sp.Basic]] = None,
                 node_budget: int = DEFAULT_NODE_BUDGET):
        self.xs = None if xs is None else [(sp.true, v) for v in xs]
        self.accums = None if accums is None else list(accums)
        self.new_elem = new_elem
        self.names: Dict[str, sp.Basic] = dict(names or {})
        self.node_budget = node_budget
        self.side_conditions: Set[sp.Expr] = set()

    # ------------------------------------------------------------------
    def run(self, e: Expr, scope: Optional[Mapping[str, sp.Basic]] = None) -> sp.Basic:
        return self._eval(e, dict(self.names, **(scope or {})))

    def _eval(self, e: Expr, scope: Dict[str, sp.Basic]) -> sp.Basic:
        match e:
            case Const(value):
                return to_sympy_rational(value)
            case Var(name):
                return scope[name] if name in scope else make_symbol(name)
            case AccumVar(index):
                if self.accums is None:
                    return accum_symbol(index)
                if index > len(self.accums):
                    raise EvalError(f"y{index} is not bound (arity {len(self.accums)})")
                return self.accums[index - 1]
            case NewElem():
                return NEW_ELEM_SYMBOL if self.new_elem is None else self.new_elem
            case Box():
                return BOX_SYMBOL
            case Unknown(id):
                return unknown_symbol(id)
            case Foldl(fn, init, lst):
                acc = self._eval(init, scope)
                for guard, v in self._list(lst, scope):
                    stepped = self._call(fn, (acc, v), scope)
                    acc = stepped if guard is sp.true else self._ite(guard, stepped, acc)
                    self._check(acc)
                return acc
            case Length(lst):
                total = sp.Integer(0)
                for guard, _ in self._list(lst, scope):
                    total += 1 if guard is sp.true else sp.Piecewise((1, guard), (0, True))
                self._check(total)
                return total
            case Apply(fn, args):
                return self._call(fn, tuple(self._eval(a, scope) for a in args), scope)
            case Ite(cond, then, orelse):
                c = self._bool(self._eval(cond, scope), "ite")
                if c is sp.true:
                    return self._eval(then, scope)
                if c is sp.false:
                    return self._eval(orelse, scope)
                out = self._ite(c, self._eval(then, scope), self._eval(orelse, scope))
                self._check(out)
                return out
        raise EvalError(f"cannot execute {type(e).__name__} symbolically")

    def _list(self, lst: Expr, scope: Dict[str, sp.Basic]) -> Guarded:
        match lst:
            case ListVar():
                if self.xs is None:
                    raise EvalError("xs is not bound in this context")
                return list(self.xs)
            case Snoc(inner, elem):
                return self._list(inner, scope) + [(sp.true, self._eval(elem, scope))]
            case Map(fn, inner):
                return [(g, self._call(fn, (v,), scope)) for g, v in self._list(inner, scope)]
            case Filter(fn, inner):
                out: Guarded = []
                for g, v in self._list(inner, scope):
                    keep = sp.And(g, self._bool(self._call(fn, (v,), scope), "filter"))
                    if keep is not sp.false:
                        out.append((keep, v))
                return out
        raise EvalError(f"expected a list expression, got {type(lst).__name__}")

    def _call(self, fn: Expr, args: Tuple[sp.Basic, ...], scope: Dict[str, sp.Basic]) -> sp.Basic:
        if isinstance(fn, Lambda):
            if len(fn.params) != len(args):
                raise EvalError(f"lambda expects {len(fn.params)} arguments, got {len(args)}")
            return self._eval(fn.body, {**scope, **dict(zip(fn.params, args))})
        if isinstance(fn, Builtin):
            return self.builtin(fn.name, args)
        raise EvalError(f"not a function: {type(fn).__name__}")

    # ------------------------------------------------------------------
    def builtin(self, name: str, args: Sequence[sp.Basic]) -> sp.Basic:
        if name in ("and", "or", "not"):
            flags = [self._bool(a, name) for a in args]
            if name == "and":
                return sp.And(*flags)
            if name == "or":
                return sp.Or(*flags)
            return sp.Not(flags[0])
        vals = [self._num(a, name) for a in args]
        if name == "+":
            return sp.Add(*vals)
        if name == "*":
            return sp.Mul(*vals)
        if name == "-":
            return vals[0] - vals[1]
        if name == "neg":
            return -vals[0]
        if name == "/":
            return self.safe_div(vals[0], vals[1])
        if name == "abs":
            return sp.Abs(vals[0])
        if name == "min":
            return sp.Min(*vals)
        if name == "max":
            return sp.Max(*vals)
        if name == "pow":
            exp = vals[1]
            if not (exp.is_Integer and exp >= 0):
                raise EvalError(f"pow exponent must be a nonnegative integer literal, got {exp}")
            return vals[0] ** int(exp)
        if name == "=":
            diff = canonical(vals[0] - vals[1])
            if diff == 0:
                return sp.true
            if diff.is_number:
                return sp.false
            return sp.Eq(vals[0], vals[1])
        return _RELATIONS[name](vals[0], vals[1])

    def safe_div(self, a: sp.Expr, b: sp.Expr) -> sp.Expr:
        den = canonical(b)
        if den == 0:
            return sp.Integer(0)
        if not den.is_number:
            self.side_conditions.add(den)
        return a / b

    @staticmethod
    def _ite(cond: Boolean, then: sp.Basic, orelse: sp.Basic) -> sp.Basic:
        if is_boolean(then) or is_boolean(orelse):
            return sp.ITE(cond, then, orelse)
        return sp.Piecewise((then, cond), (orelse, True))

    @staticmethod
    def _num(v: sp.Basic, where: str) -> sp.Expr:
        if not isinstance(v, sp.Expr):
            raise EvalError(f"{where}: expected a number, got {v}")
        return v

    @staticmethod
    def _bool(v, where: str) -> Boolean:
        if v is True or v is False:
            return sp.true if v else sp.false
        if not is_boolean(v):
            raise EvalError(f"{where}: expected a boolean, got {v}")
        return v

    def _check(self, expr: sp.Basic) -> None:
        if expr.has(sp.Piecewise, sp.ITE) and node_count(expr) > self.node_budget:
            raise UnrollBudgetError(f"symbolic term exceeded {self.node_budget} nodes")


# ------------------------------------------------------------------
# Unrolling
# ------------------------------------------------------------------
def unroll_list(e: Expr, elems: Sequence[sp.Basic], accums: Optional[Sequence[sp.Basic]] = None,
                new_elem: Optional[sp.Basic] = None, node_budget: int = DEFAULT_NODE_BUDGET) -> SymTerm:
    ex = SymbolicExecutor(xs=elems, accums=accums, new_elem=new_elem, node_budget=node_budget)
    value = ex.run(e)
    term = SymTerm.of(value, ex.side_conditions)
    if term.expr.has(sp.Piecewise, sp.ITE) and node_count(term.expr) > node_budget:
        raise UnrollBudgetError(f"symbolic term exceeded {node_budget} nodes")
    return term


def unroll(e: Expr, k: int, elem_prefix: str = ELEM_PREFIX,
           node_budget: int = DEFAULT_NODE_BUDGET) -> Tuple[SymTerm, FrozenSet[sp.Symbol]]:
    """
    Bind xs to [_x1 .. _xk] and execute `e`. Extra arguments stay free.
    Returns the canonical term and the element indeterminates.
    """
    if k < 0:
        raise ValueError(f"unroll depth must be nonnegative, got {k}")
    elems = elem_symbols(k, elem_prefix)
    return unroll_list(e, elems, node_budget=node_budget), frozenset(elems)


def to_sympy(e: Expr, node_budget: int = DEFAULT_NODE_BUDGET) -> sp.Basic:
    """Translate a list-free expression (online or mixed) into a sympy term, uncanonicalized."""
    return SymbolicExecutor(node_budget=node_budget).run(e)
