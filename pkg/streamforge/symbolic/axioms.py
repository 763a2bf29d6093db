# streamforge/symbolic/axioms.py
"""
Combinator axioms relating a fold or length over xs ++ [x] to the same
combinator over xs.

The appended element is pushed through any chain of map and filter layers: a
map rewrites the element, a filter turns the list into a case split on the
element's predicate. The consumer at the top then folds the cases back into an
expression over the shorter list.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Union

from streamforge.errors import AxiomError, EvalError
from streamforge.evaluation.concrete import Env, evaluate
from streamforge.ir.syntax import Expr, Filter, Foldl, Ite, Lambda, Length, Map, Snoc, call, num
from streamforge.ir.tools import apply_fn, beta_reduce, children, free_variables, is_list_term, list_root
from streamforge.symbolic.formula import Axiom, SymFormula
from streamforge.utils.util import random_extras, random_list, random_value


# ------------------------------------------------------------------
# Case trees for a list with one element appended
# ------------------------------------------------------------------
@dataclass(frozen=True)
class _Appended:
    prefix: Expr
    elem: Expr


@dataclass(frozen=True)
class _Unchanged:
    lst: Expr


@dataclass(frozen=True)
class _Branch:
    cond: Expr
    then: "_Case"
    orelse: "_Case"


_Case = Union[_Appended, _Unchanged, _Branch]


def _cases(lst: Expr) -> _Case:
    match lst:
        case Snoc(prefix, elem):
            return _Appended(prefix, elem)
        case Map(fn, inner):
            return _map_case(fn, _cases(inner))
        case Filter(fn, inner):
            return _filter_case(fn, _cases(inner))
    raise AxiomError(f"list {type(lst).__name__} does not end in an appended element")


def _map_case(fn: Expr, case: _Case) -> _Case:
    match case:
        case _Appended(prefix, elem):
            return _Appended(Map(fn, prefix), apply_fn(fn, elem))
        case _Unchanged(lst):
            return _Unchanged(Map(fn, lst))
        case _Branch(cond, then, orelse):
            return _Branch(cond, _map_case(fn, then), _map_case(fn, orelse))


def _filter_case(fn: Expr, case: _Case) -> _Case:
    match case:
        case _Appended(prefix, elem):
            kept = Filter(fn, prefix)
            return _Branch(apply_fn(fn, elem), _Appended(kept, elem), _Unchanged(kept))
        case _Unchanged(lst):
            return _Unchanged(Filter(fn, lst))
        case _Branch(cond, then, orelse):
            return _Branch(cond, _filter_case(fn, then), _filter_case(fn, orelse))


def _fold_case(fn: Expr, init: Expr, case: _Case) -> Expr:
    match case:
        case _Appended(prefix, elem):
            return apply_fn(fn, Foldl(fn, init, prefix), elem)
        case _Unchanged(lst):
            return Foldl(fn, init, lst)
        case _Branch(cond, then, orelse):
            return Ite(cond, _fold_case(fn, init, then), _fold_case(fn, init, orelse))


def _length_case(case: _Case) -> Expr:
    match case:
        case _Appended(prefix, _):
            return call("+", Length(prefix), num(1))
        case _Unchanged(lst):
            return Length(lst)
        case _Branch(cond, _Appended(a, _), _Unchanged(b)) if a == b:
            return call("+", Length(a), Ite(cond, num(1), num(0)))
        case _Branch(cond, then, orelse):
            return Ite(cond, _length_case(then), _length_case(orelse))


def push_snoc(term: Expr) -> Expr:
    """Right-hand side of the axiom for a fold or length over an appended list."""
    if not (is_list_term(term) and isinstance(list_root(term.lst), Snoc)):
        raise AxiomError("axioms only exist for folds and lengths over an appended list")
    case = _cases(term.lst)
    if isinstance(term, Foldl):
        return beta_reduce(_fold_case(term.fn, term.init, case))
    return _length_case(case)


# ------------------------------------------------------------------
# Instantiation
# ------------------------------------------------------------------
def snoc_terms(e: Expr) -> Iterator[Expr]:
    """Top-level list terms over an appended list; list terms and lambdas are not entered."""
    if is_list_term(e):
        if isinstance(list_root(e.lst), Snoc):
            yield e
        return
    if isinstance(e, Lambda):
        return
    for kid in children(e):
        yield from snoc_terms(kid)


def _sides(psi: SymFormula) -> Iterable[Expr]:
    for eq in psi.equalities:
        for side in (eq.lhs, eq.rhs):
            if not eq.symbolic:
                yield side


def instantiate_axioms(psi: SymFormula, checks: int = 50, rng: Optional[random.Random] = None,
                       logger=None) -> List[Axiom]:
    """
    One axiom per distinct appended-list term of `psi`, closed under the terms
    that new right-hand sides mention. Each axiom is tested on `checks` random
    lists before it is returned.
    """
    rng = rng or random.Random(0)
    pending: List[Expr] = []
    for side in _sides(psi):
        for t in snoc_terms(beta_reduce(side)):
            if t not in pending:
                pending.append(t)
    axioms: List[Axiom] = []
    seen = set()
    while pending:
        term = pending.pop(0)
        if term in seen:
            continue
        seen.add(term)
        axiom = Axiom(term, push_snoc(term))
        validate_axiom(axiom, checks, rng)
        if logger is not None:
            logger.log(f"[Axioms] {axiom}", level="DEBUG")
        axioms.append(axiom)
        for t in snoc_terms(axiom.rhs):
            if t not in seen and t not in pending:
                pending.append(t)
    return axioms


def validate_axiom(axiom: Axiom, checks: int, rng: random.Random) -> None:
    names = sorted(free_variables(axiom.lhs) | free_variables(axiom.rhs))
    for _ in range(checks):
        xs = tuple(random_list(rng, 0, 6))
        env = Env(names=random_extras(rng, names), xs=xs, new_elem=random_value(rng))
        left = _try_eval(axiom.lhs, env)
        right = _try_eval(axiom.rhs, env)
        if left != right:
            raise AxiomError(f"axiom {axiom} fails on xs={list(map(str, xs))}, x={env.new_elem}")


def _try_eval(e: Expr, env: Env):
    try:
        return evaluate(e, env)
    except EvalError as exc:
        return ("error", type(exc).__name__)


__all__ = ["push_snoc", "snoc_terms", "instantiate_axioms", "validate_axiom"]
