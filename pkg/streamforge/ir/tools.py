# streamforge/ir/tools.py
"""
Structural utilities over the syntax trees: traversal, free variables,
capture-avoiding substitution, beta reduction and list-expression discovery.
"""
from __future__ import annotations

from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Set, Tuple

from streamforge.errors import IRTypeError
from streamforge.ir.syntax import (
    LIST_NODES, AccumVar, Apply, Builtin, Expr, Filter, Foldl, Hole, Ite, Lambda, Length, Let,
    ListVar, Map, OfflineProgram, Snoc, Unknown, Var,
)


# ------------------------------------------------------------------
# Traversal
# ------------------------------------------------------------------
def children(e: Expr) -> Tuple[Expr, ...]:
    match e:
        case Snoc(lst, elem):
            return (lst, elem)
        case Map(fn, lst) | Filter(fn, lst):
            return (fn, lst)
        case Foldl(fn, init, lst):
            return (fn, init, lst)
        case Length(lst):
            return (lst,)
        case Apply(fn, args):
            return (fn, *args)
        case Ite(cond, then, orelse):
            return (cond, then, orelse)
        case Lambda(_, body):
            return (body,)
        case Let(_, bound, body):
            return (bound, body)
        case _:
            return ()


def rebuild(e: Expr, kids: Iterable[Expr]) -> Expr:
    kids = tuple(kids)
    match e:
        case Snoc():
            return Snoc(*kids)
        case Map():
            return Map(*kids)
        case Filter():
            return Filter(*kids)
        case Foldl():
            return Foldl(*kids)
        case Length():
            return Length(*kids)
        case Apply():
            return Apply(kids[0], kids[1:])
        case Ite():
            return Ite(*kids)
        case Lambda(params, _):
            return Lambda(params, kids[0])
        case Let(name, _, _):
            return Let(name, *kids)
        case _:
            return e


def walk(e: Expr) -> Iterator[Expr]:
    """Pre-order traversal, lambda bodies included."""
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def transform(e: Expr, fn: Callable[[Expr], Expr]) -> Expr:
    """Bottom-up rewrite; not binder aware, so only use it for placeholders and accumulators."""
    kids = children(e)
    if kids:
        e = rebuild(e, (transform(k, fn) for k in kids))
    return fn(e)


def size(e: Expr) -> int:
    if isinstance(e, Apply):
        head = 0 if isinstance(e.fn, Builtin) else size(e.fn)
        return 1 + head + sum(size(a) for a in e.args)
    if isinstance(e, Builtin):
        return 1
    return 1 + sum(size(k) for k in children(e))


# ------------------------------------------------------------------
# Variables
# ------------------------------------------------------------------
def free_variables(e: Expr) -> FrozenSet[str]:
    match e:
        case Var(name):
            return frozenset({name})
        case Lambda(params, body):
            return free_variables(body) - set(params)
        case Let(name, bound, body):
            return free_variables(bound) | (free_variables(body) - {name})
        case _:
            out: Set[str] = set()
            for kid in children(e):
                out |= free_variables(kid)
            return frozenset(out)


def bound_names(e: Expr) -> FrozenSet[str]:
    out: Set[str] = set()
    for node in walk(e):
        if isinstance(node, Lambda):
            out.update(node.params)
        elif isinstance(node, Let):
            out.add(node.name)
    return frozenset(out)


def uses_list_var(e: Expr) -> bool:
    return any(isinstance(node, ListVar) for node in walk(e))


def accum_indices(e: Expr) -> List[int]:
    return sorted({node.index for node in walk(e) if isinstance(node, AccumVar)})


def hole_ids(e: Expr) -> List[int]:
    return sorted({node.id for node in walk(e) if isinstance(node, Hole)})


def unknown_ids(e: Expr) -> List[int]:
    return sorted({node.id for node in walk(e) if isinstance(node, Unknown)})


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    i = 1
    while f"{base}_{i}" in avoid:
        i += 1
    return f"{base}_{i}"


def rename_accums(e: Expr, mapping: Dict[int, int]) -> Expr:
    return transform(e, lambda n: AccumVar(mapping[n.index]) if isinstance(n, AccumVar) else n)


def fill_placeholders(e: Expr, holes: Dict[int, Expr] = None, unknowns: Dict[int, Expr] = None) -> Expr:
    holes = holes or {}
    unknowns = unknowns or {}

    def fill(node: Expr) -> Expr:
        if isinstance(node, Hole) and node.id in holes:
            return holes[node.id]
        if isinstance(node, Unknown) and node.id in unknowns:
            return unknowns[node.id]
        return node

    return transform(e, fill)


# ------------------------------------------------------------------
# Substitution
# ------------------------------------------------------------------
def expr_kind(e: Expr) -> str:
    if isinstance(e, LIST_NODES):
        return "list"
    if isinstance(e, (Builtin, Lambda)):
        return "fn"
    if isinstance(e, (Var, Hole)):
        return "any"
    return "scalar"


def substitute(e: Expr, target: Expr, replacement: Expr) -> Expr:
    """
    Replace every occurrence of `target` (a variable or any sub-expression) in `e`
    by `replacement`. Lambda parameters that would capture a free variable of the
    replacement are renamed; occurrences shadowed by a binder are left alone.
    """
    kt, kr = expr_kind(target), expr_kind(replacement)
    if "any" not in (kt, kr) and kt != kr:
        raise IRTypeError(f"cannot substitute a {kr} expression for a {kt} expression")
    return _subst(e, target, replacement, free_variables(target), free_variables(replacement))


def _subst(e: Expr, target: Expr, repl: Expr, target_free: FrozenSet[str],
           repl_free: FrozenSet[str]) -> Expr:
    if e == target:
        return repl
    if isinstance(e, Lambda):
        if target_free & set(e.params):
            return e
        params, body = list(e.params), e.body
        clash = set(params) & repl_free
        if clash:
            avoid = set(params) | repl_free | free_variables(body) | bound_names(body)
            for i, p in enumerate(params):
                if p in clash:
                    q = fresh_name(p, avoid)
                    avoid.add(q)
                    body = _subst(body, Var(p), Var(q), frozenset({p}), frozenset({q}))
                    params[i] = q
        return Lambda(tuple(params), _subst(body, target, repl, target_free, repl_free))
    if isinstance(e, Let):
        bound = _subst(e.bound, target, repl, target_free, repl_free)
        if e.name in target_free:
            return Let(e.name, bound, e.body)
        name, body = e.name, e.body
        if name in repl_free:
            name = fresh_name(e.name, repl_free | free_variables(body) | bound_names(body))
            body = _subst(body, Var(e.name), Var(name), frozenset({e.name}), frozenset({name}))
        return Let(name, bound, _subst(body, target, repl, target_free, repl_free))
    kids = children(e)
    if not kids:
        return e
    return rebuild(e, (_subst(k, target, repl, target_free, repl_free) for k in kids))


def beta_reduce(e: Expr) -> Expr:
    """Inline every application of a literal lambda."""
    kids = children(e)
    if kids:
        e = rebuild(e, (beta_reduce(k) for k in kids))
    if isinstance(e, Apply) and isinstance(e.fn, Lambda):
        lam_ = e.fn
        if len(lam_.params) != len(e.args):
            raise IRTypeError(f"lambda expects {len(lam_.params)} arguments, got {len(e.args)}")
        avoid: Set[str] = set(lam_.params) | free_variables(lam_.body) | bound_names(lam_.body)
        for arg in e.args:
            avoid |= free_variables(arg)
        body = lam_.body
        staged = []
        for p in lam_.params:
            q = fresh_name(p, avoid)
            avoid.add(q)
            body = substitute(body, Var(p), Var(q))
            staged.append(q)
        for q, arg in zip(staged, e.args):
            body = substitute(body, Var(q), arg)
        return beta_reduce(body)
    return e


def apply_fn(fn: Expr, *args: Expr) -> Expr:
    """Build fn(args) and inline it when fn is a lambda."""
    return beta_reduce(Apply(fn, tuple(args)))


# ------------------------------------------------------------------
# List expressions
# ------------------------------------------------------------------
def list_root(lst: Expr) -> Expr:
    while isinstance(lst, (Map, Filter)):
        lst = lst.lst
    return lst


def is_list_expression(e: Expr) -> bool:
    """A Foldl/Length whose list argument is xs under zero or more Map/Filter layers."""
    return isinstance(e, (Foldl, Length)) and isinstance(list_root(e.lst), ListVar)


def is_list_term(e: Expr) -> bool:
    """Like is_list_expression, but the chain may also bottom out in a snoc."""
    return isinstance(e, (Foldl, Length)) and isinstance(list_root(e.lst), (ListVar, Snoc))


def contains_list_expression(e: Expr) -> bool:
    return any(is_list_expression(node) for node in walk(e))


def list_expressions(p: OfflineProgram) -> List[Expr]:
    """
    Every closed list expression of the body. A combinator's function and initial
    value are searched before the combinator itself is recorded; duplicates keep
    their first position.
    """
    found: List[Expr] = []

    def visit(e: Expr, bound: FrozenSet[str]):
        if isinstance(e, Lambda):
            visit(e.body, bound | set(e.params))
            return
        for kid in children(e):
            visit(kid, bound)
        if is_list_expression(e) and not (free_variables(e) & bound) and e not in found:
            found.append(e)

    visit(p.body, frozenset())
    return found
