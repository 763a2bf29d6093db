# streamforge/ir/parser.py
"""
Reader for the s-expression surface syntax.

    program := (program (xs name*) expr)
    scheme  := (scheme (init rational*) [(args name*)] (update (y1 .. yn) x (tuple expr*)))

Let bindings are inlined once the whole body has been read. Errors carry the
line and column of the offending token.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from streamforge.errors import ParseError
from streamforge.ir.syntax import (
    BUILTINS, KEYWORDS, LIST_VAR_NAME, NEW_ELEM_NAME, XS, AccumVar, Apply, Builtin, Const, Expr,
    Filter, Foldl, Hole, Ite, Lambda, Length, Let, Map, NewElem, OfflineProgram, OnlineScheme,
    Unknown, Var, accepts_arity,
)
from streamforge.ir.tools import children, free_variables, rebuild, substitute, walk

_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")
_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_NAME = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")
_ACCUM = re.compile(r"^y(\d+)$")


# ------------------------------------------------------------------
# Reader: text -> nested atoms
# ------------------------------------------------------------------
@dataclass(frozen=True)
class Atom:
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class Form:
    items: Tuple["SExpr", ...]
    line: int
    col: int


SExpr = Union[Atom, Form]


def read_sexprs(text: str) -> List[SExpr]:
    stack: List[Tuple[List[SExpr], int, int]] = [([], 0, 0)]
    line, line_start = 1, 0
    for match in _TOKEN.finditer(text):
        tok = match.group()
        col = match.start() - line_start + 1
        if tok == "(":
            stack.append(([], line, col))
        elif tok == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", line, col)
            items, l0, c0 = stack.pop()
            stack[-1][0].append(Form(tuple(items), l0, c0))
        elif not tok[0].isspace() and tok[0] != ";":
            stack[-1][0].append(Atom(tok, line, col))
        newlines = tok.count("\n")
        if newlines:
            line += newlines
            line_start = match.start() + tok.rfind("\n") + 1
    if len(stack) != 1:
        _, l0, c0 = stack[-1]
        raise ParseError("unexpected end of input: unclosed '('", l0, c0)
    return stack[0][0]


def _read_one(text: str, head: str) -> Form:
    forms = read_sexprs(text)
    if len(forms) != 1:
        raise ParseError(f"expected exactly one ({head} ...) form, found {len(forms)}")
    form = forms[0]
    if not isinstance(form, Form) or not form.items or _atom(form.items[0]) != head:
        raise ParseError(f"expected ({head} ...)", form.line, form.col)
    return form


def _atom(s: SExpr) -> Optional[str]:
    return s.text if isinstance(s, Atom) else None


def _fail(message: str, at: SExpr):
    raise ParseError(message, at.line, at.col)


def _rational(s: SExpr) -> Fraction:
    text = _atom(s)
    if text is None or not _RATIONAL.match(text):
        _fail(f"expected a rational literal, got {_show(s)}", s)
    if "/" in text and int(text.split("/")[1]) == 0:
        _fail("zero denominator in rational literal", s)
    return Fraction(text)


def _show(s: SExpr) -> str:
    return repr(s.text) if isinstance(s, Atom) else "a list"


def reserved(name: str) -> bool:
    return (name in BUILTINS or name in KEYWORDS or name in (LIST_VAR_NAME, NEW_ELEM_NAME)
            or bool(_ACCUM.match(name)))


# ------------------------------------------------------------------
# Expression reader
# ------------------------------------------------------------------
class _ExprReader:
    """
    Turns forms into AST nodes. `scope` maps names to how they were bound:
    'extra', 'param', 'let-fn', 'let', 'accum', 'elem'.
    """

    def __init__(self, online: bool, accum_names: Sequence[str] = (), elem_name: str = NEW_ELEM_NAME):
        self.online = online
        self.accum_index = {name: i + 1 for i, name in enumerate(accum_names)}
        self.elem_name = elem_name

    # -- scalar positions ------------------------------------------
    def expr(self, s: SExpr, scope: Dict[str, str]) -> Expr:
        if isinstance(s, Atom):
            return self._atom_expr(s, scope)
        if not s.items:
            _fail("empty form", s)
        head = s.items[0]
        name = _atom(head)
        args = s.items[1:]
        if name is not None and scope.get(name) not in ("let-fn",) and name in scope:
            _fail(f"'{name}' is not a function", head)
        if name == "ite":
            if len(args) != 3:
                _fail("ite takes exactly three arguments", s)
            return Ite(*(self.expr(a, scope) for a in args))
        if name == "let":
            return self._let(s, scope)
        if name in ("foldl", "length", "map", "filter", "xs"):
            if self.online:
                _fail("list combinators are not allowed in an online program", s)
            if name == "foldl":
                if len(args) != 3:
                    _fail("foldl takes a function, an initial value and a list", s)
                return Foldl(self.fn(args[0], scope, 2), self.expr(args[1], scope), self.lexpr(args[2], scope))
            if name == "length":
                if len(args) != 1:
                    _fail("length takes one list", s)
                return Length(self.lexpr(args[0], scope))
            _fail(f"list expression ({name} ...) used in a scalar position", s)
        if name == "lambda":
            _fail("lambda is only allowed in function position", s)
        if name == "hole" and self.online:
            return Hole(int(_rational(args[0]))) if len(args) == 1 else _fail("hole takes an id", s)
        if name == "??" and self.online:
            return Unknown(int(_rational(args[0]))) if len(args) == 1 else _fail("?? takes an id", s)
        if name in BUILTINS:
            if not args:
                _fail(f"'{name}' needs at least one argument", s)
            if name == "pow":
                return self._pow(s, scope)
            if not accepts_arity(name, len(args)):
                _fail(f"'{name}' does not take {len(args)} arguments", s)
            return Apply(Builtin(name), tuple(self.expr(a, scope) for a in args))
        if isinstance(head, Form) or scope.get(name) == "let-fn":
            fn = self.fn(head, scope, len(args))
            return Apply(fn, tuple(self.expr(a, scope) for a in args))
        if name == "snoc":
            _fail("snoc is internal and cannot be written in programs", head)
        _fail(f"unknown builtin '{name}'", head)

    def _atom_expr(self, s: Atom, scope: Dict[str, str]) -> Expr:
        text = s.text
        if _RATIONAL.match(text):
            return Const(_rational(s))
        kind = scope.get(text)
        if kind in ("extra", "param", "let"):
            return Var(text)
        if kind == "let-fn":
            _fail(f"'{text}' names a function and cannot be used as a value", s)
        if self.online:
            if text in self.accum_index and kind is None:
                return AccumVar(self.accum_index[text])
            if text == self.elem_name and kind is None:
                return NewElem()
        if text == LIST_VAR_NAME:
            _fail("list variable xs used outside a list position", s)
        if text in BUILTINS:
            _fail(f"builtin '{text}' used as a value", s)
        if text in KEYWORDS:
            _fail(f"keyword '{text}' used as a value", s)
        _fail(f"free variable '{text}'", s)

    def _pow(self, s: Form, scope: Dict[str, str]) -> Expr:
        args = s.items[1:]
        if len(args) != 2:
            _fail("pow takes a base and an exponent", s)
        exp = _atom(args[1])
        if exp is None or not exp.isdigit():
            _fail("pow exponent must be a nonnegative integer literal", args[1])
        return Apply(Builtin("pow"), (self.expr(args[0], scope), Const(int(exp))))

    def _let(self, s: Form, scope: Dict[str, str]) -> Expr:
        args = s.items[1:]
        if len(args) != 2 or not isinstance(args[0], Form) or len(args[0].items) != 2:
            _fail("let takes ((name value) body)", s)
        name_s, bound_s = args[0].items
        name = self._binder(name_s)
        if isinstance(bound_s, Form) and _atom(bound_s.items[0] if bound_s.items else None) == "lambda":
            bound = self.fn(bound_s, scope, None)
            inner = {**scope, name: "let-fn"}
        else:
            bound = self.expr(bound_s, scope)
            inner = {**scope, name: "let"}
        return Let(name, bound, self.expr(args[1], inner))

    def _binder(self, s: SExpr) -> str:
        name = _atom(s)
        if name is None or not _NAME.match(name):
            _fail(f"expected a name, got {_show(s)}", s)
        if name in BUILTINS or name in KEYWORDS or name == LIST_VAR_NAME:
            _fail(f"'{name}' is reserved", s)
        if self.online and (name == self.elem_name or name in self.accum_index):
            _fail(f"'{name}' is reserved in an online program", s)
        return name

    # -- function positions ----------------------------------------
    def fn(self, s: SExpr, scope: Dict[str, str], arity: Optional[int]) -> Expr:
        name = _atom(s)
        if name is not None:
            if scope.get(name) == "let-fn":
                return Var(name)
            if name in BUILTINS:
                if name == "pow":
                    _fail("pow needs a literal exponent and cannot be passed as a function", s)
                if arity is not None and not accepts_arity(name, arity):
                    _fail(f"'{name}' cannot be used as a {arity}-argument function", s)
                return Builtin(name)
            _fail(f"expected a function, got '{name}'", s)
        if not s.items or _atom(s.items[0]) != "lambda":
            _fail("expected a builtin name or (lambda (params) body)", s)
        if len(s.items) != 3 or not isinstance(s.items[1], Form) or not s.items[1].items:
            _fail("lambda takes ((params) body)", s)
        params = tuple(self._binder(p) for p in s.items[1].items)
        if len(set(params)) != len(params):
            _fail("duplicate lambda parameter", s.items[1])
        if arity is not None and len(params) != arity:
            _fail(f"expected a {arity}-argument function, lambda takes {len(params)}", s)
        inner = {**scope, **{p: "param" for p in params}}
        return Lambda(params, self.expr(s.items[2], inner))

    # -- list positions --------------------------------------------
    def lexpr(self, s: SExpr, scope: Dict[str, str]) -> Expr:
        if _atom(s) == LIST_VAR_NAME:
            return XS
        if isinstance(s, Form) and s.items and _atom(s.items[0]) in ("map", "filter"):
            if len(s.items) != 3:
                _fail(f"{s.items[0].text} takes a function and a list", s)
            fn = self.fn(s.items[1], scope, 1)
            inner = self.lexpr(s.items[2], scope)
            return Map(fn, inner) if s.items[0].text == "map" else Filter(fn, inner)
        _fail(f"expected a list expression (xs, map or filter), got {_show(s)}", s)


# ------------------------------------------------------------------
# Let desugaring and post-checks
# ------------------------------------------------------------------
def desugar_lets(e: Expr) -> Expr:
    if isinstance(e, Let):
        return desugar_lets(substitute(e.body, Var(e.name), desugar_lets(e.bound)))
    kids = children(e)
    if not kids:
        return e
    return rebuild(e, (desugar_lets(k) for k in kids))


def _check_functions(e: Expr) -> None:
    for node in walk(e):
        fn = None
        if isinstance(node, (Map, Filter, Foldl, Apply)):
            fn = node.fn
        if fn is not None and not isinstance(fn, (Builtin, Lambda)):
            raise ParseError(f"'{getattr(fn, 'name', fn)}' is not a function")
        if isinstance(node, Apply) and isinstance(node.fn, Lambda) and len(node.fn.params) != len(node.args):
            raise ParseError(f"lambda expects {len(node.fn.params)} arguments, got {len(node.args)}")
        if isinstance(node, Foldl) and isinstance(node.fn, Lambda) and len(node.fn.params) != 2:
            raise ParseError("foldl needs a two-argument function")
        if isinstance(node, (Map, Filter)) and isinstance(node.fn, Lambda) and len(node.fn.params) != 1:
            raise ParseError(f"{type(node).__name__.lower()} needs a one-argument function")


def _arg_names(form: SExpr, first: Optional[str]) -> Tuple[str, ...]:
    if not isinstance(form, Form):
        _fail("expected an argument list", form)
    names = [_atom(a) for a in form.items]
    if first is not None and (not names or names[0] != first):
        _fail(f"argument list must start with {first}", form)
    extras = names[1:] if first is not None else names
    for name, at in zip(extras, form.items[len(names) - len(extras):]):
        if name is None or not _NAME.match(name):
            _fail(f"expected an argument name, got {_show(at)}", at)
        if reserved(name):
            _fail(f"'{name}' is reserved and cannot be an argument name", at)
    if len(set(extras)) != len(extras):
        _fail("duplicate argument name", form)
    return tuple(extras)


# ------------------------------------------------------------------
# Entry points
# ------------------------------------------------------------------
def parse_program(text: str) -> OfflineProgram:
    form = _read_one(text, "program")
    if len(form.items) != 3:
        _fail("program takes an argument list and a body", form)
    extras = _arg_names(form.items[1], LIST_VAR_NAME)
    body_s = form.items[2]
    if _atom(body_s) == LIST_VAR_NAME or (
            isinstance(body_s, Form) and body_s.items and _atom(body_s.items[0]) in ("map", "filter")):
        _fail("program body must be scalar-typed", body_s)
    scope = {name: "extra" for name in extras}
    body = desugar_lets(_ExprReader(online=False).expr(body_s, scope))
    _check_functions(body)
    stray = free_variables(body) - set(extras)
    if stray:
        raise ParseError(f"free variable '{sorted(stray)[0]}'")
    return OfflineProgram(extras, body)


def parse_scheme(text: str) -> OnlineScheme:
    form = _read_one(text, "scheme")
    parts = {(_atom(item.items[0]) if isinstance(item, Form) and item.items else None): item
             for item in form.items[1:]}
    if ("init" not in parts or "update" not in parts or len(parts) != len(form.items) - 1
            or not set(parts) <= {"init", "args", "update"}):
        _fail("scheme takes (init ...), optional (args ...) and (update ...)", form)
    init = tuple(_rational(c) for c in parts["init"].items[1:])
    extras = _arg_names(Form(parts["args"].items[1:], parts["args"].line, parts["args"].col), None) \
        if "args" in parts else ()
    update = parts["update"]
    if len(update.items) != 4:
        _fail("update takes (accumulators) element (tuple ...)", update)
    accum_form, elem_s, tuple_s = update.items[1:]
    if not isinstance(accum_form, Form):
        _fail("expected the accumulator list", accum_form)
    accum_names = [_atom(a) for a in accum_form.items]
    if any(n is None or not _NAME.match(n) for n in accum_names) or len(set(accum_names)) != len(accum_names):
        _fail("accumulator names must be distinct names", accum_form)
    elem_name = _atom(elem_s)
    if elem_name is None or not _NAME.match(elem_name) or elem_name in accum_names:
        _fail("expected the element name", elem_s)
    if not isinstance(tuple_s, Form) or not tuple_s.items or _atom(tuple_s.items[0]) != "tuple":
        _fail("update body must be (tuple ...)", tuple_s)
    reader = _ExprReader(online=True, accum_names=accum_names, elem_name=elem_name)
    scope = {name: "extra" for name in extras}
    body = tuple(desugar_lets(reader.expr(e, scope)) for e in tuple_s.items[1:])
    for component in body:
        _check_functions(component)
    if len(body) != len(accum_names) or len(init) != len(body):
        _fail(f"arity mismatch: {len(init)} initial values, {len(accum_names)} accumulators, "
              f"{len(body)} components", form)
    return OnlineScheme(init, body, extras)


def parse_online_expr(text: str, arity: int, extra_args: Sequence[str] = ()) -> Expr:
    """Read one online expression over y1..y<arity>, x and the extra arguments."""
    forms = read_sexprs(text)
    if len(forms) != 1:
        raise ParseError("expected exactly one expression")
    reader = _ExprReader(online=True, accum_names=[f"y{i}" for i in range(1, arity + 1)])
    expr = desugar_lets(reader.expr(forms[0], {name: "extra" for name in extra_args}))
    _check_functions(expr)
    return expr
