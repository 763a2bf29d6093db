# streamforge/ir/syntax.py
"""
Abstract syntax shared by offline programs, online schemes and sketches.

Every node is a frozen dataclass, so structural equality and hashing come for
free and trees can be shared between threads.

Offline expressions use Const, Var, ListVar, Map, Filter, Foldl, Length, Apply,
Ite and Lambda. Online expressions drop the list forms and add AccumVar (y_i)
and NewElem (x). Snoc (xs ++ [x]) only appears inside specifications built by
the symbolic layer. Hole, Unknown and Box are placeholders for sketches,
templates and implicate queries.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

from streamforge.errors import IRTypeError


# ------------------------------------------------------------------
# Builtins
# ------------------------------------------------------------------
@dataclass(frozen=True)
class BuiltinSpec:
    name: str
    min_arity: int
    max_arity: Optional[int]   # None = variadic
    result: str                # "num" | "bool"
    operands: str              # "num" | "bool"


BUILTINS: Dict[str, BuiltinSpec] = {
    "+": BuiltinSpec("+", 1, None, "num", "num"),
    "-": BuiltinSpec("-", 2, 2, "num", "num"),
    "*": BuiltinSpec("*", 1, None, "num", "num"),
    "/": BuiltinSpec("/", 2, 2, "num", "num"),
    "neg": BuiltinSpec("neg", 1, 1, "num", "num"),
    "min": BuiltinSpec("min", 2, None, "num", "num"),
    "max": BuiltinSpec("max", 2, None, "num", "num"),
    "abs": BuiltinSpec("abs", 1, 1, "num", "num"),
    "pow": BuiltinSpec("pow", 2, 2, "num", "num"),
    "<": BuiltinSpec("<", 2, 2, "bool", "num"),
    "<=": BuiltinSpec("<=", 2, 2, "bool", "num"),
    ">": BuiltinSpec(">", 2, 2, "bool", "num"),
    ">=": BuiltinSpec(">=", 2, 2, "bool", "num"),
    "=": BuiltinSpec("=", 2, 2, "bool", "num"),
    "and": BuiltinSpec("and", 1, None, "bool", "bool"),
    "or": BuiltinSpec("or", 1, None, "bool", "bool"),
    "not": BuiltinSpec("not", 1, 1, "bool", "bool"),
}

KEYWORDS = frozenset({
    "program", "scheme", "init", "update", "tuple", "args", "lambda", "let",
    "ite", "foldl", "map", "filter", "length", "hole", "??", "box", "snoc",
})

LIST_VAR_NAME = "xs"
NEW_ELEM_NAME = "x"


def accepts_arity(name: str, arity: int) -> bool:
    spec = BUILTINS[name]
    return arity >= spec.min_arity and (spec.max_arity is None or arity <= spec.max_arity)


# ------------------------------------------------------------------
# Nodes
# ------------------------------------------------------------------
@dataclass(frozen=True)
class Const:
    value: Fraction

    def __post_init__(self):
        if isinstance(self.value, bool) or not isinstance(self.value, (int, Fraction)):
            raise IRTypeError(f"constant must be an exact rational, got {self.value!r}")
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class ListVar:
    pass


@dataclass(frozen=True)
class Snoc:
    lst: "Expr"
    elem: "Expr"


@dataclass(frozen=True)
class Builtin:
    name: str

    def __post_init__(self):
        if self.name not in BUILTINS:
            raise IRTypeError(f"unknown builtin '{self.name}'")


@dataclass(frozen=True)
class Lambda:
    params: Tuple[str, ...]
    body: "Expr"


@dataclass(frozen=True)
class Map:
    fn: "Fn"
    lst: "Expr"


@dataclass(frozen=True)
class Filter:
    fn: "Fn"
    lst: "Expr"


@dataclass(frozen=True)
class Foldl:
    fn: "Fn"
    init: "Expr"
    lst: "Expr"


@dataclass(frozen=True)
class Length:
    lst: "Expr"


@dataclass(frozen=True)
class Apply:
    fn: "Fn"
    args: Tuple["Expr", ...]


@dataclass(frozen=True)
class Ite:
    cond: "Expr"
    then: "Expr"
    orelse: "Expr"


@dataclass(frozen=True)
class Let:
    name: str
    bound: "Expr"
    body: "Expr"


@dataclass(frozen=True)
class AccumVar:
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise IRTypeError(f"accumulator index must be positive, got {self.index}")


@dataclass(frozen=True)
class NewElem:
    pass


@dataclass(frozen=True)
class Hole:
    id: int


@dataclass(frozen=True)
class Unknown:
    id: int


@dataclass(frozen=True)
class Box:
    pass


Fn = Union[Builtin, Lambda]
Expr = Union[Const, Var, ListVar, Snoc, Map, Filter, Foldl, Length, Apply, Ite, Lambda, Let,
             AccumVar, NewElem, Hole, Unknown, Box, Builtin]

LIST_NODES = (ListVar, Snoc, Map, Filter)
COMBINATOR_NODES = (ListVar, Snoc, Map, Filter, Foldl, Length)


# ------------------------------------------------------------------
# Programs and schemes
# ------------------------------------------------------------------
@dataclass(frozen=True)
class OfflineProgram:
    extra_args: Tuple[str, ...]
    body: Expr


def ensure_online(expr: Expr) -> Expr:
    """Raise IRTypeError if `expr` mentions xs or any list combinator."""
    from streamforge.ir.tools import walk

    for node in walk(expr):
        if isinstance(node, COMBINATOR_NODES):
            raise IRTypeError(f"online expression may not contain {type(node).__name__}")
    return expr


@dataclass(frozen=True)
class OnlineScheme:
    initializer: Tuple[Fraction, ...]
    body: Tuple[Expr, ...]
    extra_args: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "initializer", tuple(Fraction(c) for c in self.initializer))
        object.__setattr__(self, "body", tuple(self.body))
        object.__setattr__(self, "extra_args", tuple(self.extra_args))
        if not self.body:
            raise IRTypeError("scheme needs at least one accumulator")
        if len(self.initializer) != len(self.body):
            raise IRTypeError(
                f"initializer has {len(self.initializer)} values but the update has {len(self.body)} components")
        from streamforge.ir.tools import accum_indices

        for component in self.body:
            ensure_online(component)
            bad = [i for i in accum_indices(component) if i > len(self.body)]
            if bad:
                raise IRTypeError(f"update refers to y{bad[0]} but arity is {len(self.body)}")

    @property
    def arity(self) -> int:
        return len(self.body)


# ------------------------------------------------------------------
# Small constructors used across the package and the tests
# ------------------------------------------------------------------
XS = ListVar()
X = NewElem()


def num(value) -> Const:
    return Const(Fraction(value))


def call(name: str, *args: Expr) -> Apply:
    return Apply(Builtin(name), tuple(args))


def lam(params, body: Expr) -> Lambda:
    if isinstance(params, str):
        params = tuple(params.split())
    return Lambda(tuple(params), body)


def y(index: int) -> AccumVar:
    return AccumVar(index)
