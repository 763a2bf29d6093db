# streamforge/symbolic/formula.py
"""
Conjunctive formulas over equalities.

A side of an equality is either an IR expression (possibly containing opaque
list terms) or a sympy term once the list terms have been replaced.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Tuple, Union

import sympy as sp

from streamforge.evaluation.terms import BOX_SYMBOL
from streamforge.ir.printer import print_expr
from streamforge.ir.syntax import Box, Expr

Side = Union[Expr, sp.Basic]


def _show(side: Side) -> str:
    return str(side) if isinstance(side, sp.Basic) else print_expr(side)


def is_symbolic(side: Side) -> bool:
    return isinstance(side, sp.Basic)


@dataclass(frozen=True)
class Equality:
    lhs: Side
    rhs: Side

    @property
    def symbolic(self) -> bool:
        return is_symbolic(self.lhs) and is_symbolic(self.rhs)

    @property
    def defines_box(self) -> bool:
        return self.lhs == Box() or self.lhs == BOX_SYMBOL

    def __str__(self) -> str:
        return f"(= {_show(self.lhs)} {_show(self.rhs)})"


@dataclass(frozen=True)
class SymFormula:
    """An and of equalities; `incomplete` marks a formula produced by a stuck elimination."""

    equalities: Tuple[Equality, ...] = ()
    side_conditions: FrozenSet[sp.Expr] = field(default_factory=frozenset)
    incomplete: bool = False

    @classmethod
    def of(cls, equalities: Iterable[Equality], side_conditions: Iterable[sp.Expr] = (),
           incomplete: bool = False) -> "SymFormula":
        return cls(tuple(equalities), frozenset(side_conditions), incomplete)

    @property
    def is_true(self) -> bool:
        return not self.equalities

    def conjoin(self, *others: "SymFormula") -> "SymFormula":
        eqs: List[Equality] = list(self.equalities)
        conds = set(self.side_conditions)
        incomplete = self.incomplete
        for o in others:
            eqs.extend(e for e in o.equalities if e not in eqs)
            conds |= o.side_conditions
            incomplete = incomplete or o.incomplete
        return SymFormula(tuple(eqs), frozenset(conds), incomplete)

    def box_equalities(self) -> List[Equality]:
        return [e for e in self.equalities if e.defines_box]

    def __str__(self) -> str:
        if self.is_true:
            return "true"
        body = " ".join(str(e) for e in self.equalities)
        return body if len(self.equalities) == 1 else f"(and {body})"


@dataclass(frozen=True)
class ImplicateTemplate:
    """□ = rhs, where rhs is the offline specification evaluated on xs ++ [x]."""

    rhs: Expr

    def as_formula(self) -> SymFormula:
        return SymFormula((Equality(Box(), self.rhs),))


@dataclass(frozen=True)
class Axiom:
    """lhs is a combinator applied over a snoc list; rhs restates it over the shorter list."""

    lhs: Expr
    rhs: Expr

    def as_equality(self) -> Equality:
        return Equality(self.lhs, self.rhs)

    def __str__(self) -> str:
        return f"(= {print_expr(self.lhs)} {print_expr(self.rhs)})"


def axioms_formula(axioms: Iterable[Axiom]) -> SymFormula:
    return SymFormula(tuple(a.as_equality() for a in axioms))
