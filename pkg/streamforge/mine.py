# streamforge/mine.py
"""
Template mining: unroll the signature and the specification on a fixed-length
list, eliminate the list elements and turn the constants of what is left into
unknowns.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import count
from typing import Dict, Iterator, List, Mapping, Optional, Set, Tuple, Union

import sympy as sp

from streamforge.errors import EvalError, UnrollBudgetError
from streamforge.evaluation.symbolic_exec import DEFAULT_NODE_BUDGET, to_sympy, unroll_list
from streamforge.evaluation.terms import (
    BOX_SYMBOL, NEW_ELEM_SYMBOL, SymTerm, accum_symbol, elem_symbols, integer_parts, is_rational_function,
    unknown_symbol,
)
from streamforge.ir.printer import print_expr
from streamforge.ir.syntax import Const, Expr, Unknown, call
from streamforge.ir.tools import fill_placeholders
from streamforge.rfs import RFS
from streamforge.symbolic.elimination import eliminate
from streamforge.symbolic.formula import Equality, SymFormula
from streamforge.symbolic.translate import from_sympy
from streamforge.utils.logger import ensure_logger

_UNKNOWN = re.compile(r"^_u(\d+)$")
ONE = Const(Fraction(1))


@dataclass(frozen=True)
class TemplateTerm:
    """coeff * basis, or sign * ??unknown * basis when `unknown` is set."""

    unknown: Optional[int]
    coeff: Fraction
    basis: Expr

    def as_expr(self) -> Expr:
        if self.unknown is None:
            return self.basis
        if self.basis == ONE:
            return Unknown(self.unknown)
        return call("*", Unknown(self.unknown), self.basis)


def _sum(terms: Tuple[TemplateTerm, ...]) -> Expr:
    if not terms:
        return Const(Fraction(0))
    head = terms[0]
    acc = call("neg", head.as_expr()) if head.coeff < 0 else head.as_expr()
    for t in terms[1:]:
        acc = call("-" if t.coeff < 0 else "+", acc, t.as_expr())
    return acc


@dataclass(frozen=True)
class Template:
    """
    Linear in its unknowns: (sum of numerator terms) / (sum of denominator
    terms), an empty denominator meaning 1.
    """

    numerator: Tuple[TemplateTerm, ...]
    denominator: Tuple[TemplateTerm, ...] = ()

    @property
    def unknowns(self) -> List[int]:
        return sorted({t.unknown for t in self.numerator + self.denominator if t.unknown is not None})

    @property
    def unknown_count(self) -> int:
        return len(self.unknowns)

    def body(self) -> Expr:
        top = _sum(self.numerator)
        if not self.denominator:
            return top
        return call("/", top, _sum(self.denominator))

    def instantiate(self, fills: Mapping[int, Expr]) -> Expr:
        return fill_placeholders(self.body(), unknowns=dict(fills))

    def as_sympy(self) -> sp.Expr:
        def side(terms):
            total = sp.Integer(0)
            for t in terms:
                total += to_sympy(t.as_expr()) * (1 if t.coeff > 0 else -1)
            return total

        top = side(self.numerator)
        return top / side(self.denominator) if self.denominator else top

    def __str__(self) -> str:
        return print_expr(self.body())


# ------------------------------------------------------------------
# Templatize
# ------------------------------------------------------------------
def _basis(monomial: sp.Expr) -> Expr:
    return ONE if monomial == 1 else from_sympy(monomial)


def _monomials(poly: sp.Poly) -> Iterator[Tuple[sp.Expr, sp.Expr]]:
    for exps, coeff in poly.terms():
        yield sp.Mul(*[g ** e for g, e in zip(poly.gens, exps)]), coeff


def _fresh_terms(poly: sp.Poly, ids: Iterator[int]) -> Tuple[TemplateTerm, ...]:
    out = []
    for monomial, coeff in _monomials(poly):
        c = Fraction(int(coeff.p), int(coeff.q))
        if monomial != 1 and abs(c) == 1:
            out.append(TemplateTerm(None, c, _basis(monomial)))
        else:
            out.append(TemplateTerm(next(ids), Fraction(1 if c > 0 else -1), _basis(monomial)))
    return tuple(out)


def _existing_terms(poly: sp.Poly, ids: Iterator[int]) -> Tuple[TemplateTerm, ...]:
    out = []
    for monomial, coeff in _monomials(poly):
        sign = -1 if coeff.could_extract_minus_sign() else 1
        core = -coeff if sign < 0 else coeff
        m = _UNKNOWN.match(core.name) if isinstance(core, sp.Symbol) else None
        if m:
            out.append(TemplateTerm(int(m.group(1)), Fraction(sign), _basis(monomial)))
        elif core.is_Rational and monomial != 1 and core == 1:
            out.append(TemplateTerm(None, Fraction(sign), _basis(monomial)))
        elif core.is_Rational:
            out.append(TemplateTerm(next(ids), Fraction(sign), _basis(monomial)))
        else:
            raise ValueError(f"coefficient {coeff} is not linear in one unknown")
    return tuple(out)


def templatize(t: Union[SymTerm, sp.Expr]) -> Template:
    """
    Constants become unknowns, except unit coefficients of non-constant
    monomials. Signs stay outside the unknowns. Already templatized terms keep
    their unknown numbering.
    """
    expr = sp.sympify(t.expr if isinstance(t, SymTerm) else t)
    unknown_syms = [s for s in expr.free_symbols if _UNKNOWN.match(s.name)]
    if unknown_syms:
        gens = sorted(expr.free_symbols - set(unknown_syms), key=lambda s: s.name) or [sp.Dummy()]
        top, bottom = sp.fraction(sp.together(expr))
        start = max(int(_UNKNOWN.match(s.name).group(1)) for s in unknown_syms) + 1
        ids = count(start)
        numerator = _existing_terms(sp.Poly(top, *gens), ids)
        denominator = () if bottom == 1 else _existing_terms(sp.Poly(bottom, *gens), ids)
        return Template(numerator, denominator)
    if not is_rational_function(expr):
        raise ValueError(f"cannot templatize non-rational term {expr}")
    p, q = integer_parts(expr)
    ids = count(1)
    numerator = _fresh_terms(p, ids)
    denominator = () if q.is_one else _fresh_terms(q, ids)
    return Template(numerator, denominator)


def exact_template(e: Expr) -> Template:
    """A zero-unknown template standing for the expression itself."""
    return Template((TemplateTerm(None, Fraction(1), e),))


# ------------------------------------------------------------------
# Mining
# ------------------------------------------------------------------
def _online_term(expr) -> bool:
    return isinstance(expr, sp.Expr) and not any(s.name.startswith("_") for s in expr.free_symbols)


def mine_expressions(phi: RFS, spec: Expr, k: int, node_budget: int = DEFAULT_NODE_BUDGET,
                     logger=None) -> List[Template]:
    """
    Unroll every signature entry on [_x1 .. _xk] and the specification on
    [_x1 .. _xk, x], eliminate the _xi and templatize each box definition left
    over. Empty when the unrolling is too large or nothing survives.
    """
    if k < 2:
        raise ValueError(f"mining needs an unroll depth of at least 2, got {k}")
    logger = ensure_logger(logger)
    elems = elem_symbols(k)
    conds: Set[sp.Expr] = set()
    eqs: List[Equality] = []
    try:
        for i, entry in enumerate(phi.entries, 1):
            term = unroll_list(entry, elems, node_budget=node_budget)
            eqs.append(Equality(accum_symbol(i), term.expr))
            conds |= term.side_conditions
        target = unroll_list(spec, elems + [NEW_ELEM_SYMBOL], node_budget=node_budget)
        eqs.append(Equality(BOX_SYMBOL, target.expr))
        conds |= target.side_conditions
        residue = eliminate(SymFormula(tuple(eqs), frozenset(conds)), elems,
                            prefer_last=(accum_symbol(1), BOX_SYMBOL), logger=logger)
    except (UnrollBudgetError, EvalError) as exc:
        logger.log(f"[Mine] k={k}: {exc}", level="DEBUG")
        return []

    templates: List[Template] = []
    for eq in residue.box_equalities():
        if not _online_term(eq.rhs):
            continue
        try:
            template = templatize(eq.rhs) if is_rational_function(eq.rhs) else exact_template(from_sympy(eq.rhs))
        except ValueError as exc:
            logger.log(f"[Mine] skipped residue {eq.rhs}: {exc}", level="DEBUG")
            continue
        if template not in templates:
            templates.append(template)
    logger.log(f"[Mine] k={k}: {len(templates)} template(s) {[str(t) for t in templates]}", level="DEBUG")
    return templates


def residue_values(template: Template, fills: Dict[int, Fraction]) -> sp.Expr:
    """The template with numeric unknowns, as a canonical sympy term."""
    values = {unknown_symbol(i): sp.Rational(v.numerator, v.denominator) for i, v in fills.items()}
    return sp.cancel(template.as_sympy().subs(values))
