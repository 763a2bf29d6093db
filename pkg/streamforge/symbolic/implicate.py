# streamforge/symbolic/implicate.py
from __future__ import annotations

import random
from typing import Optional

import sympy as sp

from streamforge.errors import AxiomError, EvalError, IRTypeError, UnrollBudgetError
from streamforge.evaluation.symbolic_exec import DEFAULT_NODE_BUDGET
from streamforge.evaluation.terms import BOX_SYMBOL, accum_symbol
from streamforge.ir.syntax import Expr
from streamforge.symbolic.axioms import instantiate_axioms
from streamforge.symbolic.elimination import eliminate, replace_list_exprs
from streamforge.symbolic.formula import ImplicateTemplate, SymFormula, axioms_formula
from streamforge.symbolic.translate import from_sympy
from streamforge.utils.logger import ensure_logger


def find_implicate(phi: SymFormula, template: ImplicateTemplate, axiom_checks: int = 50,
                   node_budget: int = DEFAULT_NODE_BUDGET, rng: Optional[random.Random] = None,
                   logger=None) -> SymFormula:
    """
    Conjoin phi, the template and the combinator axioms, replace list terms by
    fresh variables and eliminate them. Only equalities that define the box
    survive; anything that goes wrong yields an empty formula flagged
    incomplete.
    """
    logger = ensure_logger(logger)
    target = template.as_formula()
    try:
        axioms = instantiate_axioms(phi.conjoin(target), checks=axiom_checks, rng=rng, logger=logger)
        psi = phi.conjoin(target, axioms_formula(axioms))
        replaced, fresh = replace_list_exprs(psi, node_budget)
        logger.log(f"[Implicate] psi' = {replaced}", level="DEBUG")
        residue = eliminate(replaced, fresh, prefer_last=(accum_symbol(1), BOX_SYMBOL), logger=logger)
    except (AxiomError, UnrollBudgetError, EvalError, IRTypeError) as exc:
        logger.log(f"[Implicate] no implicate: {exc}", level="DEBUG")
        return SymFormula(incomplete=True)
    kept = tuple(eq for eq in residue.box_equalities() if _is_online(eq.rhs))
    result = SymFormula(kept, residue.side_conditions, residue.incomplete)
    logger.log(f"[Implicate] residue = {result}", level="DEBUG")
    return result


def _is_online(term) -> bool:
    return isinstance(term, sp.Expr) and not any(s.name.startswith("_") for s in term.free_symbols)


def implicate_expr(formula: SymFormula) -> Optional[Expr]:
    """The first box definition as an online expression, if there is one."""
    for eq in formula.box_equalities():
        if _is_online(eq.rhs):
            try:
                return from_sympy(eq.rhs)
            except ValueError:
                continue
    return None
