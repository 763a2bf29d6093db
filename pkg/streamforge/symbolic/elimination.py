# streamforge/symbolic/elimination.py
"""
List-term replacement and existential elimination over conjunctions of
polynomial equalities.

Elimination works on numerators: every equality lhs = rhs becomes the
polynomial num(lhs - rhs) = 0 and each cleared denominator is carried as a
side condition. Subterms that are not polynomial (min, max, abs, piecewise)
are abstracted as fresh symbols first and put back at the end.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import sympy as sp

from streamforge.evaluation.symbolic_exec import DEFAULT_NODE_BUDGET, SymbolicExecutor
from streamforge.evaluation.terms import BOX_SYMBOL, canonical, is_boolean, make_symbol
from streamforge.ir.syntax import Expr, Lambda, Var
from streamforge.ir.tools import beta_reduce, children, is_list_term, rebuild
from streamforge.symbolic.formula import Equality, SymFormula, is_symbolic
from streamforge.utils.util import NameSupply, natural_key


# ------------------------------------------------------------------
# List terms to fresh variables
# ------------------------------------------------------------------
def replace_list_exprs(psi: SymFormula, node_budget: int = DEFAULT_NODE_BUDGET
                       ) -> Tuple[SymFormula, Tuple[sp.Symbol, ...]]:
    """
    Replace each structurally distinct list term by one fresh variable and
    translate every side to sympy. The variables come back in creation order.
    """
    supply = NameSupply("_v")
    table: Dict[Expr, Var] = {}

    def replace(e: Expr) -> Expr:
        if is_list_term(e):
            if e not in table:
                table[e] = Var(supply.fresh())
            return table[e]
        if isinstance(e, Lambda):
            return e
        kids = children(e)
        return rebuild(e, (replace(k) for k in kids)) if kids else e

    conds: Set[sp.Expr] = set(psi.side_conditions)
    eqs: List[Equality] = []
    for eq in psi.equalities:
        sides = []
        for side in (eq.lhs, eq.rhs):
            if is_symbolic(side):
                sides.append(side)
                continue
            ex = SymbolicExecutor(node_budget=node_budget)
            sides.append(ex.run(replace(beta_reduce(side))))
            conds |= ex.side_conditions
        eqs.append(Equality(*sides))
    fresh = tuple(make_symbol(v.name) for v in table.values())
    return SymFormula(tuple(eqs), frozenset(conds), psi.incomplete), fresh


# ------------------------------------------------------------------
# Foreign subterms
# ------------------------------------------------------------------
class _ForeignTerms:
    def __init__(self):
        self.defs: Dict[sp.Symbol, sp.Basic] = {}
        self.supply = NameSupply("_f")

    def abstract(self, e: sp.Basic) -> sp.Basic:
        if e.is_Atom:
            return e
        if isinstance(e, (sp.Add, sp.Mul)):
            return e.func(*[self.abstract(a) for a in e.args])
        if isinstance(e, sp.Pow) and e.exp.is_Integer:
            return self.abstract(e.base) ** e.exp
        for sym, d in self.defs.items():
            if d == e:
                return sym
        sym = make_symbol(self.supply.fresh())
        self.defs[sym] = e
        return sym

    def substitute(self, v: sp.Symbol, value: sp.Expr) -> None:
        for sym, d in list(self.defs.items()):
            if d.has(v):
                self.defs[sym] = canonical(d.subs(v, value))

    def restore(self, e):
        return e.xreplace(self.defs) if self.defs else e


# ------------------------------------------------------------------
# Elimination
# ------------------------------------------------------------------
def _numerator(e: sp.Expr, conds: Set[sp.Expr]) -> sp.Expr:
    n, d = sp.fraction(sp.together(e))
    if not d.is_number:
        conds.add(d)
    return sp.expand(n)


class _Eliminator:
    def __init__(self, psi: SymFormula, prefer_last: Sequence[sp.Symbol]):
        self.foreign = _ForeignTerms()
        self.conds: Set[sp.Expr] = set(psi.side_conditions)
        self.conjuncts: List[sp.Expr] = []
        self.opaque: List[Equality] = []
        self.prefer_last = tuple(prefer_last)
        self.incomplete = psi.incomplete
        for eq in psi.equalities:
            if is_boolean(eq.lhs) or is_boolean(eq.rhs):
                self.opaque.append(eq)
                continue
            c = _numerator(self.foreign.abstract(sp.sympify(eq.lhs - eq.rhs)), self.conds)
            if c != 0:
                self.conjuncts.append(c)

    def occurrences(self, v: sp.Symbol) -> int:
        return (sum(1 for c in self.conjuncts if c.has(v))
                + sum(1 for d in self.foreign.defs.values() if d.has(v)))

    def pick(self, v: sp.Symbol) -> Optional[Tuple[int, sp.Expr, sp.Expr]]:
        """(index, coefficient, rest) of the conjunct to solve for v, constant coefficients first."""
        fallback = None
        for i, c in enumerate(self.conjuncts):
            if not c.has(v):
                continue
            poly = sp.Poly(c, v)
            if poly.degree() != 1:
                continue
            a, b = poly.all_coeffs()
            if a == 0:
                continue
            if a.is_number:
                return i, a, b
            if fallback is None:
                fallback = (i, a, b)
        return fallback

    def solve(self, v: sp.Symbol, choice: Tuple[int, sp.Expr, sp.Expr]) -> None:
        index, a, b = choice
        if not a.is_number:
            self.conds.add(a)
        value = -b / a
        del self.conjuncts[index]
        updated = []
        for c in self.conjuncts:
            if c.has(v):
                c = _numerator(c.subs(v, value), self.conds)
            if c != 0:
                updated.append(c)
        self.conjuncts = updated
        self.foreign.substitute(v, value)

    def substitution_phase(self, targets: List[sp.Symbol]) -> List[sp.Symbol]:
        remaining = list(targets)
        while remaining:
            progress = False
            for v in sorted(remaining, key=lambda s: (self.occurrences(s), natural_key(s.name))):
                if self.occurrences(v) == 0:
                    remaining.remove(v)
                    progress = True
                    break
                choice = self.pick(v)
                if choice is None:
                    continue
                self.solve(v, choice)
                remaining.remove(v)
                progress = True
                break
            if not progress:
                break
        return remaining

    def _rank(self, c: sp.Expr) -> int:
        ranks = [i + 1 for i, s in enumerate(self.prefer_last) if c.has(s)]
        return max(ranks, default=0)

    def combination_phase(self, remaining: List[sp.Symbol]) -> None:
        """
        Cancel the remaining variables with linear combinations of the conjuncts
        that mention them (left null space of their monomial coefficient matrix).
        """
        self.incomplete = True
        tainted = [s for s, d in self.foreign.defs.items() if any(d.has(v) for v in remaining)]
        atoms = list(remaining) + tainted
        involved = [c for c in self.conjuncts if any(c.has(a) for a in atoms)]
        kept = [c for c in self.conjuncts if c not in involved]
        involved.sort(key=lambda c: (self._rank(c), self.conjuncts.index(c)))
        if involved:
            coeffs = [sp.Poly(c, *atoms).as_dict() for c in involved]
            monomials = sorted({m for d in coeffs for m in d if any(m)})
            matrix = sp.Matrix(len(monomials), len(involved),
                               lambda r, j: coeffs[j].get(monomials[r], 0))
            for vec in matrix.nullspace():
                combo = _numerator(sum((vec[j] * involved[j] for j in range(len(involved))), sp.Integer(0)),
                                   self.conds)
                if combo != 0 and not any(combo.has(a) for a in atoms) and combo not in kept:
                    kept.append(combo)
        self.conjuncts = kept

    def residue(self, targets: Iterable[sp.Symbol]) -> SymFormula:
        targets = set(targets)
        eqs: List[Equality] = []
        for c in self.conjuncts:
            if c.has(BOX_SYMBOL) and sp.Poly(c, BOX_SYMBOL).degree() == 1:
                a, b = sp.Poly(c, BOX_SYMBOL).all_coeffs()
                if not a.is_number:
                    self.conds.add(a)
                eqs.append(Equality(BOX_SYMBOL, canonical(self.foreign.restore(-b / a))))
            else:
                eqs.append(Equality(canonical(self.foreign.restore(c)), sp.Integer(0)))
        for eq in self.opaque:
            if not any(sp.sympify(side).has(t) for side in (eq.lhs, eq.rhs) for t in targets):
                eqs.append(eq)
            else:
                self.incomplete = True
        conds = set()
        for c in self.conds:
            c = canonical(self.foreign.restore(c))
            if not c.is_number and not (c.free_symbols & targets) and not any(
                    s.name.startswith("_f") for s in c.free_symbols):
                conds.add(c)
        return SymFormula(tuple(eqs), frozenset(conds), self.incomplete)


def eliminate(psi: SymFormula, variables: Iterable[sp.Symbol], prefer_last: Sequence[sp.Symbol] = (),
              logger=None) -> SymFormula:
    """
    Existentially eliminate `variables` from a conjunction of polynomial
    equalities. Variables are substituted away fewest-occurrences first; any
    left over are cancelled by linear combination and the result is flagged
    incomplete. Conjuncts mentioning `prefer_last` symbols are used last as
    combination pivots, so equalities for those symbols survive.
    """
    targets = sorted(set(variables), key=lambda s: natural_key(s.name))
    mentioned = any(sp.sympify(side).has(t) for eq in psi.equalities for side in (eq.lhs, eq.rhs)
                    for t in targets)
    if not mentioned:
        return psi
    worker = _Eliminator(psi, prefer_last)
    remaining = worker.substitution_phase(targets)
    if remaining:
        if logger is not None:
            logger.log(f"[Eliminate] substitution stuck on {[s.name for s in remaining]}, combining", level="DEBUG")
        worker.combination_phase(remaining)
    return worker.residue(targets)
