# streamforge/polyinterp.py
"""
Template solving by interpolation.

At a fixed list length every unknown of a template is a constant, so a handful
of random lists of that length gives a square linear system. Solving it for
several lengths yields points (n, value) per unknown, and each unknown is then
recovered as the interpolating polynomial in the length accumulator.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp

from streamforge.datas.config import SearchConfig
from streamforge.errors import EvalError, TemplateSolveError
from streamforge.evaluation.concrete import eval_online, eval_snoc
from streamforge.evaluation.terms import make_symbol
from streamforge.ir.printer import print_expr
from streamforge.ir.syntax import AccumVar, Expr
from streamforge.mine import Template, TemplateTerm
from streamforge.rfs import RFS
from streamforge.symbolic.translate import from_sympy
from streamforge.utils.logger import ensure_logger
from streamforge.utils.util import derive_seed, random_extras, random_list, random_value
from streamforge.verify import equivalence_report

N_SYMBOL = make_symbol("_n")

UnknownPoints = Dict[int, List[Tuple[int, Fraction]]]


@dataclass(frozen=True)
class SamplePlan:
    lengths: Tuple[int, ...]
    lists_per_length: int
    retries: int = 5
    min_points: int = 6

    @property
    def sample_length_count(self) -> int:
        return len(self.lengths)

    @property
    def max_degree(self) -> int:
        return len(self.lengths) - 1

    @classmethod
    def for_template(cls, t: Template, cfg: SearchConfig) -> "SamplePlan":
        return cls(tuple(cfg.sample_lengths), t.unknown_count, cfg.sample_retries,
                   min(cfg.min_interp_points, len(cfg.sample_lengths)))


def _to_fraction(v: sp.Rational) -> Fraction:
    return Fraction(int(v.p), int(v.q))


def _row(t: Template, pinned: Optional[int], accums, x, extras, observed: Fraction
         ) -> Tuple[Dict[int, Fraction], Fraction]:
    """
    One linear equation sum(a_i * ??_i) = b from
    numerator - observed * denominator = 0.
    """
    coeffs: Dict[int, Fraction] = {}
    rhs = Fraction(0)

    def add(term: TemplateTerm, scale: Fraction):
        nonlocal rhs
        value = eval_online(term.basis, accums, x, extras)
        if isinstance(value, bool):
            raise EvalError("template basis evaluated to a boolean")
        contribution = term.coeff * scale * value
        if term.unknown is None or term.unknown == pinned:
            rhs -= contribution
        else:
            coeffs[term.unknown] = coeffs.get(term.unknown, Fraction(0)) + contribution

    for term in t.numerator:
        add(term, Fraction(1))
    for term in t.denominator:
        add(term, -observed)
    if not t.denominator:
        rhs += observed
    return coeffs, rhs


def _pinned_unknown(t: Template) -> Optional[int]:
    """An unknown fixed to 1 when the template has no fixed term to set its scale."""
    if any(term.unknown is None for term in t.numerator + t.denominator) or not t.denominator:
        return None
    for term in t.denominator:
        if term.unknown is not None:
            return term.unknown
    return t.unknowns[0]


def sample_points(spec: Expr, phi: RFS, t: Template, plan: SamplePlan,
                  rng: Optional[random.Random] = None, logger=None) -> UnknownPoints:
    logger = ensure_logger(logger)
    rng = rng or random.Random(0)
    if phi.length_index() is None:
        raise TemplateSolveError("no accumulator counts the stream length", not_applicable=True)
    pinned = _pinned_unknown(t)
    solved = [u for u in t.unknowns if u != pinned]
    if not solved:
        raise TemplateSolveError("template has nothing to solve for")
    m = len(solved)
    points: UnknownPoints = {u: [] for u in t.unknowns}
    for length in plan.lengths:
        solution = None
        for _ in range(plan.retries):
            rows, rhs = [], []
            try:
                for _ in range(m):
                    xs = random_list(rng, length, length)
                    x = random_value(rng)
                    extras = random_extras(rng, phi.extra_args)
                    observed = eval_snoc(spec, xs, x, extras)
                    if isinstance(observed, bool):
                        raise TemplateSolveError("specification is boolean-valued")
                    coeffs, b = _row(t, pinned, phi.evaluate(xs, extras), x, extras, observed)
                    rows.append([coeffs.get(u, Fraction(0)) for u in solved])
                    rhs.append(b)
            except EvalError:
                continue
            matrix = sp.Matrix([[sp.Rational(c.numerator, c.denominator) for c in r] for r in rows])
            if matrix.det() == 0:
                continue
            vector = sp.Matrix([sp.Rational(b.numerator, b.denominator) for b in rhs])
            solution = matrix.LUsolve(vector)
            break
        if solution is None:
            logger.log(f"[PolyInterp] length {length} stayed singular, skipped", level="DEBUG")
            continue
        for u, v in zip(solved, solution):
            points[u].append((length, _to_fraction(v)))
        if pinned is not None:
            points[pinned].append((length, Fraction(1)))
    surviving = len(points[solved[0]])
    if surviving < plan.min_points:
        raise TemplateSolveError(f"only {surviving} sample lengths gave a solvable system")
    return points


def interpolate(points: Sequence[Tuple[int, Fraction]]) -> sp.Poly:
    """Lowest-degree polynomial in n through the points, exact rational coefficients."""
    if not points:
        raise ValueError("interpolation needs at least one point")
    xs = [p[0] for p in points]
    if len(set(xs)) != len(xs):
        raise ValueError(f"duplicate abscissae in {xs}")
    data = [(sp.Integer(a), sp.Rational(b.numerator, b.denominator)) for a, b in points]
    return sp.Poly(sp.interpolate(data, N_SYMBOL), N_SYMBOL, domain="QQ")


def solve_template(spec: Expr, phi: RFS, t: Template, plan: SamplePlan, cfg: SearchConfig,
                   logger=None) -> Expr:
    """
    Fill every unknown with a polynomial in the length accumulator and keep the
    result only if it passes the equivalence check under a fresh seed.
    """
    logger = ensure_logger(logger)
    if t.unknown_count == 0:
        candidate = t.body()
    else:
        points = sample_points(spec, phi, t, plan, random.Random(derive_seed(cfg.seed, "sample", str(t))), logger)
        n_var = AccumVar(phi.length_index())
        fills = {u: from_sympy(interpolate(pts).as_expr(), {N_SYMBOL: n_var}) for u, pts in points.items()}
        candidate = t.instantiate(fills)
    report = equivalence_report(phi, candidate, spec, cfg.replace(seed=derive_seed(cfg.seed, "solve_template")))
    if not report.ok:
        raise TemplateSolveError(f"{print_expr(candidate)} is not equivalent: {report.failing}")
    logger.log(f"[PolyInterp] solved {t} as {print_expr(candidate)}", level="DEBUG")
    return candidate
