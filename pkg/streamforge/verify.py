# streamforge/verify.py
"""
Equivalence of an online candidate and an offline specification modulo a
signature: random testing, then symbolic comparison on short lists.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from streamforge.datas.config import SearchConfig
from streamforge.errors import EvalError, UnrollBudgetError
from streamforge.evaluation.builtins import Value
from streamforge.evaluation.concrete import eval_online, eval_snoc
from streamforge.evaluation.symbolic_exec import SymbolicExecutor, unroll_list
from streamforge.evaluation.terms import NEW_ELEM_SYMBOL, elem_symbols, is_rational_function, terms_equal
from streamforge.ir.printer import print_expr
from streamforge.ir.syntax import Expr
from streamforge.rfs import RFS
from streamforge.utils.util import list_lengths_for, random_extras, random_list, random_value

TESTED = "tested"
BOUNDED = "bounded-verified"
FAILED = "failed"


@dataclass(frozen=True)
class Sample:
    xs: Tuple[Fraction, ...]
    x: Fraction
    extras: Dict[str, Fraction]
    accums: Tuple[Value, ...]
    expected: Value

    def describe(self) -> str:
        extra = f", args={ {k: str(v) for k, v in self.extras.items()} }" if self.extras else ""
        return f"xs=[{' '.join(str(v) for v in self.xs)}], x={self.x}{extra}"


def draw_samples(phi: RFS, spec: Expr, count: int, length_range: Tuple[int, int],
                 rng: random.Random) -> List[Sample]:
    """Random (xs, x) pairs with the signature and the specification evaluated; lengths 0 and 1 come first."""
    lo, hi = length_range
    out: List[Sample] = []
    for n in list_lengths_for(count, lo, hi, rng):
        xs = tuple(random_list(rng, n, n))
        x = random_value(rng)
        extras = random_extras(rng, phi.extra_args)
        try:
            accums = phi.evaluate(xs, extras)
            expected = eval_snoc(spec, xs, x, extras)
        except EvalError:
            continue
        out.append(Sample(xs, x, extras, accums, expected))
    return out


def same_value(a, b) -> bool:
    return isinstance(a, bool) == isinstance(b, bool) and a == b


def run_candidate(candidate: Expr, sample: Sample) -> Optional[Value]:
    try:
        return eval_online(candidate, sample.accums, sample.x, sample.extras)
    except EvalError:
        return None


@dataclass(frozen=True)
class EquivalenceReport:
    ok: bool
    level: str
    passed: int
    failing: Optional[str] = None


def _bounded_check(phi: RFS, candidate: Expr, spec: Expr, max_len: int, node_budget: int) -> Optional[bool]:
    """True when every length up to max_len compares equal symbolically, None when some length cannot be compared."""
    complete = True
    for n in range(max_len + 1):
        elems = elem_symbols(n)
        try:
            accums = [unroll_list(e, elems, node_budget=node_budget).expr for e in phi.entries]
            ex = SymbolicExecutor(accums=accums, new_elem=NEW_ELEM_SYMBOL, node_budget=node_budget)
            got = ex.run(candidate)
            want = unroll_list(spec, elems + [NEW_ELEM_SYMBOL], node_budget=node_budget).expr
        except (EvalError, UnrollBudgetError):
            complete = False
            continue
        if not (is_rational_function(got) and is_rational_function(want)):
            complete = False
            continue
        if not terms_equal(got, want):
            return False
    return True if complete else None


def equivalence_report(phi: RFS, candidate: Expr, spec: Expr, cfg: SearchConfig,
                       samples: Optional[Sequence[Sample]] = None) -> EquivalenceReport:
    if samples is None:
        samples = draw_samples(phi, spec, cfg.test_count, cfg.list_length_range, random.Random(cfg.seed))
    passed = 0
    for s in samples:
        if not same_value(run_candidate(candidate, s), s.expected):
            return EquivalenceReport(False, FAILED, passed, s.describe())
        passed += 1
    bounded = _bounded_check(phi, candidate, spec, cfg.bounded_lengths, cfg.node_budget)
    if bounded is False:
        return EquivalenceReport(False, FAILED, passed, f"symbolic mismatch for {print_expr(candidate)}")
    return EquivalenceReport(True, BOUNDED if bounded else TESTED, passed)


def check_equiv_mod_rfs(phi: RFS, candidate: Expr, spec: Expr, cfg: SearchConfig) -> bool:
    return equivalence_report(phi, candidate, spec, cfg).ok
