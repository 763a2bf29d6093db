# streamforge/rfs.py
"""
Relational function signatures: which offline list expression each
accumulator y_i stands for.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from streamforge.errors import EvalError
from streamforge.evaluation.concrete import Env, evaluate
from streamforge.ir.printer import print_expr
from streamforge.ir.syntax import XS, AccumVar, Expr, Length, OfflineProgram, OnlineScheme
from streamforge.ir.tools import accum_indices, list_expressions, rename_accums
from streamforge.symbolic.formula import Equality, SymFormula


@dataclass(frozen=True)
class RFS:
    """entries[i - 1] is the offline expression behind y_i; entry 1 is the program body."""

    entries: Tuple[Expr, ...]
    extra_args: Tuple[str, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.entries)

    def __getitem__(self, index: int) -> Expr:
        if not 1 <= index <= len(self.entries):
            raise IndexError(f"y{index} is not in a signature of arity {len(self.entries)}")
        return self.entries[index - 1]

    def length_index(self) -> Optional[int]:
        """Index of an accumulator that counts the processed elements, if any."""
        for i, entry in enumerate(self.entries, 1):
            if entry == Length(XS):
                return i
        return None

    def evaluate(self, xs: Sequence[Fraction], extras: Mapping[str, Fraction] = None) -> Tuple:
        env = Env(names=dict(extras or {}), xs=tuple(xs))
        return tuple(evaluate(entry, env) for entry in self.entries)

    def describe(self) -> List[str]:
        return [f"y{i} = {print_expr(e)}" for i, e in enumerate(self.entries, 1)]


def construct_rfs(p: OfflineProgram) -> RFS:
    """
    y1 is the body; the remaining list expressions follow in reverse discovery
    order, so for mean y2 is the length and y3 the sum.
    """
    rest = [e for e in reversed(list_expressions(p)) if e != p.body]
    return RFS((p.body, *rest), tuple(p.extra_args))


def synth_initializer(phi: RFS) -> Tuple[Fraction, ...]:
    values = []
    for i, entry in enumerate(phi.entries, 1):
        try:
            v = evaluate(entry, Env(xs=()))
        except EvalError as exc:
            raise EvalError(f"initial value of y{i} cannot be computed on the empty list: {exc}") from exc
        if not isinstance(v, Fraction):
            raise EvalError(f"initial value of y{i} is {v!r}, not a rational")
        values.append(v)
    return tuple(values)


def rfs_formula(phi: RFS) -> SymFormula:
    return SymFormula(tuple(Equality(AccumVar(i), e) for i, e in enumerate(phi.entries, 1)))


def live_accumulators(s: OnlineScheme) -> List[int]:
    """Positions reachable from y1 through the update components."""
    live = {1}
    frontier = [1]
    while frontier:
        i = frontier.pop()
        for j in accum_indices(s.body[i - 1]):
            if j not in live:
                live.add(j)
                frontier.append(j)
    return sorted(live)


def prune_unused(s: OnlineScheme) -> OnlineScheme:
    live = live_accumulators(s)
    if len(live) == s.arity:
        return s
    mapping: Dict[int, int] = {old: new for new, old in enumerate(live, 1)}
    return OnlineScheme(
        initializer=tuple(s.initializer[i - 1] for i in live),
        body=tuple(rename_accums(s.body[i - 1], mapping) for i in live),
        extra_args=s.extra_args,
    )
