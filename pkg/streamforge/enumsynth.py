# streamforge/enumsynth.py
"""
Enumerative fallback for a single hole.

Candidates are built bottom-up by size. Each one is kept only if its vector of
outputs on a shared sample set is new (observational equivalence), so the
banks hold one representative per behaviour. A candidate whose vector matches
the specification goes through the full equivalence check.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from streamforge.datas.config import SearchConfig
from streamforge.errors import EvalError, SynthesisFailure, TemplateSolveError
from streamforge.evaluation.builtins import apply_builtin
from streamforge.ir.printer import print_expr
from streamforge.ir.syntax import (
    BUILTINS, AccumVar, Apply, Builtin, Expr, Filter, Ite, NewElem, Var, call, num,
)
from streamforge.ir.tools import size, walk
from streamforge.mine import Template
from streamforge.polyinterp import SamplePlan, solve_template
from streamforge.rfs import RFS
from streamforge.utils.logger import ensure_logger
from streamforge.utils.util import derive_seed
from streamforge.verify import (
    EquivalenceReport, Sample, check_equiv_mod_rfs, draw_samples, equivalence_report, run_candidate,
    same_value,
)

METHOD_TEMPLATE_INTERP = "template+interp"
METHOD_TEMPLATE_ENUM = "template+enum"
METHOD_ENUM = "enum"

CONSTANTS = (0, 1, 2)
POW_EXPONENTS = (2, 3)

Vector = Tuple


@dataclass(frozen=True)
class EnumOutcome:
    expr: Expr
    method: str
    report: EquivalenceReport


class _Deadline:
    def __init__(self, seconds: float):
        self.stop = time.monotonic() + seconds

    def expired(self) -> bool:
        return time.monotonic() > self.stop


class _Budget(Exception):
    pass


def grammar_ops(phi: RFS, spec: Expr) -> Tuple[List[str], bool]:
    """
    Builtins that occur in the program or the specification, plus +, which
    length and filter use implicitly. The flag says whether ite is allowed.
    """
    names: Set[str] = {"+"}
    use_ite = False
    for root in (*phi.entries, spec):
        for node in walk(root):
            if isinstance(node, Builtin):
                names.add(node.name)
            elif isinstance(node, (Ite, Filter)):
                use_ite = True
    return sorted(names), use_ite


class _Search:
    def __init__(self, phi: RFS, spec: Expr, templates: Sequence[Template], cfg: SearchConfig,
                 hole_id: Optional[int], logger):
        self.phi = phi
        self.spec = spec
        self.templates = [t for t in templates if t.unknown_count > 0]
        self.cfg = cfg
        self.hole_id = hole_id
        self.logger = logger
        seed = derive_seed(cfg.seed, "hole", hole_id if hole_id is not None else 0)
        self.samples: List[Sample] = draw_samples(phi, spec, cfg.search_sample_count, cfg.list_length_range,
                                                  random.Random(seed))
        self.target: Vector = tuple(s.expected for s in self.samples)
        self.verify_cfg = cfg.replace(seed=derive_seed(seed, "verify"))
        self.ops, self.use_ite = grammar_ops(phi, spec)
        self.num_bank: Dict[int, List[Tuple[Expr, Vector]]] = {}
        self.bool_bank: Dict[int, List[Tuple[Expr, Vector]]] = {}
        self.seen: Set[Vector] = set()
        self.best: List[Tuple[int, str]] = []
        self.deadline = _Deadline(cfg.timeout_seconds)

    # ------------------------------------------------------------------
    def terminals(self) -> Iterator[Expr]:
        for i in range(1, self.phi.arity + 1):
            yield AccumVar(i)
        yield NewElem()
        for name in self.phi.extra_args:
            yield Var(name)
        for c in CONSTANTS:
            yield num(c)

    def vector_of(self, e: Expr) -> Optional[Vector]:
        out = []
        for s in self.samples:
            v = run_candidate(e, s)
            if v is None:
                return None
            out.append(v)
        return tuple(out)

    def _combine(self, name: str, vectors: Sequence[Vector]) -> Optional[Vector]:
        out = []
        for values in zip(*vectors):
            try:
                out.append(apply_builtin(name, values))
            except EvalError:
                return None
        return tuple(out)

    def offer(self, e: Expr, vec: Optional[Vector], sz: int) -> Optional[Expr]:
        """Bank a candidate with a new behaviour; return it when it solves the hole."""
        if self.deadline.expired():
            raise _Budget("timeout")
        if vec is None:
            return None
        key = (("b",) if vec and isinstance(vec[0], bool) else ("n",)) + vec
        if key in self.seen:
            return None
        self.seen.add(key)
        is_bool = bool(vec) and isinstance(vec[0], bool)
        (self.bool_bank if is_bool else self.num_bank).setdefault(sz, []).append((e, vec))
        if is_bool:
            return None
        passed = sum(1 for a, b in zip(vec, self.target) if same_value(a, b))
        self._remember(passed, e)
        if passed == len(self.target) and check_equiv_mod_rfs(self.phi, e, self.spec, self.verify_cfg):
            return e
        return None

    def _remember(self, passed: int, e: Expr) -> None:
        self.best.append((passed, print_expr(e)))
        self.best.sort(key=lambda p: -p[0])
        del self.best[3:]

    # ------------------------------------------------------------------
    def _split(self, total: int, parts: int) -> Iterator[Tuple[int, ...]]:
        if parts == 1:
            if total >= 1:
                yield (total,)
            return
        for first in range(1, total - parts + 2):
            for rest in self._split(total - first, parts - 1):
                yield (first,) + rest

    def _num_at(self, sz: int) -> List[Tuple[Expr, Vector]]:
        return self.num_bank.get(sz, [])

    def grow(self, sz: int) -> Iterator[Tuple[Expr, Optional[Vector], str]]:
        for name in self.ops:
            info = BUILTINS[name]
            if name == "pow":
                for base, bv in self._num_at(sz - 2):
                    for k in POW_EXPONENTS:
                        yield (call("pow", base, num(k)),
                               self._combine("pow", [bv, (Fraction(k),) * len(bv)]), METHOD_ENUM)
                continue
            arity = 1 if info.max_arity == 1 else 2
            bank = self.bool_bank if info.operands == "bool" else self.num_bank
            for sizes in self._split(sz - 1, arity):
                pools = [bank.get(s, []) for s in sizes]
                for combo in product(*pools):
                    yield (Apply(Builtin(name), tuple(e for e, _ in combo)),
                           self._combine(name, [v for _, v in combo]), METHOD_ENUM)
        if self.use_ite:
            for cs, ts, es in self._split(sz - 1, 3):
                for (c, cv), (t, tv), (f, fv) in product(self.bool_bank.get(cs, []), self._num_at(ts),
                                                         self._num_at(es)):
                    yield Ite(c, t, f), tuple(a if k else b for k, a, b in zip(cv, tv, fv)), METHOD_ENUM
        for template in self.templates:
            yield from self._template_fills(template, sz)

    def _template_fills(self, template: Template, sz: int) -> Iterator[Tuple[Expr, Optional[Vector], str]]:
        unknowns = template.unknowns
        skeleton = size(template.body()) - len(unknowns)
        budget = sz - skeleton
        if budget < len(unknowns):
            return
        for sizes in self._split(budget, len(unknowns)):
            for combo in product(*(self._num_at(s) for s in sizes)):
                e = template.instantiate({u: fill for u, (fill, _) in zip(unknowns, combo)})
                yield e, self.vector_of(e), METHOD_TEMPLATE_ENUM

    # ------------------------------------------------------------------
    def run(self) -> Tuple[Expr, str]:
        for sz in range(1, self.cfg.max_size + 1):
            if sz == 1:
                for e in self.terminals():
                    if self.offer(e, self.vector_of(e), 1) is not None:
                        return e, METHOD_ENUM
                continue
            for e, vec, method in self.grow(sz):
                if self.offer(e, vec, sz) is not None:
                    return e, method
            self.logger.log(f"[EnumSynth] hole {self.hole_id}: size {sz} done, "
                            f"{sum(len(v) for v in self.num_bank.values())} behaviours", level="DEBUG")
        raise _Budget(f"no candidate up to size {self.cfg.max_size}")


def enum_synthesize(phi: RFS, spec: Expr, templates: Sequence[Template], cfg: SearchConfig,
                    hole_id: Optional[int] = None, logger=None) -> EnumOutcome:
    """
    Exact templates first, then interpolation per template, then the
    size-ordered search. The returned expression has passed the equivalence
    check under a seed the search never used.
    """
    logger = ensure_logger(logger)
    fresh_cfg = cfg.replace(seed=derive_seed(cfg.seed, "hole", hole_id or 0, "fresh"))

    for t in templates:
        if t.unknown_count == 0:
            report = equivalence_report(phi, t.body(), spec, fresh_cfg)
            if report.ok:
                return EnumOutcome(t.body(), METHOD_TEMPLATE_ENUM, report)

    for t in templates:
        if t.unknown_count == 0:
            continue
        try:
            expr = solve_template(spec, phi, t, SamplePlan.for_template(t, cfg), cfg, logger)
        except TemplateSolveError as exc:
            logger.log(f"[EnumSynth] hole {hole_id}: template {t} not solved: {exc}", level="DEBUG")
            continue
        report = equivalence_report(phi, expr, spec, fresh_cfg)
        if report.ok:
            return EnumOutcome(expr, METHOD_TEMPLATE_INTERP, report)

    search = _Search(phi, spec, templates, cfg, hole_id, logger)
    try:
        expr, method = search.run()
    except _Budget as exc:
        raise SynthesisFailure(f"hole {hole_id}: search exhausted ({exc})", hole_id=hole_id,
                               diagnostics=[(text, passed) for passed, text in search.best]) from None
    report = equivalence_report(phi, expr, spec, fresh_cfg)
    if not report.ok:
        raise SynthesisFailure(f"hole {hole_id}: {print_expr(expr)} failed the final check: {report.failing}",
                               hole_id=hole_id, diagnostics=[(text, passed) for passed, text in search.best])
    return EnumOutcome(expr, method, report)


__all__ = ["enum_synthesize", "check_equiv_mod_rfs", "equivalence_report", "EnumOutcome", "grammar_ops",
           "METHOD_ENUM", "METHOD_TEMPLATE_ENUM", "METHOD_TEMPLATE_INTERP"]
