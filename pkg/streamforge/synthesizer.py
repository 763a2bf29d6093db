# streamforge/synthesizer.py
"""
Top-level pipeline: signature, initializer, sketch, one synthesis task per hole,
assembly, pruning and the end-to-end check.
"""
from __future__ import annotations

import random
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

from streamforge.datas.config import SearchConfig
from streamforge.datas.result import HoleReport, HoleSolution, SynthesisResult
from streamforge.decompose import decompose, dump_sketch
from streamforge.errors import EvalError, InternalCheckError, SynthesisFailure
from streamforge.evaluation.concrete import eval_offline, run_scheme
from streamforge.interface.hole_solver import IHoleSolver
from streamforge.ir.printer import print_expr, print_scheme
from streamforge.ir.syntax import Expr, OfflineProgram, OnlineScheme
from streamforge.rfs import RFS, construct_rfs, live_accumulators, prune_unused, synth_initializer
from streamforge.strategy.implicate_solver import ImplicateSolver
from streamforge.strategy.search_solver import SearchSolver
from streamforge.utils.logger import ensure_logger
from streamforge.utils.util import derive_seed, random_list, random_value


def default_solvers(cfg: SearchConfig, logger=None) -> List[IHoleSolver]:
    if cfg.use_symbolic:
        return [ImplicateSolver(logger), SearchSolver(logger)]
    return [SearchSolver(logger)]


def synthesize_expr(phi: RFS, spec: Expr, cfg: SearchConfig, hole_id: Optional[int] = None, logger=None,
                    solvers: Optional[Sequence[IHoleSolver]] = None) -> HoleSolution:
    logger = ensure_logger(logger)
    for solver in solvers or default_solvers(cfg, logger):
        solution = solver.solve(phi, spec, cfg, hole_id)
        if solution is not None:
            logger.log(f"[Synthesizer] hole {hole_id} = {print_expr(solution.expr)} via {solution.method} "
                       f"({solution.verification})", level="INFO")
            return solution
    raise SynthesisFailure(f"hole {hole_id}: every method failed", hole_id=hole_id)


def _solve_hole(phi: RFS, spec: Expr, cfg: SearchConfig, hole_id: int, logger) -> Tuple[int, object, float]:
    started = time.monotonic()
    try:
        result = synthesize_expr(phi, spec, cfg, hole_id, logger)
    except SynthesisFailure as exc:
        result = exc
    return hole_id, result, time.monotonic() - started


def synthesize_online_prog(p: OfflineProgram, phi: RFS, cfg: SearchConfig,
                           logger=None) -> Tuple[Tuple[Expr, ...], List[HoleReport]]:
    """
    Complete the sketch hole by hole. Holes are independent, so they may run on
    a thread pool; the assembly order never depends on scheduling.
    """
    logger = ensure_logger(logger)
    sketch, specs = decompose(phi, p, cfg.use_decomposition)
    logger.log(f"[Synthesizer] sketch:\n{dump_sketch(sketch, specs)}", level="DEBUG")
    holes = sketch.holes()
    if not holes:
        return sketch.body, []

    if cfg.workers > 1 and len(holes) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(lambda h: _solve_hole(phi, specs[h], cfg, h, logger), holes))
    else:
        outcomes = [_solve_hole(phi, specs[h], cfg, h, logger) for h in holes]

    solutions: Dict[int, Expr] = {}
    reports: List[HoleReport] = []
    failures: List[SynthesisFailure] = []
    for hole_id, result, elapsed in sorted(outcomes, key=lambda o: o[0]):
        if isinstance(result, SynthesisFailure):
            failures.append(result)
            continue
        solutions[hole_id] = result.expr
        reports.append(HoleReport(hole_id, result.method, elapsed, result.verification, result.expr))
    if failures:
        raise SynthesisFailure(f"{len(failures)} of {len(holes)} hole(s) could not be completed",
                               failures=failures)
    return sketch.fill(solutions), reports


def final_check(p: OfflineProgram, scheme: OnlineScheme, cfg: SearchConfig) -> None:
    """Replay random streams through the scheme and compare with the offline program."""
    rng = random.Random(derive_seed(cfg.seed, "final"))
    lo, hi = cfg.list_length_range
    for _ in range(cfg.final_test_count):
        stream = random_list(rng, lo, hi)
        args = [random_value(rng) for _ in p.extra_args]
        try:
            want = eval_offline(p, stream, args)
            got = run_scheme(scheme, stream, args)[-1]
        except EvalError as exc:
            raise InternalCheckError(f"scheme replay failed on {[str(v) for v in stream]}: {exc}") from exc
        if got != want or isinstance(got, bool) != isinstance(want, bool):
            raise InternalCheckError(
                f"scheme disagrees with the program on {[str(v) for v in stream]}: {got} != {want}")


def synthesize(p: OfflineProgram, cfg: SearchConfig, logger=None) -> SynthesisResult:
    logger = ensure_logger(logger)
    started = time.monotonic()
    phi = construct_rfs(p)
    for line in phi.describe():
        logger.log(f"[Synthesizer] {line}", level="DEBUG")
    init = synth_initializer(phi)
    body, reports = synthesize_online_prog(p, phi, cfg, logger)
    full = OnlineScheme(init, body, p.extra_args)
    live = live_accumulators(full)
    scheme = prune_unused(full)
    final_check(p, scheme, cfg)
    elapsed = time.monotonic() - started
    logger.log(f"[Synthesizer] done in {elapsed:.2f}s: {print_scheme(scheme)}", level="INFO")
    return SynthesisResult(
        scheme=scheme,
        hole_reports=reports,
        total_elapsed=elapsed,
        pruned_accumulators=[i for i in range(1, full.arity + 1) if i not in live],
        rfs_lines=phi.describe(),
    )
