from typing import List, Optional

from streamforge.datas.config import SearchConfig
from streamforge.datas.result import HoleSolution
from streamforge.enumsynth import enum_synthesize
from streamforge.interface.hole_solver import IHoleSolver
from streamforge.ir.syntax import Expr
from streamforge.mine import Template, mine_expressions
from streamforge.rfs import RFS
from streamforge.utils.logger import ensure_logger


class SearchSolver(IHoleSolver):
    """
    Inductive path: mine templates from unrolled lists (when symbolic reasoning
    is on), then interpolate or enumerate. Raises SynthesisFailure when the
    search runs dry.
    """

    name = "search"

    def __init__(self, logger=None):
        self.logger = ensure_logger(logger)

    def templates(self, phi: RFS, spec: Expr, cfg: SearchConfig) -> List[Template]:
        if not cfg.use_symbolic:
            return []
        k = max(2, cfg.unroll_depth)
        found = mine_expressions(phi, spec, k, cfg.node_budget, self.logger)
        if not found:
            found = mine_expressions(phi, spec, k + 1, cfg.node_budget, self.logger)
        return found

    def solve(self, phi: RFS, spec: Expr, cfg: SearchConfig, hole_id: Optional[int] = None) -> Optional[HoleSolution]:
        templates = self.templates(phi, spec, cfg)
        self.logger.log(f"[Search] hole {hole_id}: {len(templates)} mined template(s)", level="INFO")
        outcome = enum_synthesize(phi, spec, templates, cfg, hole_id, self.logger)
        return HoleSolution(outcome.expr, outcome.method, outcome.report.level)
