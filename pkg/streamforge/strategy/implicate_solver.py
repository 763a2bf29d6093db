import random
from typing import Optional

from streamforge.datas.config import SearchConfig
from streamforge.datas.result import HoleSolution
from streamforge.interface.hole_solver import IHoleSolver
from streamforge.ir.printer import print_expr
from streamforge.ir.syntax import XS, X, Expr, Snoc
from streamforge.ir.tools import beta_reduce, substitute
from streamforge.rfs import RFS, rfs_formula
from streamforge.symbolic.formula import ImplicateTemplate
from streamforge.symbolic.implicate import find_implicate, implicate_expr
from streamforge.utils.logger import ensure_logger
from streamforge.utils.util import derive_seed
from streamforge.verify import equivalence_report


def snoc_spec(spec: Expr) -> Expr:
    """The specification evaluated on xs ++ [x]."""
    return beta_reduce(substitute(spec, XS, Snoc(XS, X)))


class ImplicateSolver(IHoleSolver):
    """Deductive path: read the update straight off an implicate of the signature."""

    name = "implicate"

    def __init__(self, logger=None):
        self.logger = ensure_logger(logger)

    def solve(self, phi: RFS, spec: Expr, cfg: SearchConfig, hole_id: Optional[int] = None) -> Optional[HoleSolution]:
        formula = find_implicate(
            rfs_formula(phi), ImplicateTemplate(snoc_spec(spec)),
            axiom_checks=cfg.axiom_checks, node_budget=cfg.node_budget,
            rng=random.Random(derive_seed(cfg.seed, "axioms", hole_id or 0)), logger=self.logger,
        )
        candidate = implicate_expr(formula)
        if candidate is None:
            self.logger.log(f"[Implicate] hole {hole_id}: no usable implicate ({formula})", level="INFO")
            return None
        report = equivalence_report(phi, candidate, spec, cfg.replace(seed=derive_seed(cfg.seed, "implicate", hole_id or 0)))
        if not report.ok:
            self.logger.log(f"[Implicate] hole {hole_id}: {print_expr(candidate)} rejected by testing: {report.failing}",
                            level="WARNING")
            return None
        return HoleSolution(candidate, self.name, report.level)
