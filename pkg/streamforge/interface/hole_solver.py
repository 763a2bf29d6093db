# ------------------------------------------------------------------
# Abstract hole solvers: one strategy per way of completing a hole
# ------------------------------------------------------------------
from abc import ABC, abstractmethod
from typing import Optional

from streamforge.datas.config import SearchConfig
from streamforge.datas.result import HoleSolution
from streamforge.ir.syntax import Expr
from streamforge.rfs import RFS


class IHoleSolver(ABC):
    """
    One way of turning a hole specification into an online expression.
    The driver asks each solver in turn until one answers.
    """

    name: str = "abstract"

    @abstractmethod
    def solve(self, phi: RFS, spec: Expr, cfg: SearchConfig, hole_id: Optional[int] = None) -> Optional[HoleSolution]:
        """
        Return a verified solution, or None when this method has nothing to offer
        for the hole. Raise SynthesisFailure only when the method was the last
        resort and exhausted its budget.
        """
        raise NotImplementedError
