from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from streamforge.ir.printer import print_expr, print_scheme, scheme_to_json
from streamforge.ir.syntax import Expr, OnlineScheme


@dataclass(frozen=True)
class HoleSolution:
    expr: Expr
    method: str          # implicate | template+interp | template+enum | enum
    verification: str    # tested | bounded-verified


@dataclass(frozen=True)
class HoleReport:
    hole_id: int
    method: str
    elapsed: float
    verification: str
    expr: Expr

    def to_dict(self) -> Dict[str, Any]:
        return {
            "hole": self.hole_id,
            "method": self.method,
            "seconds": round(self.elapsed, 3),
            "verification": self.verification,
            "expr": print_expr(self.expr),
        }


@dataclass
class SynthesisResult:
    scheme: OnlineScheme
    hole_reports: List[HoleReport] = field(default_factory=list)
    total_elapsed: float = 0.0
    pruned_accumulators: List[int] = field(default_factory=list)
    rfs_lines: List[str] = field(default_factory=list)

    @property
    def methods(self) -> List[str]:
        return sorted({r.method for r in self.hole_reports})

    @property
    def verification(self) -> Optional[str]:
        """The weakest level reached by any hole."""
        levels = {r.verification for r in self.hole_reports}
        if not levels:
            return None
        return "tested" if "tested" in levels else "bounded-verified"

    def to_text(self) -> str:
        return print_scheme(self.scheme)

    def to_json(self) -> Dict[str, Any]:
        out = scheme_to_json(self.scheme)
        out["holes"] = [r.to_dict() for r in self.hole_reports]
        out["pruned"] = [f"y{i}" for i in self.pruned_accumulators]
        out["seconds"] = round(self.total_elapsed, 3)
        return out
