# streamforge/decompose.py
"""
Sketch generation: every list expression of the signature becomes a hole whose
specification is that list expression; the scalar code around it is copied.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Tuple

from streamforge.errors import IRTypeError
from streamforge.ir.printer import print_expr
from streamforge.ir.syntax import (
    AccumVar, Apply, Builtin, Const, Expr, Hole, Ite, Lambda, NewElem, OfflineProgram, Var,
)
from streamforge.ir.tools import contains_list_expression, fill_placeholders, hole_ids, is_list_expression
from streamforge.rfs import RFS

HoleSpecs = Dict[int, Expr]


@dataclass(frozen=True)
class Sketch:
    body: Tuple[Expr, ...]

    @property
    def arity(self) -> int:
        return len(self.body)

    def holes(self) -> List[int]:
        return sorted({h for c in self.body for h in hole_ids(c)})

    def fill(self, solutions: Mapping[int, Expr]) -> Tuple[Expr, ...]:
        missing = [h for h in self.holes() if h not in solutions]
        if missing:
            raise IRTypeError(f"no solution for hole {missing[0]}")
        return tuple(fill_placeholders(c, holes=dict(solutions)) for c in self.body)


class _Translator:
    def __init__(self):
        self.specs: HoleSpecs = {}
        self._ids: Dict[Expr, int] = {}

    def hole(self, spec: Expr) -> Hole:
        if spec not in self._ids:
            self._ids[spec] = len(self._ids) + 1
            self.specs[self._ids[spec]] = spec
        return Hole(self._ids[spec])

    def translate(self, e: Expr) -> Expr:
        if is_list_expression(e):
            return self.hole(e)
        match e:
            case Const() | Var() | AccumVar() | NewElem():
                return e
            case Apply(Builtin() as fn, args):
                return Apply(fn, tuple(self.translate(a) for a in args))
            case Apply(Lambda() as fn, args):
                if contains_list_expression(fn):
                    return self.hole(e)
                return Apply(fn, tuple(self.translate(a) for a in args))
            case Ite(cond, then, orelse):
                return Ite(self.translate(cond), self.translate(then), self.translate(orelse))
        raise IRTypeError(f"cannot decompose {print_expr(e)}")


def decompose(phi: RFS, p: OfflineProgram, use_decomposition: bool = True) -> Tuple[Sketch, HoleSpecs]:
    """
    Holes are numbered by first appearance across the components; equal list
    expressions share a hole. Without decomposition every component is a
    single hole whose specification is the whole signature entry.
    """
    if phi.entries[0] != p.body:
        raise IRTypeError("signature does not belong to this program")
    t = _Translator()
    if not use_decomposition:
        return Sketch(tuple(t.hole(entry) for entry in phi.entries)), t.specs
    return Sketch(tuple(t.translate(entry) for entry in phi.entries)), t.specs


def dump_sketch(sketch: Sketch, specs: HoleSpecs) -> str:
    lines = [f"(tuple {' '.join(print_expr(c) for c in sketch.body)})"]
    for h in sorted(specs):
        lines.append(f"  (hole {h}) := {print_expr(specs[h])}")
    return "\n".join(lines)
