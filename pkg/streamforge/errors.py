# streamforge/errors.py
from __future__ import annotations

from typing import List, Optional, Tuple


class StreamForgeError(Exception):
    """Base class for every error raised by streamforge."""


class ParseError(StreamForgeError, ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line else ""
        super().__init__(f"{where}{message}")


class IRTypeError(StreamForgeError, TypeError):
    pass


class EvalError(StreamForgeError):
    pass


class UnrollBudgetError(StreamForgeError):
    pass


class AxiomError(StreamForgeError):
    pass


class ConfigError(StreamForgeError, ValueError):
    pass


class TemplateSolveError(StreamForgeError):
    def __init__(self, message: str, not_applicable: bool = False):
        self.not_applicable = not_applicable
        super().__init__(message)


class SynthesisFailure(StreamForgeError):
    """
    A hole (or the whole program) could not be completed.
    diagnostics: best candidates seen as (printed expression, passed tests) pairs.
    """

    def __init__(self, message: str, hole_id: Optional[int] = None,
                 diagnostics: Optional[List[Tuple[str, int]]] = None,
                 failures: Optional[List["SynthesisFailure"]] = None):
        self.hole_id = hole_id
        self.diagnostics = list(diagnostics or [])
        self.failures = list(failures or [])
        super().__init__(message)

    def describe(self) -> str:
        lines = [str(self)]
        for sub in self.failures or [self]:
            if sub is not self:
                lines.append(f"  hole {sub.hole_id}: {sub}")
            for text, passed in sub.diagnostics:
                lines.append(f"    candidate {text} passed {passed} tests")
        return "\n".join(lines)


class InternalCheckError(StreamForgeError):
    pass
