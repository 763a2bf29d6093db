"""streamforge: offline list programs in, online streaming schemes out."""
from streamforge.datas.config import SearchConfig, default_config, load_search_config
from streamforge.datas.result import HoleReport, SynthesisResult
from streamforge.errors import (
    AxiomError, ConfigError, EvalError, InternalCheckError, IRTypeError, ParseError, StreamForgeError,
    SynthesisFailure, TemplateSolveError, UnrollBudgetError,
)
from streamforge.evaluation.concrete import eval_offline, run_scheme
from streamforge.ir.parser import parse_program, parse_scheme
from streamforge.ir.printer import print_program, print_scheme
from streamforge.synthesizer import synthesize

__all__ = [
    "SearchConfig", "default_config", "load_search_config", "HoleReport", "SynthesisResult",
    "AxiomError", "ConfigError", "EvalError", "InternalCheckError", "IRTypeError", "ParseError",
    "StreamForgeError", "SynthesisFailure", "TemplateSolveError", "UnrollBudgetError",
    "eval_offline", "run_scheme", "parse_program", "parse_scheme", "print_program", "print_scheme",
    "synthesize",
]
