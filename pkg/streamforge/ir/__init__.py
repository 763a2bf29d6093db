from streamforge.ir.syntax import (
    BUILTINS, XS, X, AccumVar, Apply, Box, Builtin, Const, Expr, Filter, Foldl, Hole, Ite, Lambda,
    Length, Let, ListVar, Map, NewElem, OfflineProgram, OnlineScheme, Snoc, Unknown, Var, call,
    ensure_online, lam, num, y,
)
from streamforge.ir.parser import parse_online_expr, parse_program, parse_scheme
from streamforge.ir.printer import print_expr, print_program, print_scheme, scheme_to_json, to_text
from streamforge.ir.tools import list_expressions, substitute

__all__ = [
    "BUILTINS", "XS", "X", "AccumVar", "Apply", "Box", "Builtin", "Const", "Expr", "Filter", "Foldl",
    "Hole", "Ite", "Lambda", "Length", "Let", "ListVar", "Map", "NewElem", "OfflineProgram",
    "OnlineScheme", "Snoc", "Unknown", "Var", "call", "ensure_online", "lam", "num", "y",
    "parse_online_expr", "parse_program", "parse_scheme", "print_expr", "print_program",
    "print_scheme", "scheme_to_json", "to_text", "list_expressions", "substitute",
]
