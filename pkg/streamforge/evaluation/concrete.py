# streamforge/evaluation/concrete.py
"""
Exact big-step interpreter for offline programs, online expressions and schemes.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from streamforge.errors import EvalError
from streamforge.evaluation.builtins import Value, apply_builtin, as_bool
from streamforge.ir.syntax import (
    AccumVar, Apply, Builtin, Const, Expr, Filter, Foldl, Ite, Lambda, Length, ListVar, Map,
    NewElem, OfflineProgram, OnlineScheme, Snoc, Var,
)


def to_fraction(v) -> Fraction:
    if isinstance(v, bool) or isinstance(v, float) or not isinstance(v, (int, Fraction)):
        raise EvalError(f"inputs must be exact rationals, got {v!r}")
    return Fraction(v)


@dataclass(frozen=True)
class Env:
    names: Mapping[str, Value] = field(default_factory=dict)
    xs: Optional[Tuple[Fraction, ...]] = None
    accums: Tuple[Value, ...] = ()
    new_elem: Optional[Value] = None

    def bind(self, params: Sequence[str], values: Sequence[Value]) -> "Env":
        return replace(self, names={**self.names, **dict(zip(params, values))})


def evaluate(e: Expr, env: Env) -> Value:
    match e:
        case Const(value):
            return value
        case Var(name):
            if name not in env.names:
                raise EvalError(f"unbound variable '{name}'")
            return env.names[name]
        case ListVar():
            if env.xs is None:
                raise EvalError("xs is not bound in this context")
            return list(env.xs)
        case Snoc(lst, elem):
            return _as_list(evaluate(lst, env)) + [evaluate(elem, env)]
        case Map(fn, lst):
            return [call_fn(fn, (v,), env) for v in _as_list(evaluate(lst, env))]
        case Filter(fn, lst):
            return [v for v in _as_list(evaluate(lst, env)) if as_bool(call_fn(fn, (v,), env), "filter")]
        case Foldl(fn, init, lst):
            acc = evaluate(init, env)
            for v in _as_list(evaluate(lst, env)):
                acc = call_fn(fn, (acc, v), env)
            return acc
        case Length(lst):
            return Fraction(len(_as_list(evaluate(lst, env))))
        case Apply(fn, args):
            return call_fn(fn, tuple(evaluate(a, env) for a in args), env)
        case Ite(cond, then, orelse):
            return evaluate(then if as_bool(evaluate(cond, env), "ite") else orelse, env)
        case AccumVar(index):
            if index > len(env.accums):
                raise EvalError(f"y{index} is not bound (arity {len(env.accums)})")
            return env.accums[index - 1]
        case NewElem():
            if env.new_elem is None:
                raise EvalError("x is not bound in this context")
            return env.new_elem
    raise EvalError(f"cannot evaluate {type(e).__name__}")


def call_fn(fn: Expr, args: Tuple[Value, ...], env: Env) -> Value:
    if isinstance(fn, Builtin):
        return apply_builtin(fn.name, args)
    if isinstance(fn, Lambda):
        if len(fn.params) != len(args):
            raise EvalError(f"lambda expects {len(fn.params)} arguments, got {len(args)}")
        return evaluate(fn.body, env.bind(fn.params, args))
    raise EvalError(f"not a function: {type(fn).__name__}")


def _as_list(v: Value) -> List[Value]:
    if not isinstance(v, list):
        raise EvalError(f"expected a list, got {v!r}")
    return v


def _extra_env(names: Sequence[str], values: Sequence) -> Dict[str, Value]:
    if len(names) != len(values):
        raise EvalError(f"expected {len(names)} extra arguments, got {len(values)}")
    return {n: to_fraction(v) for n, v in zip(names, values)}


# ------------------------------------------------------------------
# Entry points
# ------------------------------------------------------------------
def eval_offline(p: OfflineProgram, xs: Sequence, extra_args: Sequence = ()) -> Value:
    env = Env(names=_extra_env(p.extra_args, extra_args), xs=tuple(to_fraction(v) for v in xs))
    return evaluate(p.body, env)


def eval_on_list(e: Expr, xs: Sequence[Fraction], extras: Mapping[str, Value] = None) -> Value:
    """Evaluate an offline (sub)expression with xs bound; extras by name."""
    return evaluate(e, Env(names=dict(extras or {}), xs=tuple(xs)))


def eval_snoc(e: Expr, xs: Sequence[Fraction], x: Fraction, extras: Mapping[str, Value] = None) -> Value:
    """Evaluate a specification on xs ++ [x]."""
    return evaluate(e, Env(names=dict(extras or {}), xs=tuple(xs) + (x,)))


def eval_online(e: Expr, accums: Sequence[Value], x: Value, extras: Mapping[str, Value] = None) -> Value:
    return evaluate(e, Env(names=dict(extras or {}), accums=tuple(accums), new_elem=x))


def step_scheme(s: OnlineScheme, acc: Tuple[Value, ...], x: Value, extras: Mapping[str, Value]) -> Tuple[Value, ...]:
    env = Env(names=dict(extras), accums=acc, new_elem=x)
    out = tuple(evaluate(c, env) for c in s.body)
    if len(out) != s.arity:
        raise EvalError(f"update produced {len(out)} values for arity {s.arity}")
    return out


def run_scheme(s: OnlineScheme, stream: Sequence, extra_args: Sequence = ()) -> List[Value]:
    """
    Replay a scheme: the empty stream yields [first initial value]; otherwise one
    output (the first accumulator) per element.
    """
    extras = _extra_env(s.extra_args, extra_args)
    acc: Tuple[Value, ...] = tuple(s.initializer)
    if not stream:
        return [acc[0]]
    out: List[Value] = []
    for x in stream:
        acc = step_scheme(s, acc, to_fraction(x), extras)
        out.append(acc[0])
    return out
