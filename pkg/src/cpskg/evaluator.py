"""Numeric spot-evaluation of the evaluable expression subset.

This is a desk-scale verification aid for equations stored in the graph,
deliberately not a solver: only arithmetic and transcendental symbols
evaluate; differential, integral, and statistics operators raise
:class:`UnsupportedOperatorError`. Equality evaluates to the residual
``|lhs - rhs|`` so tests can assert that a binding satisfies an equation
without solving anything.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Union

from .errors import CpskgError
from .om.registry import DEFAULT_REGISTRY, SymbolRegistry
from .om.tree import Application, FloatLiteral, IntLiteral, OMExpression, Symbol, Variable

__all__ = [
    "DomainError",
    "EvaluationError",
    "UnboundVariableError",
    "UnsupportedOperatorError",
    "VariableBinding",
    "binding_map",
    "evaluate",
    "load_bindings",
]


class EvaluationError(CpskgError):
    """Base for evaluation failures."""


class UnboundVariableError(EvaluationError):
    def __init__(self, name: str):
        super().__init__(f"unbound variable: {name}")
        self.name = name


class UnsupportedOperatorError(EvaluationError):
    def __init__(self, cd: str, name: str):
        super().__init__(f"operator {cd}#{name} is not numerically evaluable")
        self.cd = cd
        self.name = name


class DomainError(EvaluationError):
    """An argument outside the operator's real domain (e.g. ln of <= 0)."""


@dataclass(frozen=True)
class VariableBinding:
    name: str
    value: float
    unit: str = ""


Bindings = Union[Mapping[str, float], Iterable[VariableBinding]]


def binding_map(bindings: Bindings) -> dict[str, float]:
    if isinstance(bindings, Mapping):
        return {str(k): float(v) for k, v in bindings.items()}
    out: dict[str, float] = {}
    for b in bindings:
        if b.name in out:
            raise EvaluationError(f"binding set names {b.name!r} twice")
        out[b.name] = float(b.value)
    return out


def load_bindings(path: Union[str, Path]) -> dict[str, float]:
    """Read a JSON object mapping variable names to numbers."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise EvaluationError(f"invalid JSON in bindings file: {exc}") from exc
    if not isinstance(data, dict):
        raise EvaluationError("bindings file must contain a JSON object")
    out: dict[str, float] = {}
    for name, value in data.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise EvaluationError(f"binding {name!r} is not a number: {value!r}")
        out[name] = float(value)
    return out


def _arity(args: list[float], n: int, symbol: Symbol) -> None:
    if len(args) != n:
        raise EvaluationError(f"{symbol.cd}#{symbol.name} expects {n} argument(s), got {len(args)}")


def evaluate(expr: OMExpression, bindings: Bindings, *, registry: SymbolRegistry = DEFAULT_REGISTRY) -> float:
    """Recursively evaluate ``expr`` under ``bindings`` to a double.

    Division by zero surfaces as the builtin :class:`ZeroDivisionError`.
    """
    return _eval(expr, binding_map(bindings), registry)


def _eval(expr: OMExpression, bindings: dict[str, float], registry: SymbolRegistry) -> float:
    if isinstance(expr, Variable):
        try:
            return bindings[expr.name]
        except KeyError:
            raise UnboundVariableError(expr.name) from None
    if isinstance(expr, IntLiteral):
        return float(expr.value)
    if isinstance(expr, FloatLiteral):
        return expr.value
    if isinstance(expr, Symbol):
        raise EvaluationError(f"bare symbol {expr.cd}#{expr.name} has no numeric value")
    if not isinstance(expr, Application):
        raise TypeError(f"not an expression node: {expr!r}")
    op = expr.operator
    if not isinstance(op, Symbol):
        raise EvaluationError("operator must be a content-dictionary symbol")
    info = registry.info(op)
    if info is None or not info.evaluable:
        raise UnsupportedOperatorError(op.cd, op.name)
    args = [_eval(a, bindings, registry) for a in expr.arguments]

    if op.cd == "arith1":
        if op.name == "plus":
            if not args:
                raise EvaluationError("arith1#plus expects at least one argument")
            result = args[0]
            for value in args[1:]:
                result += value
            return result
        if op.name == "times":
            if not args:
                raise EvaluationError("arith1#times expects at least one argument")
            result = args[0]
            for value in args[1:]:
                result *= value
            return result
        if op.name == "minus":
            _arity(args, 2, op)
            return args[0] - args[1]
        if op.name == "divide":
            _arity(args, 2, op)
            return args[0] / args[1]
        if op.name == "power":
            _arity(args, 2, op)
            base, exponent = args
            if base == 0.0 and exponent < 0.0:
                raise ZeroDivisionError(f"0.0 raised to the negative power {exponent}")
            try:
                # math.pow stays real; the ** operator would go complex here
                return math.pow(base, exponent)
            except ValueError as exc:
                raise DomainError(f"power outside the real domain: {base}^{exponent}") from exc
        if op.name == "unary_minus":
            _arity(args, 1, op)
            return -args[0]
    if op == Symbol("relation1", "eq"):
        _arity(args, 2, op)
        return abs(args[0] - args[1])
    if op.cd == "transc1":
        _arity(args, 1, op)
        x = args[0]
        if op.name == "sin":
            return math.sin(x)
        if op.name == "cos":
            return math.cos(x)
        if op.name == "tan":
            return math.tan(x)
        if op.name == "exp":
            return math.exp(x)
        if op.name == "ln":
            if x <= 0.0:
                raise DomainError(f"ln of a non-positive value: {x}")
            return math.log(x)
    # marked evaluable (e.g. via configuration) but no rule here
    raise UnsupportedOperatorError(op.cd, op.name)
