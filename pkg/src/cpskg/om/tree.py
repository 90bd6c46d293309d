"""Immutable expression trees for mathematical objects.

The tree mirrors the object layer of the OpenMath XML encoding: function
applications, content-dictionary symbols, variables, and integer/double
literals. Trees are value objects; they hash, compare structurally, and can
be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

__all__ = [
    "Application",
    "FloatLiteral",
    "IntLiteral",
    "OMExpression",
    "Symbol",
    "Variable",
    "app",
    "canonical_form",
    "symbols_used",
    "variable_names",
    "walk",
]

OMExpression = Union["Application", "Symbol", "Variable", "IntLiteral", "FloatLiteral"]


@dataclass(frozen=True)
class Symbol:
    """A named symbol from a content dictionary, e.g. ``arith1`` / ``plus``."""

    cd: str
    name: str

    def __post_init__(self) -> None:
        if not self.cd or not self.name:
            raise ValueError("symbol cd and name must be non-empty")


@dataclass(frozen=True)
class Variable:
    """A free variable, identified by its (whitespace-free) name."""

    name: str

    def __post_init__(self) -> None:
        if not self.name or any(c.isspace() for c in self.name):
            raise ValueError(f"variable name must be non-empty and free of whitespace: {self.name!r}")


@dataclass(frozen=True)
class IntLiteral:
    """An arbitrary-precision integer literal."""

    value: int


@dataclass(frozen=True)
class FloatLiteral:
    """An IEEE-754 double literal."""

    value: float


@dataclass(frozen=True)
class Application:
    """An operator applied to an ordered (possibly empty) argument list.

    The operator is usually a :class:`Symbol` but may be any expression.
    """

    operator: OMExpression
    arguments: tuple[OMExpression, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "arguments", tuple(self.arguments))


def app(operator: OMExpression, *arguments: OMExpression) -> Application:
    """Convenience constructor: ``app(PLUS, x, y)``."""
    return Application(operator, arguments)


def walk(expr: OMExpression) -> Iterator[OMExpression]:
    """Yield every node of the tree in pre-order (operator before arguments)."""
    yield expr
    if isinstance(expr, Application):
        yield from walk(expr.operator)
        for arg in expr.arguments:
            yield from walk(arg)


def variable_names(expr: OMExpression) -> set[str]:
    return {node.name for node in walk(expr) if isinstance(node, Variable)}


def symbols_used(expr: OMExpression) -> set[Symbol]:
    return {node for node in walk(expr) if isinstance(node, Symbol)}


def canonical_form(expr: OMExpression) -> str:
    """Deterministic prefix rendering used as a structural identity key.

    Structurally equal trees map to identical strings; trees differing in
    argument order map to different strings. Injectivity assumes names avoid
    the delimiter characters ``.()$,``, which holds for every registered
    content dictionary and identifier-shaped variable name.
    """
    if isinstance(expr, Application):
        args = ", ".join(canonical_form(a) for a in expr.arguments)
        return f"{canonical_form(expr.operator)}({args})"
    if isinstance(expr, Symbol):
        return f"{expr.cd}.{expr.name}"
    if isinstance(expr, Variable):
        return f"${expr.name}"
    if isinstance(expr, IntLiteral):
        return str(expr.value)
    if isinstance(expr, FloatLiteral):
        return repr(expr.value)
    raise TypeError(f"not an expression node: {expr!r}")
