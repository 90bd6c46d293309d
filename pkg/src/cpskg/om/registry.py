"""Content-dictionary symbol registry.

Records, per ``(cd, name)`` pair: an advisory arity, whether the evaluator
may compute it numerically, its infix spelling (operator character or
function-call name), and its binary precedence. The registry is immutable;
``extended`` returns a widened copy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional

from .tree import Symbol

__all__ = [
    "DEFAULT_REGISTRY",
    "DIFF",
    "DIVIDE",
    "EQUALS",
    "INTEGRAL",
    "MINUS",
    "PARTIALDIFF",
    "PLUS",
    "POWER",
    "PREC_ADD",
    "PREC_EQ",
    "PREC_MUL",
    "PREC_POW",
    "PREC_UNARY",
    "SymbolInfo",
    "SymbolRegistry",
    "TIMES",
    "UNARY_MINUS",
]

# Binary/unary operator binding strength, shared by the infix parser and printer.
PREC_EQ = 1
PREC_ADD = 2
PREC_MUL = 3
PREC_UNARY = 4
PREC_POW = 5

PLUS = Symbol("arith1", "plus")
MINUS = Symbol("arith1", "minus")
TIMES = Symbol("arith1", "times")
DIVIDE = Symbol("arith1", "divide")
POWER = Symbol("arith1", "power")
UNARY_MINUS = Symbol("arith1", "unary_minus")
EQUALS = Symbol("relation1", "eq")
DIFF = Symbol("weylalgebra1", "diff")
PARTIALDIFF = Symbol("weylalgebra1", "partialdiff")
INTEGRAL = Symbol("calculus1", "int")


@dataclass(frozen=True)
class SymbolInfo:
    """Registry entry. ``arity`` is advisory and never enforced by parsers."""

    arity: Optional[int] = None
    evaluable: bool = False
    token: Optional[str] = None
    precedence: Optional[int] = None


class SymbolRegistry:
    """Immutable lookup table from ``(cd, name)`` to :class:`SymbolInfo`."""

    def __init__(self, entries: Mapping[tuple[str, str], SymbolInfo]):
        self._entries = dict(entries)
        self._functions: dict[str, Symbol] = {}
        for (cd, name), info in sorted(self._entries.items()):
            token = info.token
            if token and (token[0].isalpha() or token[0] == "_"):
                self._functions.setdefault(token, Symbol(cd, name))

    def get(self, cd: str, name: str) -> Optional[SymbolInfo]:
        return self._entries.get((cd, name))

    def info(self, symbol: Symbol) -> Optional[SymbolInfo]:
        return self.get(symbol.cd, symbol.name)

    def knows_cd(self, cd: str) -> bool:
        return any(entry_cd == cd for entry_cd, _ in self._entries)

    def function_symbol(self, token: str) -> Optional[Symbol]:
        """Resolve a function-call spelling (``sin``, ``diff``, ...) to its symbol."""
        return self._functions.get(token)

    def extended(self, extra: Mapping[tuple[str, str], SymbolInfo]) -> "SymbolRegistry":
        merged = dict(self._entries)
        merged.update(extra)
        return SymbolRegistry(merged)

    def __contains__(self, key: tuple[str, str]) -> bool:
        return key in self._entries

    def __iter__(self) -> Iterator[tuple[tuple[str, str], SymbolInfo]]:
        return iter(sorted(self._entries.items()))

    def __len__(self) -> int:
        return len(self._entries)


_DEFAULT_ENTRIES: dict[tuple[str, str], SymbolInfo] = {
    ("arith1", "plus"): SymbolInfo(2, True, "+", PREC_ADD),
    ("arith1", "minus"): SymbolInfo(2, True, "-", PREC_ADD),
    ("arith1", "times"): SymbolInfo(2, True, "*", PREC_MUL),
    ("arith1", "divide"): SymbolInfo(2, True, "/", PREC_MUL),
    ("arith1", "power"): SymbolInfo(2, True, "^", PREC_POW),
    ("arith1", "unary_minus"): SymbolInfo(1, True, "-", PREC_UNARY),
    ("relation1", "eq"): SymbolInfo(2, True, "=", PREC_EQ),
    ("weylalgebra1", "diff"): SymbolInfo(2, False, "diff", None),
    ("weylalgebra1", "partialdiff"): SymbolInfo(None, False, "partialdiff", None),
    ("calculus1", "int"): SymbolInfo(1, False, "int", None),
    ("transc1", "sin"): SymbolInfo(1, True, "sin", None),
    ("transc1", "cos"): SymbolInfo(1, True, "cos", None),
    ("transc1", "tan"): SymbolInfo(1, True, "tan", None),
    ("transc1", "exp"): SymbolInfo(1, True, "exp", None),
    ("transc1", "ln"): SymbolInfo(1, True, "ln", None),
    ("stats1", "mean"): SymbolInfo(None, False, None, None),
    ("stats1", "sdev"): SymbolInfo(None, False, None, None),
    ("stats1", "variance"): SymbolInfo(None, False, None, None),
    ("stats1", "median"): SymbolInfo(None, False, None, None),
    ("stats1", "mode"): SymbolInfo(None, False, None, None),
    ("stats1", "moment"): SymbolInfo(None, False, None, None),
}

DEFAULT_REGISTRY = SymbolRegistry(_DEFAULT_ENTRIES)
