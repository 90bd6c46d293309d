"""Matlab-flavored infix front end: text to expression trees and back.

Grammar (see docs/infix-grammar.md): binary ``+ - * / ^`` with conventional
precedence (``^`` right-associative and strongest, then ``* /``, then
``+ -``), unary minus, one ``=`` at statement level, ``name(arg, ...)``
calls resolved through the symbol registry, ``cd.name(...)`` for explicit
content-dictionary symbols, parentheses, and decimal/integer literals.
There is no implicit multiplication.

``print_infix`` is the inverse direction; its output re-parses to a
structurally equal tree for every symbol-headed expression. Unary minus
directly over a numeric literal is normalized by the parser into a negative
literal, so the printer renders that pattern in call syntax instead.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import CpskgError
from .om.registry import (
    DEFAULT_REGISTRY,
    DIVIDE,
    EQUALS,
    MINUS,
    PLUS,
    POWER,
    PREC_ADD,
    PREC_EQ,
    PREC_MUL,
    PREC_POW,
    PREC_UNARY,
    TIMES,
    UNARY_MINUS,
    SymbolInfo,
    SymbolRegistry,
)
from .om.tree import Application, FloatLiteral, IntLiteral, OMExpression, Symbol, Variable

__all__ = ["LexError", "ParseError", "UnknownFunctionError", "parse_infix", "print_infix"]

_ATOM = 10


class LexError(CpskgError):
    """An input character that no token can start with."""


class ParseError(CpskgError):
    """A token sequence the grammar does not accept."""


class UnknownFunctionError(ParseError):
    """A function name with no registry entry (strict mode only)."""


@dataclass(frozen=True)
class _Token:
    kind: str  # number | ident | op | end
    text: str
    pos: int


_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<number>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<op>[-+*/^=(),.])
    """,
    re.VERBOSE,
)

# token text -> (symbol, precedence, associativity)
_BINARY = {
    "+": (PLUS, PREC_ADD, "left"),
    "-": (MINUS, PREC_ADD, "left"),
    "*": (TIMES, PREC_MUL, "left"),
    "/": (DIVIDE, PREC_MUL, "left"),
    "^": (POWER, PREC_POW, "right"),
}


def _lex(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise LexError(f"illegal character {text[pos]!r} at position {pos}")
        pos = m.end()
        if m.lastgroup == "ws":
            continue
        tokens.append(_Token(m.lastgroup or "", m.group(), m.start()))
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], registry: SymbolRegistry, strict: bool, default_cd: str):
        self.tokens = tokens
        self.i = 0
        self.registry = registry
        self.strict = strict
        self.default_cd = default_cd

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        if tok.kind != "end":
            self.i += 1
        return tok

    def expect(self, text: str) -> None:
        tok = self.advance()
        if tok.text != text:
            raise ParseError(f"expected {text!r} at position {tok.pos}, found {self._show(tok)}")

    @staticmethod
    def _show(tok: _Token) -> str:
        return "end of input" if tok.kind == "end" else repr(tok.text)

    def expression(self, min_prec: int) -> OMExpression:
        left = self.prefix()
        while True:
            tok = self.peek()
            entry = _BINARY.get(tok.text) if tok.kind == "op" else None
            if entry is None:
                return left
            symbol, prec, assoc = entry
            if prec < min_prec:
                return left
            self.advance()
            right = self.expression(prec + 1 if assoc == "left" else prec)
            left = Application(symbol, (left, right))

    def prefix(self) -> OMExpression:
        tok = self.advance()
        if tok.kind == "end":
            raise ParseError("unexpected end of input")
        if tok.text == "-":
            operand = self.expression(PREC_UNARY)
            if isinstance(operand, IntLiteral):
                return IntLiteral(-operand.value)
            if isinstance(operand, FloatLiteral):
                return FloatLiteral(-operand.value)
            return Application(UNARY_MINUS, (operand,))
        if tok.text == "(":
            inner = self.expression(0)
            self.expect(")")
            return inner
        if tok.kind == "number":
            if "." in tok.text or "e" in tok.text or "E" in tok.text:
                return FloatLiteral(float(tok.text))
            return IntLiteral(int(tok.text))
        if tok.kind == "ident":
            return self.name(tok)
        raise ParseError(f"unexpected {self._show(tok)} at position {tok.pos}")

    def name(self, tok: _Token) -> OMExpression:
        if self.peek().text == ".":
            self.advance()
            part = self.advance()
            if part.kind != "ident":
                raise ParseError(f"expected symbol name after '.' at position {part.pos}")
            symbol = Symbol(tok.text, part.text)
            if self.peek().text == "(":
                self.advance()
                return Application(symbol, tuple(self.arguments()))
            return symbol
        if self.peek().text == "(":
            self.advance()
            symbol = self.registry.function_symbol(tok.text)
            if symbol is None:
                if self.strict:
                    raise UnknownFunctionError(f"unknown function {tok.text!r}")
                symbol = Symbol(self.default_cd, tok.text)
            return Application(symbol, tuple(self.arguments()))
        return Variable(tok.text)

    def arguments(self) -> list[OMExpression]:
        if self.peek().text == ")":
            self.advance()
            return []
        args = [self.expression(0)]
        while self.peek().text == ",":
            self.advance()
            args.append(self.expression(0))
        self.expect(")")
        return args


def parse_infix(
    text: str,
    *,
    registry: SymbolRegistry = DEFAULT_REGISTRY,
    strict: bool = True,
    default_cd: str = "user1",
) -> OMExpression:
    """Parse infix text into an expression tree.

    ``=`` may appear once, at statement level, and produces an application
    of ``relation1.eq``. Numbers without a decimal point or exponent become
    integer literals, all others doubles.
    """
    if not text.strip():
        raise ParseError("empty input")
    parser = _Parser(_lex(text), registry, strict, default_cd)
    expr = parser.expression(0)
    if parser.peek().text == "=":
        parser.advance()
        rhs = parser.expression(0)
        expr = Application(EQUALS, (expr, rhs))
    tok = parser.peek()
    if tok.kind != "end":
        raise ParseError(f"unexpected {_Parser._show(tok)} at position {tok.pos}")
    return expr


# --- printing ---------------------------------------------------------------

_TIGHT = {"*", "/", "^"}


def _is_numeric_literal(expr: OMExpression) -> bool:
    return isinstance(expr, (IntLiteral, FloatLiteral))


def _display_prec(expr: OMExpression, registry: SymbolRegistry) -> int:
    """Binding strength of the rendered form, used to decide parenthesization."""
    if isinstance(expr, IntLiteral):
        return PREC_UNARY if expr.value < 0 else _ATOM
    if isinstance(expr, FloatLiteral):
        return PREC_UNARY if repr(expr.value).startswith("-") else _ATOM
    if isinstance(expr, Application) and isinstance(expr.operator, Symbol):
        op = expr.operator
        if op == UNARY_MINUS and len(expr.arguments) == 1 and not _is_numeric_literal(expr.arguments[0]):
            return PREC_UNARY
        entry = _BINARY.get((registry.info(op) or _NO_INFO).token or "")
        if entry is not None and entry[0] == op and len(expr.arguments) == 2:
            return entry[1]
    return _ATOM


_NO_INFO = SymbolInfo()


def _fmt(expr: OMExpression, min_prec: int, registry: SymbolRegistry) -> str:
    rendered = _fmt_raw(expr, registry)
    if _display_prec(expr, registry) < min_prec:
        return f"({rendered})"
    return rendered


def _call(head: str, arguments: tuple[OMExpression, ...], registry: SymbolRegistry) -> str:
    return f"{head}({', '.join(_fmt(a, 0, registry) for a in arguments)})"


def _fmt_raw(expr: OMExpression, registry: SymbolRegistry) -> str:
    if isinstance(expr, Variable):
        return expr.name
    if isinstance(expr, IntLiteral):
        return str(expr.value)
    if isinstance(expr, FloatLiteral):
        return repr(expr.value)
    if isinstance(expr, Symbol):
        return f"{expr.cd}.{expr.name}"
    if isinstance(expr, Application):
        op = expr.operator
        if isinstance(op, Symbol):
            info = registry.info(op)
            token = info.token if info else None
            if op == UNARY_MINUS and len(expr.arguments) == 1:
                arg = expr.arguments[0]
                if not _is_numeric_literal(arg):
                    return f"-{_fmt(arg, PREC_UNARY, registry)}"
                # "-3" would re-parse as a negative literal, not an application
                return _call(f"{op.cd}.{op.name}", expr.arguments, registry)
            entry = _BINARY.get(token or "")
            if entry is not None and entry[0] == op and len(expr.arguments) == 2:
                prec, assoc = entry[1], entry[2]
                left_min = prec if assoc == "left" else prec + 1
                right_min = prec + 1 if assoc == "left" else prec
                sep = token if token in _TIGHT else f" {token} "
                left = _fmt(expr.arguments[0], left_min, registry)
                right = _fmt(expr.arguments[1], right_min, registry)
                return f"{left}{sep}{right}"
            if token and (token[0].isalpha() or token[0] == "_") and registry.function_symbol(token) == op:
                return _call(token, expr.arguments, registry)
            return _call(f"{op.cd}.{op.name}", expr.arguments, registry)
        # non-symbol operator: readable but outside the grammar
        return _call(_fmt(op, _ATOM, registry), expr.arguments, registry)
    raise TypeError(f"not an expression node: {expr!r}")


def print_infix(expr: OMExpression, *, registry: SymbolRegistry = DEFAULT_REGISTRY) -> str:
    """Render a tree as one line of infix text with minimal parenthesization.

    Symbols without an infix spelling fall back to ``cd.name(args)`` call
    syntax, which the parser also accepts, so any symbol-headed tree
    round-trips through :func:`parse_infix`.
    """
    if (
        isinstance(expr, Application)
        and isinstance(expr.operator, Symbol)
        and expr.operator == EQUALS
        and len(expr.arguments) == 2
    ):
        lhs = _fmt(expr.arguments[0], PREC_EQ, registry)
        rhs = _fmt(expr.arguments[1], PREC_EQ, registry)
        return f"{lhs} = {rhs}"
    return _fmt(expr, 0, registry)
