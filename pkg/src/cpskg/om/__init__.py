"""Expression layer: trees, the content-dictionary registry, and XML I/O."""

from .registry import DEFAULT_REGISTRY, SymbolInfo, SymbolRegistry
from .tree import (
    Application,
    FloatLiteral,
    IntLiteral,
    OMExpression,
    Symbol,
    Variable,
    app,
    canonical_form,
    symbols_used,
    variable_names,
    walk,
)
from .xmlio import OmStructureError, XmlSyntaxError, parse_openmath_xml, serialize_openmath_xml

__all__ = [
    "Application",
    "DEFAULT_REGISTRY",
    "FloatLiteral",
    "IntLiteral",
    "OMExpression",
    "OmStructureError",
    "Symbol",
    "SymbolInfo",
    "SymbolRegistry",
    "Variable",
    "XmlSyntaxError",
    "app",
    "canonical_form",
    "parse_openmath_xml",
    "serialize_openmath_xml",
    "symbols_used",
    "variable_names",
    "walk",
]
