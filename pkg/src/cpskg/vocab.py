"""Namespace bindings, vocabulary defaults, and tool configuration.

All vocabulary namespaces except rdf/xsd/sosa are repo-local defaults and
can be overridden through one JSON configuration file (see
docs/namespaces.md). The configuration also controls strictness, the
default content dictionary for lenient function resolution, the CD base
IRI used for symbol nodes, and registry extensions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Union

from .errors import CpskgError
from .om.registry import DEFAULT_REGISTRY, SymbolInfo, SymbolRegistry
from .rdf import Namespace

__all__ = [
    "ConfigError",
    "CpsVocabulary",
    "DEFAULT_CD_BASE",
    "DEFAULT_NAMESPACES",
    "ToolConfig",
    "load_config",
]

DEFAULT_CD_BASE = "http://www.openmath.org/cd"

DEFAULT_NAMESPACES: dict[str, str] = {
    "om": "http://example.org/cpskg/openmath#",
    "cpsmod": "http://example.org/cpskg/cpsmod#",
    "vdi3682": "http://example.org/cpskg/vdi3682#",
    "vdi2206": "http://example.org/cpskg/vdi2206#",
    "dinen61360": "http://example.org/cpskg/dinen61360#",
    "din77005": "http://example.org/cpskg/din77005#",
    "sosa": "http://www.w3.org/ns/sosa/",
}


class ConfigError(CpskgError):
    """An unreadable or invalid configuration file."""


@dataclass(frozen=True)
class CpsVocabulary:
    """Term namespaces for the modeling stack plus the CD base IRI."""

    om: Namespace
    cpsmod: Namespace
    vdi3682: Namespace
    vdi2206: Namespace
    dinen61360: Namespace
    din77005: Namespace
    sosa: Namespace
    cd_base: str = DEFAULT_CD_BASE

    @classmethod
    def default(cls) -> "CpsVocabulary":
        return cls.from_mapping({})

    @classmethod
    def from_mapping(cls, namespaces: Mapping[str, str], cd_base: Optional[str] = None) -> "CpsVocabulary":
        merged = dict(DEFAULT_NAMESPACES)
        for key, value in namespaces.items():
            if key not in merged:
                raise ConfigError(f"unknown namespace key: {key!r}")
            merged[key] = value
        return cls(
            om=Namespace(merged["om"]),
            cpsmod=Namespace(merged["cpsmod"]),
            vdi3682=Namespace(merged["vdi3682"]),
            vdi2206=Namespace(merged["vdi2206"]),
            dinen61360=Namespace(merged["dinen61360"]),
            din77005=Namespace(merged["din77005"]),
            sosa=Namespace(merged["sosa"]),
            cd_base=cd_base or DEFAULT_CD_BASE,
        )

    def prefixes(self) -> dict[str, str]:
        return {
            "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
            "xsd": "http://www.w3.org/2001/XMLSchema#",
            "om": self.om.base,
            "cpsmod": self.cpsmod.base,
            "vdi3682": self.vdi3682.base,
            "vdi2206": self.vdi2206.base,
            "dinen61360": self.dinen61360.base,
            "din77005": self.din77005.base,
            "sosa": self.sosa.base,
        }


@dataclass(frozen=True)
class ToolConfig:
    """Resolved configuration shared by the CLI commands."""

    vocab: CpsVocabulary = field(default_factory=CpsVocabulary.default)
    strict: bool = True
    default_cd: str = "user1"
    registry: SymbolRegistry = DEFAULT_REGISTRY


def load_config(path: Union[str, Path, None]) -> ToolConfig:
    """Load a JSON configuration file; ``None`` yields the defaults.

    Recognized keys: ``namespaces`` (prefix to IRI overrides), ``cdBase``,
    ``strict``, ``defaultCd``, ``symbols`` (registry extensions, each with
    ``cd``, ``name`` and optional ``arity``/``evaluable``/``token``/
    ``precedence``).
    """
    if path is None:
        return ToolConfig()
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in configuration file: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("configuration file must contain a JSON object")
    try:
        vocab = CpsVocabulary.from_mapping(data.get("namespaces", {}), data.get("cdBase"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    registry = DEFAULT_REGISTRY
    extra: dict[tuple[str, str], SymbolInfo] = {}
    for entry in data.get("symbols", []):
        try:
            extra[(entry["cd"], entry["name"])] = SymbolInfo(
                arity=entry.get("arity"),
                evaluable=bool(entry.get("evaluable", False)),
                token=entry.get("token"),
                precedence=entry.get("precedence"),
            )
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"invalid symbol entry: {entry!r}") from exc
    if extra:
        registry = registry.extended(extra)
    return ToolConfig(
        vocab=vocab,
        strict=bool(data.get("strict", True)),
        default_cd=str(data.get("defaultCd", "user1")),
        registry=registry,
    )
