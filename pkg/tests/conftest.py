from __future__ import annotations

import os
import subprocess
import sys
from pathlib import Path

import pytest

from cpskg.manifest import compile_manifest, load_manifest
from cpskg.om.xmlio import parse_openmath_xml
from cpskg.vocab import CpsVocabulary

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures" / "ehsa"

EHSA_BASE = "http://example.org/ehsa"


@pytest.fixture(scope="session")
def vocab() -> CpsVocabulary:
    return CpsVocabulary.default()


@pytest.fixture(scope="session")
def ehsa_manifest():
    return load_manifest(FIXTURES / "manifest.json")


@pytest.fixture(scope="session")
def ehsa_graph(ehsa_manifest):
    return compile_manifest(ehsa_manifest)


@pytest.fixture(scope="session")
def golden_text() -> str:
    return (FIXTURES / "golden.nt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def eq1_tree():
    return parse_openmath_xml((FIXTURES / "chamber1_pressure_rate.om.xml").read_bytes())


@pytest.fixture
def run_cli():
    """Run the installed CLI in a subprocess with src/ on the import path."""

    def run(*args: str, **kwargs) -> subprocess.CompletedProcess:
        env = dict(os.environ)
        env["PYTHONPATH"] = str(REPO / "src") + os.pathsep + env.get("PYTHONPATH", "")
        return subprocess.run(
            [sys.executable, "-m", "cpskg", *args],
            capture_output=True,
            text=True,
            env=env,
            **kwargs,
        )

    return run
