from __future__ import annotations

import subprocess
import sys
from pathlib import Path

import pytest

from rescueplan.session import load_scenario

ROOT = Path(__file__).resolve().parents[1]
SCENARIO = ROOT / "scenarios" / "tehran"
CORPUS = Path(__file__).resolve().parent / "fixtures" / "corpus"
MAP = Path(__file__).resolve().parent / "fixtures" / "tehran_map"
GOLDENS = Path(__file__).resolve().parent / "goldens"


@pytest.fixture
def tehran():
    """A fresh session on the bundled scenario (no events applied)."""
    return load_scenario(str(SCENARIO))


def run_cli(*args, timeout=120):
    """Run the installed CLI in a subprocess and capture both streams."""
    return subprocess.run(
        [sys.executable, "-m", "rescueplan", *[str(a) for a in args]],
        capture_output=True, text=True, timeout=timeout, cwd=str(ROOT))


def strip_stats(text: str) -> str:
    """Drop the timing line so golden comparisons stay byte-stable."""
    return "".join(line for line in text.splitlines(keepends=True)
                   if not line.startswith("stats:"))
