#!/usr/bin/env python3
"""Run the acceptance suite and print its per-criterion PASS/FAIL lines."""

import subprocess
import sys
from pathlib import Path

root = Path(__file__).resolve().parents[1]
code = subprocess.call([sys.executable, "-m", "pytest",
                        str(root / "tests" / "test_acceptance.py"), "-v", "-s"])
raise SystemExit(code)
