"""Run the bundled manifest of checks and summarise the verdicts."""

import json
import sys
from collections import Counter
import tempfile
from pathlib import Path

from absnorm.cli import run_suite

with tempfile.TemporaryDirectory() as tmp:
    _, status = run_suite("paper-suite", tmp)
    summary = json.loads((Path(tmp) / "summary.json").read_text())
    entries = summary if isinstance(summary, list) else next(
        v for v in summary.values() if isinstance(v, list))
    for e in entries:
        print(f"{e['id']:32s} {e['status']}")
    print(dict(Counter(e["status"] for e in entries)))
sys.exit(status)
