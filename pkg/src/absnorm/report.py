"""Verification reports and their deterministic serialisation."""

import hashlib
import json
import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

VERDICTS = ("pass", "fail", "vacuous")


def _plain(obj):
    """Convert numpy scalars/arrays and non-finite floats to JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def dumps(obj):
    """Canonical JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(_plain(obj), sort_keys=True, indent=2) + "\n"


def spec_hash(spec):
    return hashlib.sha256(json.dumps(_plain(spec), sort_keys=True).encode()).hexdigest()


def write_atomic(path, text):
    """Write ``text`` to ``path`` via a temporary file and rename."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class VerificationReport:
    """Outcome of checking one claim on one instance.

    A ``pass`` means no counterexample was found at the stated resolution,
    not that the claim was proved.  ``worst_margin`` is the smallest slack
    seen over all samples; it is negative exactly when the verdict is
    ``fail``.
    """

    claim_id: str
    instance: dict
    samples: int
    worst_margin: float
    verdict: str
    counterexample: dict = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if (self.verdict == "fail") != (self.counterexample is not None):
            raise ValueError("a fail verdict requires a counterexample and vice versa")
        if (self.worst_margin < 0) != (self.verdict == "fail"):
            raise ValueError("worst_margin must be negative exactly for a fail verdict")

    @property
    def passed(self):
        return self.verdict != "fail"

    def to_dict(self):
        return _plain({
            "claim_id": self.claim_id,
            "instance": self.instance,
            "samples": self.samples,
            "worst_margin": self.worst_margin,
            "verdict": self.verdict,
            "counterexample": self.counterexample,
            "details": self.details,
        })
