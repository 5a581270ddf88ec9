"""JSON descriptions of norms and spaces.

Norms::

    {"type": "p", "p": 2}            {"type": "p", "p": "inf"}
    {"type": "polygon", "vertices": [[1, 0], [0.5, 0.75], [0, 1]]}
    {"type": "swap", "inner": <norm>}
    {"type": "dual", "inner": <norm>, "resolution": 256}

Spaces::

    {"type": "p", "p": 2, "dim": 3}
    {"type": "polyhedral", "functionals": [[1, 0], [0, 1], [1, 1]]}
    {"type": "fsum", "left": <space>, "right": <space>, "F": <norm>}
    {"type": "image", "base": <space>, "matrix": [[1, 1], [1, -1]]}

Every parse error is a :class:`SpecError` whose ``field`` is the dotted
path of the offending entry.
"""

import json
import math
import os

from .dual import dual
from .errors import SpecError
from .norm2 import PNorm, Polygonal, swap
from .space import FSum, ImageSpace, Polyhedral, PSpace


def _p_value(raw, path):
    if isinstance(raw, str):
        if raw.strip().lower() in ("inf", "infinity"):
            return math.inf
        raise SpecError(f"expected a number or 'inf', got {raw!r}", path)
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise SpecError(f"expected a number or 'inf', got {raw!r}", path)
    return float(raw)


def _require(obj, key, path):
    if not isinstance(obj, dict):
        raise SpecError("expected an object", path)
    if key not in obj:
        raise SpecError("missing field", f"{path}.{key}")
    return obj[key]


def _rewrap(exc, path):
    inner = f"{path}.{exc.field}" if exc.field else path
    return SpecError(exc.reason, inner)


def _positive_int(raw, path):
    if isinstance(raw, bool) or not isinstance(raw, int) or raw < 1:
        raise SpecError(f"expected a positive integer, got {raw!r}", path)
    return raw


def parse_norm(obj, path="norm"):
    """Build an :class:`AbsoluteNorm` from its JSON description."""
    kind = _require(obj, "type", path)
    try:
        if kind == "p":
            return PNorm(_p_value(_require(obj, "p", path), f"{path}.p"))
        if kind == "polygon":
            return Polygonal(_require(obj, "vertices", path))
        if kind == "swap":
            return swap(parse_norm(_require(obj, "inner", path), f"{path}.inner"))
        if kind == "dual":
            inner = parse_norm(_require(obj, "inner", path), f"{path}.inner")
            res = _positive_int(obj.get("resolution", 256), f"{path}.resolution")
            if res < 8:
                raise SpecError("must be >= 8", f"{path}.resolution")
            return dual(inner, res)
    except SpecError as exc:
        if exc.field and exc.field.startswith(path):
            raise
        raise _rewrap(exc, path) from None
    raise SpecError(f"unknown norm type {kind!r}", f"{path}.type")


def parse_space(obj, path="space"):
    """Build a :class:`FiniteSpace` from its JSON description."""
    kind = _require(obj, "type", path)
    try:
        if kind == "p":
            p = _p_value(_require(obj, "p", path), f"{path}.p")
            dim = _positive_int(_require(obj, "dim", path), f"{path}.dim")
            return PSpace(p, dim)
        if kind == "polyhedral":
            return Polyhedral(_require(obj, "functionals", path))
        if kind == "fsum":
            left = parse_space(_require(obj, "left", path), f"{path}.left")
            right = parse_space(_require(obj, "right", path), f"{path}.right")
            F = parse_norm(_require(obj, "F", path), f"{path}.F")
            return FSum(left, right, F)
        if kind == "image":
            base = parse_space(_require(obj, "base", path), f"{path}.base")
            try:
                return ImageSpace(base, _require(obj, "matrix", path))
            except ValueError as exc:
                if isinstance(exc, SpecError):
                    raise
                raise SpecError(str(exc), f"{path}.matrix") from None
    except SpecError as exc:
        if exc.field and exc.field.startswith(path):
            raise
        raise _rewrap(exc, path) from None
    raise SpecError(f"unknown space type {kind!r}", f"{path}.type")


def read_json(source, path="spec"):
    """Load a JSON object from a file path, a JSON string, or pass a dict through."""
    if isinstance(source, dict):
        return source
    text = os.fspath(source)
    if not text.lstrip().startswith("{"):
        try:
            with open(text) as fh:
                text = fh.read()
        except OSError as exc:
            raise SpecError(f"cannot read {source}: {exc.strerror}", path) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
                        path) from None


def load_norm(source):
    return parse_norm(read_json(source, "norm"))


def load_space(source):
    return parse_space(read_json(source, "space"))
