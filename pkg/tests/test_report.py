import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from absnorm import VerificationReport
from absnorm.report import dumps, spec_hash, write_atomic


def test_fail_needs_counterexample():
    with pytest.raises(ValueError):
        VerificationReport("c", {}, 1, -1.0, "fail")
    with pytest.raises(ValueError):
        VerificationReport("c", {}, 1, 1.0, "pass", counterexample={"x": 1})
    with pytest.raises(ValueError):
        VerificationReport("c", {}, 1, 1.0, "maybe")


def test_margin_sign_matches_verdict():
    with pytest.raises(ValueError):
        VerificationReport("c", {}, 1, -0.5, "pass")
    with pytest.raises(ValueError):
        VerificationReport("c", {}, 1, 0.5, "fail", counterexample={"x": 0})


def test_dumps_is_canonical():
    a = dumps({"b": np.float64(1.5), "a": [np.int64(2), np.bool_(True)], "c": math.inf})
    assert a == dumps({"c": math.inf, "a": [2, True], "b": 1.5})
    assert json.loads(a) == {"a": [2, True], "b": 1.5, "c": "inf"}
    assert a.endswith("\n")


@given(st.dictionaries(st.text(max_size=5), st.floats(allow_nan=False) | st.integers()))
def test_spec_hash_order_free(d):
    assert spec_hash(d) == spec_hash(dict(reversed(list(d.items()))))


def test_write_atomic(tmp_path):
    path = tmp_path / "sub" / "r.json"
    write_atomic(path, "x\n")
    write_atomic(path, "y\n")
    assert path.read_text() == "y\n"
    assert [p.name for p in path.parent.iterdir()] == ["r.json"]
