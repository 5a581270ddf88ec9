import json
import subprocess
import sys

import pytest

from absnorm import __version__
from absnorm.cli import main, plan_suite, run_suite
from absnorm.errors import SpecError

L2 = '{"type": "p", "p": 2}'
LINF = '{"type": "p", "p": "inf"}'
P1 = '{"type": "polygon", "vertices": [[1, 0], [0.5, 0.75], [0, 1]]}'
LINF2 = '{"type": "p", "p": "inf", "dim": 2}'
L12 = '{"type": "p", "p": 1, "dim": 2}'


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def result(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    doc = json.loads(out)
    assert doc["tool"]["version"] == __version__
    return doc["result"]


def test_curve_examples(capsys):
    _, out, _ = run(capsys, "curve", L2, "--n", "4")
    assert out.splitlines() == ["t,f", "0,1", "0.25,0.968245836552", "0.5,0.866025403784",
                                "0.75,0.661437827766", "1,0"]
    _, out, _ = run(capsys, "curve", LINF, "--n", "2")
    assert out.splitlines()[1:] == ["0,1", "0.5,1", "1,1"]
    _, out, _ = run(capsys, "curve", P1, "--n", "2")
    assert out.splitlines()[1:] == ["0,1", "0.5,0.75", "1,0"]


def test_curve_needs_two_intervals(capsys):
    code, _, err = run(capsys, "curve", L2, "--n", "1")
    assert code == 2 and "n:" in err


def test_profile_examples(capsys):
    r = result(capsys, "profile", '{"type": "p", "p": 1}')
    assert (r["F11"], r["class"], r["rF"], r["po"]) == (2.0, "OneNorm", 0.0, [1.0, 0.0])
    r = result(capsys, "profile", L2)
    assert r["F11"] == pytest.approx(2 ** 0.5) and r["class"] == "Neither"
    assert r["rF"] == 1.0 and r["po"] is None
    r = result(capsys, "profile", LINF)
    assert r["class"] == "InfinityNorm" and r["po"] == [1.0, 1.0]
    assert r["asq_obstruction"].startswith("excluded")


def test_parse_error_names_field(capsys):
    code, _, err = run(capsys, "profile", '{"type": "polygon", "vertices": [[1, 0]]}')
    assert code == 2 and "norm.vertices" in err


def test_r_and_dual(capsys):
    r = result(capsys, "r", P1)
    assert r["rF"] == 0.5 and abs(r["rF_bisection"] - 0.5) <= 1e-6
    r = result(capsys, "dual", P1)
    assert r["dual"]["vertices"][1] == pytest.approx([1, 2 / 3])
    assert r["bidual"]["verdict"] == "pass"


def test_moduli_and_slice(capsys):
    r = result(capsys, "moduli", L12, "--resolution", "512")
    assert r["s"]["s_lower"] <= 1 <= r["s"]["s_upper"]
    r = result(capsys, "slice", L12, "--functional", "1,0", "--eps", "0.1")
    assert r["diameter_lower"] <= 0.2 <= r["diameter_upper"]


def test_sum_check_and_bm(capsys):
    r = result(capsys, "sum-check", "asq-impossible", LINF2, LINF2, L2,
               "--resolution", "3000")
    assert r["verdict"] == "pass"
    code, _, err = run(capsys, "sum-check", "asq-impossible", LINF2, LINF2, LINF)
    assert code == 2 and "InfinityNormExcluded" in err
    r = result(capsys, "bm", L12, LINF2, "--restarts", "16", "--map", "[[1,1],[1,-1]]")
    assert r["upper_bound"] <= 1 + 1e-6
    assert r["given_map"]["distortion"] == 1.0
    assert r["s_isometry"]["verdict"] == "pass"


def test_out_file(tmp_path, capsys):
    out = tmp_path / "c.csv"
    assert main(["curve", L2, "--n", "2", "--out", str(out)]) == 0
    assert out.read_text().startswith("t,f\n")


def _manifest(tmp_path, commands):
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"name": "t", "commands": commands}))
    return str(m)


def test_suite_missing_file_fails_fast(tmp_path):
    m = _manifest(tmp_path, [
        {"check": "lemma-infty", "inputs": {"F": json.loads(L2)}},
        {"check": "lemma-loh2", "inputs": {"F": "nowhere.json"}}])
    with pytest.raises(SpecError) as err:
        plan_suite(m)
    assert err.value.field == "commands[1].inputs.F"
    out = tmp_path / "out"
    assert main(["suite", "--manifest", m, "--out", str(out)]) == 2
    assert not out.exists()


def test_suite_unknown_param_fails_fast(tmp_path):
    m = _manifest(tmp_path, [{"check": "lemma-loh3", "inputs": {"F": json.loads(L2)},
                              "params": {"epsilon": 0.1}}])
    with pytest.raises(SpecError, match="epsilon"):
        plan_suite(m)


def test_suite_broken_polygon_is_recorded(tmp_path):
    (tmp_path / "bad.json").write_text(json.dumps(
        {"type": "polygon", "vertices": [[1, 0], [0.2, 0.2], [0, 1]]}))
    m = _manifest(tmp_path, [
        {"id": "bad", "check": "lemma-loh2", "inputs": {"F": "bad.json"}},
        {"id": "good", "check": "lemma-infty", "inputs": {"F": json.loads(P1)}},
        {"id": "refused", "check": "asq-impossible", "expect": "refused",
         "inputs": {"X": json.loads(LINF2), "Y": json.loads(LINF2), "F": json.loads(LINF)}}])
    summary, status = run_suite(m, str(tmp_path / "out"), threads=2)
    assert status == 1
    by_id = {c["id"]: c["status"] for c in summary["checks"]}
    assert by_id == {"bad": "fail", "good": "pass", "refused": "pass"}
    bad = json.loads((tmp_path / "out" / "bad.json").read_text())
    assert bad["error"]["type"] == "NormValidation"


def test_suite_reports_are_deterministic(tmp_path):
    m = _manifest(tmp_path, [
        {"check": "lemma-loh3", "inputs": {"F": json.loads(P1)}, "params": {"eps": 0.1}},
        {"check": "s-isometry", "inputs": {"X": json.loads(L12), "T": [[1, 1], [1, -1]]},
         "params": {"resolution": 256}}])
    for d in ("a", "b"):
        assert run_suite(m, str(tmp_path / d), tol=1e-9, threads=1 if d == "a" else 3)[1] == 0
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert names == sorted(p.name for p in (tmp_path / "b").iterdir())
    for n in names:
        assert (tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes()
    doc = json.loads((tmp_path / "a" / names[0]).read_text())
    assert {"tool", "inputs", "parameters"} <= set(doc)
    assert all("sha256" in v for v in doc["inputs"].values())


def test_threads_env(monkeypatch):
    from absnorm.cli import _threads

    monkeypatch.setenv("ABSNORM_THREADS", "3")
    assert _threads() == 3
    monkeypatch.setenv("ABSNORM_THREADS", "x")
    with pytest.raises(SpecError):
        _threads()


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "absnorm.cli", "--version"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and __version__ in out.stdout
