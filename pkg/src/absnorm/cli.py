"""Command-line front end.

Every verb prints a JSON report (or CSV for ``curve``) to stdout, or writes
it to ``--out``.  Specs are given as file paths or inline JSON.
"""

import argparse
import inspect
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources

import numpy as np

from . import __version__
from .bm import bm_search, check_s_isometry_invariance, operator_norm
from .dual import bidual_check, dual, duality_chain_check
from .errors import InfinityNormExcluded, SpecError
from .geometry import asq_obstruction, profile, r_of
from .norm2 import boundary, swap, validate
from .report import dumps, spec_hash, write_atomic
from .space import SliceQuery, lasq_defect, s_modulus, slice_diameter
from .specs import parse_norm, parse_space, read_json
from .verify import (check_asq_impossible, check_lemma_infty, check_loh2, check_loh3,
                     check_prop_loh, check_sum_lasq_transfer)

TOOL = {"name": "absnorm", "version": __version__}
BUNDLED = {"paper-suite": "paper-suite.json"}

# claim -> (function, required inputs, optional inputs)
CHECKS = {
    "norm-facts": (validate, ("F",), ()),
    "lemma-infty": (check_lemma_infty, ("F",), ()),
    "lemma-loh2": (check_loh2, ("F",), ()),
    "lemma-loh3": (check_loh3, ("F",), ()),
    "bidual": (bidual_check, ("F",), ()),
    "duality-chain": (duality_chain_check, ("F",), ()),
    "prop-loh": (check_prop_loh, ("X", "Y", "F"), ()),
    "sum-lasq-transfer": (check_sum_lasq_transfer, ("X", "Y", "F"), ()),
    "sum-wasq-transfer": (check_sum_lasq_transfer, ("X", "Y", "F"), ()),
    "asq-impossible": (check_asq_impossible, ("X", "Y", "F"), ()),
    "s-isometry": (check_s_isometry_invariance, ("X", "T"), ("target",)),
}
NOTES = {
    "sum-wasq-transfer": "weak-null witnesses are automatic in finite dimensions; "
                         "this runs the LASQ transfer check",
}
REFUSALS = (InfinityNormExcluded,)


def _threads():
    raw = os.environ.get("ABSNORM_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise SpecError(f"expected an integer, got {raw!r}", "ABSNORM_THREADS") from None
    return min(4, os.cpu_count() or 1)


def _tol(args):
    return 1e-9 if args.tol is None else args.tol


def _emit(text, out):
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _envelope(command, inputs, params, result):
    return {
        "tool": TOOL,
        "command": command,
        "inputs": {k: {"spec": v, "sha256": spec_hash(v)} for k, v in inputs.items()},
        "parameters": params,
        "result": result,
    }


def _guard(fn, *args, **kwargs):
    """Run ``fn``; return its value or an embedded error note."""
    try:
        return fn(*args, **kwargs)
    except (ValueError, RuntimeError) as exc:
        return {"error": type(exc).__name__, "message": str(exc)}


def _matrix(text):
    try:
        M = np.array(json.loads(text), dtype=float)
    except (json.JSONDecodeError, TypeError, ValueError):
        raise SpecError("expected a row-major JSON matrix such as [[1,1],[1,-1]]",
                        "map") from None
    if M.ndim != 2:
        raise SpecError("expected a square matrix", "map")
    return M


# ----------------------------------------------------------------- verbs


def cmd_profile(args):
    F = parse_norm(read_json(args.norm, "norm"))
    res = args.resolution or 4096
    prof = _guard(profile, F, _tol(args), res)
    result = prof.to_dict() if hasattr(prof, "to_dict") else {"profile": prof}
    if result.get("po", "") is None:
        result["po_note"] = "not found at resolution 10000"
    try:
        result["asq_obstruction"] = asq_obstruction(F)
    except InfinityNormExcluded:
        result["asq_obstruction"] = "excluded: F is the max-norm"
    except (ValueError, RuntimeError) as exc:
        result["asq_obstruction"] = {"error": type(exc).__name__, "message": str(exc)}
    return _envelope("profile", {"norm": F.to_spec()},
                     {"tol": _tol(args), "resolution": res}, result)


def cmd_curve(args):
    F = parse_norm(read_json(args.norm, "norm"))
    if args.n < 2:
        raise SpecError("must be >= 2", "n")
    t = np.linspace(0.0, 1.0, args.n + 1)
    f = np.atleast_1d(boundary(F, t, _tol(args)))
    rows = ["t,f"] + [f"{a:.12g},{b:.12g}" for a, b in zip(t, f)]
    return "\n".join(rows) + "\n"


def cmd_dual(args):
    F = parse_norm(read_json(args.norm, "norm"))
    res = args.resolution or 256
    D = dual(F, res)
    t = np.linspace(0.0, 1.0, 9)
    result = {
        "dual": D.to_spec(),
        "boundary": [[float(a), float(b)] for a, b in zip(t, np.atleast_1d(D.boundary(t)))],
        "bidual": bidual_check(F, res).to_dict(),
    }
    return _envelope("dual", {"norm": F.to_spec()}, {"resolution": res}, result)


def cmd_r(args):
    F = parse_norm(read_json(args.norm, "norm"))
    result = {
        "rF": r_of(F, _tol(args)),
        "rF_bisection": r_of(F, _tol(args), exact=False),
        "rF_swapped": r_of(swap(F), _tol(args)),
    }
    return _envelope("r", {"norm": F.to_spec()}, {"tol": _tol(args)}, result)


def cmd_moduli(args):
    X = parse_space(read_json(args.space, "space"))
    result = {
        "s": _guard(lambda: s_modulus(X, args.resolution).to_dict()),
        "lasq_defect": _guard(lambda: lasq_defect(X, args.resolution).to_dict()),
    }
    return _envelope("moduli", {"space": X.to_spec()},
                     {"resolution": args.resolution}, result)


def cmd_slice(args):
    X = parse_space(read_json(args.space, "space"))
    try:
        f = [float(v) for v in args.functional.split(",")]
    except ValueError:
        raise SpecError("expected comma-separated numbers", "functional") from None
    lo, hi = slice_diameter(X, SliceQuery(f, args.eps), args.resolution, _tol(args))
    return _envelope("slice", {"space": X.to_spec()},
                     {"functional": f, "eps": args.eps, "resolution": args.resolution,
                      "tol": _tol(args)},
                     {"diameter_lower": lo, "diameter_upper": hi})


def cmd_sum_check(args):
    X = parse_space(read_json(args.left, "left"))
    Y = parse_space(read_json(args.right, "right"))
    F = parse_norm(read_json(args.norm, "norm"))
    params = {}
    if args.check == "prop-loh":
        params["eps"] = args.eps
        report = check_prop_loh(X, Y, F, args.eps, args.resolution)
    elif args.check == "lasq-transfer":
        params["mu"] = args.mu
        report = check_sum_lasq_transfer(X, Y, F, args.mu, args.resolution)
    else:
        report = check_asq_impossible(X, Y, F, args.resolution or 20_000)
    params["resolution"] = args.resolution
    env = _envelope("sum-check", {"X": X.to_spec(), "Y": Y.to_spec(), "F": F.to_spec()},
                    params, report.to_dict())
    return env, 1 if report.verdict == "fail" else 0


def cmd_bm(args):
    X = parse_space(read_json(args.left, "left"))
    Y = parse_space(read_json(args.right, "right"))
    value, M = bm_search(X, Y, args.restarts, args.resolution)
    result = {"upper_bound": value, "map": M.tolist(),
              "note": "upper bound on the Banach-Mazur distance, not claimed tight"}
    if args.map:
        T = _matrix(args.map)
        fwd = operator_norm(T, X, Y, args.resolution)
        bwd = operator_norm(np.linalg.inv(T), Y, X, args.resolution)
        result["given_map"] = {"matrix": T.tolist(), "norm": list(fwd),
                               "inverse_norm": list(bwd), "distortion": fwd[1] * bwd[1]}
        result["s_isometry"] = check_s_isometry_invariance(X, T).to_dict()
    return _envelope("bm", {"X": X.to_spec(), "Y": Y.to_spec()},
                     {"restarts": args.restarts, "resolution": args.resolution}, result)


# ----------------------------------------------------------------- suite


def _manifest_source(name):
    if name in BUNDLED:
        text = resources.files("absnorm").joinpath("data", BUNDLED[name]).read_text()
        return text, None
    try:
        with open(name) as fh:
            return fh.read(), os.path.dirname(os.path.abspath(name))
    except OSError as exc:
        raise SpecError(f"cannot read manifest {name}: {exc.strerror}", "manifest") from None


def _load_input(raw, kind, base, path):
    if isinstance(raw, str) and not raw.lstrip().startswith("{"):
        if base is not None and not os.path.isabs(raw):
            raw = os.path.join(base, raw)
    if kind == "T":
        try:
            M = np.array(raw, dtype=float)
        except (TypeError, ValueError):
            M = None
        if M is None or M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise SpecError("expected a square row-major matrix", path)
        return M
    obj = read_json(raw, path)
    return parse_norm(obj, path) if kind == "F" else parse_space(obj, path)


def plan_suite(manifest_name, tol=None, resolution=None):
    """Parse and validate a manifest completely before anything runs."""
    text, base = _manifest_source(manifest_name)
    try:
        manifest = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON at line {exc.lineno}: {exc.msg}", "manifest") from None
    if not isinstance(manifest, dict) or not isinstance(manifest.get("commands"), list):
        raise SpecError("expected an object with a 'commands' list", "manifest.commands")
    defaults = dict(manifest.get("tolerances", {}))
    if tol is not None:
        defaults["tol"] = tol
    if resolution is not None:
        defaults["resolution"] = resolution
    seen, plan = set(), []
    for i, entry in enumerate(manifest["commands"]):
        path = f"commands[{i}]"
        if not isinstance(entry, dict):
            raise SpecError("expected an object", path)
        claim = entry.get("check")
        if claim not in CHECKS:
            raise SpecError(f"unknown check {claim!r}", f"{path}.check")
        ident = str(entry.get("id", f"{i:03d}-{claim}"))
        if ident in seen or "/" in ident or ident.startswith("."):
            raise SpecError(f"duplicate or unsafe id {ident!r}", f"{path}.id")
        seen.add(ident)
        fn, required, optional = CHECKS[claim]
        raw_inputs = entry.get("inputs", {})
        if not isinstance(raw_inputs, dict):
            raise SpecError("expected an object", f"{path}.inputs")
        unknown = set(raw_inputs) - set(required) - set(optional)
        if unknown:
            raise SpecError(f"unexpected inputs {sorted(unknown)}", f"{path}.inputs")
        inputs = {}
        for name in required + optional:
            if name not in raw_inputs:
                if name in required:
                    raise SpecError("missing input", f"{path}.inputs.{name}")
                continue
            kind = "T" if name == "T" else ("F" if name == "F" else "X")
            inputs[name] = _load_input(raw_inputs[name], kind, base, f"{path}.inputs.{name}")
        accepted = set(inspect.signature(fn).parameters) - set(required) - set(optional)
        params = entry.get("params", {})
        if not isinstance(params, dict):
            raise SpecError("expected an object", f"{path}.params")
        bad = set(params) - accepted
        if bad:
            raise SpecError(f"unknown parameters {sorted(bad)}", f"{path}.params")
        effective = {k: v for k, v in defaults.items() if k in accepted}
        effective.update(params)
        expect = entry.get("expect", "pass")
        if expect not in ("pass", "refused"):
            raise SpecError("must be 'pass' or 'refused'", f"{path}.expect")
        plan.append({"id": ident, "check": claim, "inputs": inputs,
                     "params": effective, "expect": expect})
    return manifest, text, plan


def _input_spec(value):
    return value.tolist() if isinstance(value, np.ndarray) else value.to_spec()


def run_check(item):
    """Run one planned check and return its report document."""
    fn = CHECKS[item["check"]][0]
    inputs = item["inputs"]
    doc = {
        "tool": TOOL,
        "id": item["id"],
        "check": item["check"],
        "expect": item["expect"],
        "inputs": {k: {"spec": _input_spec(v), "sha256": spec_hash(_input_spec(v))}
                   for k, v in inputs.items()},
        "parameters": item["params"],
    }
    if item["check"] in NOTES:
        doc["note"] = NOTES[item["check"]]
    if "F" in inputs and item["check"] != "norm-facts":
        facts = validate(inputs["F"])
        if facts.verdict == "fail":
            doc.update(status="fail", report=None,
                       error={"type": "NormValidation", "report": facts.to_dict()})
            return doc
    args = [inputs[k] for k in CHECKS[item["check"]][1]]
    kwargs = dict(item["params"])
    if "target" in inputs:
        kwargs["target"] = inputs["target"]
    try:
        report = fn(*args, **kwargs)
    except REFUSALS as exc:
        ok = item["expect"] == "refused"
        doc.update(status="pass" if ok else "error", report=None,
                   error={"type": type(exc).__name__, "message": str(exc)})
        if ok:
            doc["annotation"] = "refused as expected"
        return doc
    except Exception as exc:  # recorded, the suite keeps going
        doc.update(status="error", report=None,
                   error={"type": type(exc).__name__, "message": str(exc)})
        return doc
    if item["expect"] == "refused":
        doc.update(status="fail", report=report.to_dict(),
                   error={"type": "NotRefused", "message": "expected a refusal"})
        return doc
    doc.update(status=report.verdict, report=report.to_dict())
    if report.verdict == "vacuous":
        doc["annotation"] = "vacuous counts as pass"
    return doc


def run_suite(manifest_name, out_dir=None, tol=None, resolution=None, threads=None):
    """Run a manifest; return ``(summary, exit_status)``."""
    manifest, text, plan = plan_suite(manifest_name, tol, resolution)
    out_dir = out_dir or manifest.get("output_dir") or "absnorm-suite"
    threads = threads or _threads()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        docs = list(pool.map(run_check, plan))
    for doc in docs:
        write_atomic(os.path.join(out_dir, f"{doc['id']}.json"), dumps(doc))
    counts = {}
    for doc in docs:
        counts[doc["status"]] = counts.get(doc["status"], 0) + 1
    failed = sum(counts.get(k, 0) for k in ("fail", "error"))
    summary = {
        "tool": TOOL,
        "manifest": manifest.get("name", manifest_name),
        "manifest_sha256": spec_hash(json.loads(text)),
        "tolerances": {"tol": tol, "resolution": resolution,
                       **manifest.get("tolerances", {})},
        "checks": [{"id": d["id"], "check": d["check"], "status": d["status"],
                    "worst_margin": (d["report"] or {}).get("worst_margin")}
                   for d in docs],
        "counts": counts,
        "exit_status": 0 if failed == 0 else 1,
    }
    write_atomic(os.path.join(out_dir, "summary.json"), dumps(summary))
    return summary, summary["exit_status"]


# ----------------------------------------------------------------- parser


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="numeric tolerance (default 1e-9)")
    common.add_argument("--resolution", type=int, default=None,
                        help="sampling resolution (verb-specific default)")
    common.add_argument("--out", default=None, help="output file (suite: directory)")

    parser = argparse.ArgumentParser(prog="absnorm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"absnorm {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("profile", parents=[common], help="scalar invariants of a norm")
    p.add_argument("norm")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("curve", parents=[common], help="boundary curve as CSV")
    p.add_argument("norm")
    p.add_argument("--n", type=int, default=16, help="number of intervals")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("dual", parents=[common], help="dual norm and bidual check")
    p.add_argument("norm")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("r", parents=[common], help="the constant r_F")
    p.add_argument("norm")
    p.set_defaults(func=cmd_r)

    p = sub.add_parser("moduli", parents=[common], help="s(X) and LASQ defect brackets")
    p.add_argument("space")
    p.set_defaults(func=cmd_moduli)

    p = sub.add_parser("slice", parents=[common], help="slice diameter bracket")
    p.add_argument("space")
    p.add_argument("--functional", required=True, help="comma-separated, dual norm 1")
    p.add_argument("--eps", type=float, required=True)
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("sum-check", parents=[common], help="checks on X (+)_F Y")
    p.add_argument("check", choices=("prop-loh", "lasq-transfer", "asq-impossible"))
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("norm")
    p.add_argument("--eps", type=float, default=0.2)
    p.add_argument("--mu", type=float, default=None)
    p.set_defaults(func=cmd_sum_check)

    p = sub.add_parser("bm", parents=[common], help="Banach-Mazur upper bound")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--map", default=None, help="row-major JSON matrix to evaluate")
    p.set_defaults(func=cmd_bm)

    p = sub.add_parser("suite", parents=[common], help="run a manifest of checks")
    p.add_argument("--manifest", required=True,
                   help=f"manifest path or bundled name ({', '.join(BUNDLED)})")
    p.set_defaults(func=None)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.verb == "suite":
            summary, status = run_suite(args.manifest, args.out, args.tol, args.resolution)
            sys.stdout.write(dumps({k: summary[k] for k in ("counts", "exit_status")}))
            return status
        out = args.func(args)
        status = 0
        if isinstance(out, tuple):
            out, status = out
        _emit(out if isinstance(out, str) else dumps(out), args.out)
        return status
    except SpecError as exc:
        print(f"absnorm: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"absnorm: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
