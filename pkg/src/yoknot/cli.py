"""Command-line front end.

Every subcommand prints one JSON document (sorted keys, two-space indent) or
a flat text rendering of it.  Exit codes: 0 ok, 2 input could not be parsed,
3 mathematical error (pole, z = 0, size bound), 4 a checked property failed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

from .algebra import AlgebraParams, check_relations
from .links import (
    BraidParseError,
    FramedAffineBraidWord,
    InvariantError,
    all_subsets,
    check_affine_E_condition,
    delta,
    esystem_extend,
    esystem_solve,
    gamma_invariant,
)
from .reps import (
    RankGuardError,
    build_representation,
    count_standard_tableaux,
    enumerate_dm_partitions,
    representation_relations,
    schur_element,
    schur_factorization,
    sum_squared_dimensions,
)
from .scalars import RatFunc, ScalarParseError, parse_scalar, ring
from .traces import TraceParamError, TraceParams, markov_trace, word_to_nested

DEFAULT_MAX_RANK = 5000


class InputError(ValueError):
    """Malformed input; ``position`` locates the problem."""

    def __init__(self, message: str, position):
        super().__init__(f"{message} (at {position})")
        self.position = position


class PropertyViolation(Exception):
    pass


# ---------------------------------------------------------------------------
# input


def _load_json(text: str, what: str):
    if not text.lstrip().startswith(("{", "[")):
        path = Path(text[1:] if text.startswith("@") else text)
        try:
            text = path.read_text()
        except OSError as exc:
            raise InputError(f"cannot read {what} file: {exc.strerror}", str(path)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid {what} JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno} (char {exc.pos})") from None


def _parse_m(value):
    if value is None or value in ("inf", "infinity", "oo"):
        return None
    try:
        m = int(value)
    except (TypeError, ValueError):
        raise InputError(f"m must be a positive integer or 'inf', got {value!r}", "m") from None
    if m < 1:
        raise InputError("m must be positive", "m")
    return m


def _scalar(value, r, where: str) -> RatFunc:
    if isinstance(value, bool):
        raise InputError("booleans are not scalars", where)
    if isinstance(value, int):
        return RatFunc.const(r, value)
    if not isinstance(value, str):
        raise InputError("scalar must be a string or an integer", where)
    try:
        return parse_scalar(value, r)
    except ScalarParseError as exc:
        raise InputError(exc.args[0] if exc.args else "bad scalar", f"{where}:{exc.position}") from None


def parse_params(data) -> TraceParams:
    """Parameter JSON: {"d","m","z","x":[{"a","b","value"}]} or {"d","m","z","S","lambda"}."""
    if not isinstance(data, dict):
        raise InputError("parameters must be a JSON object", "$")
    d = data.get("d")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise InputError("d must be a positive integer", "d")
    m = _parse_m(data.get("m", 1))
    params = AlgebraParams(d, m, 1)
    r = params.ring
    if "z" not in data:
        raise InputError("missing z", "z")
    z = _scalar(data["z"], r, "z")
    if "S" in data:
        S = data["S"]
        if not isinstance(S, list) or not S or not all(isinstance(i, int) and 0 <= i < d for i in S):
            raise InputError("S must be a non-empty list of integers in 0..d-1", "S")
        lam = {}
        raw = data.get("lambda", {})
        if not isinstance(raw, dict):
            raise InputError("lambda must be an object", "lambda")
        for a, row in raw.items():
            if not isinstance(row, dict):
                raise InputError("lambda rows must be objects", f"lambda.{a}")
            try:
                ai = int(a)
                lam[ai] = {int(i): _scalar(v, r, f"lambda.{a}.{i}") for i, v in row.items()}
            except ValueError:
                raise InputError("lambda keys must be integers", f"lambda.{a}") from None
        try:
            return esystem_extend(esystem_solve(d, S), params, z, lam)
        except ValueError as exc:
            raise InputError(str(exc), "lambda") from None
    table = {(0, 0): RatFunc.const(r, 1)}
    entries = data.get("x", [])
    if not isinstance(entries, list):
        raise InputError("x must be a list", "x")
    for pos, e in enumerate(entries):
        where = f"x[{pos}]"
        if not isinstance(e, dict) or not all(k in e for k in ("a", "b", "value")):
            raise InputError("x entries need a, b and value", where)
        a, b = e["a"], e["b"]
        if not isinstance(a, int) or not isinstance(b, int):
            raise InputError("a and b must be integers", where)
        if m is not None and not 0 <= a < m:
            raise InputError(f"a must lie in 0..{m - 1}", where)
        table[(a, b % d)] = _scalar(e["value"], r, f"{where}.value")
    default = data.get("x_default")
    if default is not None:
        default = _scalar(default, r, "x_default")
    try:
        return TraceParams(params, z, table, default=default)
    except ValueError as exc:
        raise InputError(str(exc), "x") from None


def parse_braids(data) -> list[FramedAffineBraidWord]:
    items = data if isinstance(data, list) else [data]
    out = []
    for pos, item in enumerate(items):
        try:
            out.append(FramedAffineBraidWord.from_json(item))
        except BraidParseError as exc:
            where = f"[{pos}].{exc.position}" if isinstance(data, list) else exc.position
            raise InputError(exc.message, where) from None
    return out


# ---------------------------------------------------------------------------
# output


def dump_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


_REQUIRED = {
    "dims": ("d", "m", "rows", "status"),
    "reps-verify": ("instance", "canonical", "shapes", "status"),
    "schur": ("instance", "shapes", "status"),
    "esystem": ("d", "solutions", "status"),
    "trace": ("d", "m", "n", "tau"),
    "invariant": ("d", "m", "results"),
    "selfcheck": ("seed", "criteria", "status"),
}


def load_report(text: str) -> dict:
    """Parse a report printed by this program and validate its shape.

    Scalar fields are re-read with the scalar grammar, so a report whose
    values do not parse is rejected.
    """
    report = json.loads(text)
    cmd = report.get("command")
    if cmd not in _REQUIRED:
        raise InputError(f"unknown report command {cmd!r}", "command")
    for key in _REQUIRED[cmd]:
        if key not in report:
            raise InputError(f"report lacks {key!r}", key)
    if cmd in ("trace", "invariant"):
        r = ring(report["d"], _parse_m(report["m"]))
        if cmd == "trace":
            _scalar(report["tau"], r, "tau")
        else:
            for pos, res in enumerate(report["results"]):
                for variant in ("Gamma", "Gamma'"):
                    if variant in res:
                        _scalar(res[variant]["base"], r, f"results[{pos}].{variant}.base")
    if cmd == "esystem":
        r = ring(report["d"], _parse_m(report.get("m", 1)))
        for pos, row in enumerate(report["solutions"]):
            for j, v in enumerate(row["x0"]):
                _scalar(v, r, f"solutions[{pos}].x0[{j}]")
            _scalar(row["E"], r, f"solutions[{pos}].E")
    if cmd == "schur":
        r = ring(report["instance"]["d"], report["instance"]["m"])
        for pos, row in enumerate(report["shapes"]):
            _scalar(row["schur"], r, f"shapes[{pos}].schur")
    return report


def _text(obj, prefix: str = "") -> list[str]:
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            lines += _text(obj[k], f"{prefix}.{k}" if prefix else str(k))
        return lines
    if isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        lines = []
        for i, v in enumerate(obj):
            lines += _text(v, f"{prefix}[{i}]")
        return lines
    return [f"{prefix} = {json.dumps(obj, ensure_ascii=False)}"]


def _m_json(m):
    return "inf" if m is None else m


def _status(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


# ---------------------------------------------------------------------------
# commands


def _guard(d: int, m, n: int, bound: int) -> None:
    rank = (d * m) ** n * math.factorial(n)
    if rank > bound:
        raise RankGuardError(f"rank (dm)^n n! = {rank} exceeds --max-rank {bound}")


def cmd_dims(args) -> dict:
    m = _parse_m(args.m)
    if m is None:
        raise InputError("dims needs finite m", "m")
    ns = [args.n] if args.n else []
    if not ns:
        n = 1
        while (args.d * m) ** n * math.factorial(n) <= args.max_rank:
            ns.append(n)
            n += 1
    rows = []
    for n in ns:
        expected = (args.d * m) ** n * math.factorial(n)
        row = {"n": n, "expected": expected}
        if expected <= args.max_rank:
            shapes = enumerate_dm_partitions(args.d, m, n)
            row["shapes"] = [{"shape": s.to_json(), "dim": count_standard_tableaux(s)} for s in shapes]
            total = sum(x["dim"] ** 2 for x in row["shapes"])
        else:
            total = sum_squared_dimensions(args.d, m, n, False)
        row["sum_of_squares"] = total
        row["status"] = _status(total == expected)
        rows.append(row)
    ok = all(r["status"] == "PASS" for r in rows)
    return {"command": "dims", "d": args.d, "m": m, "rows": rows, "status": _status(ok)}


def cmd_reps_verify(args) -> dict:
    m = _parse_m(args.m)
    params = AlgebraParams(args.d, m, args.n)
    canonical = {k: _status(v) for k, v in check_relations(params).items()}
    shapes = []
    if m is not None:
        _guard(args.d, m, args.n, args.max_rank)
        for s in enumerate_dm_partitions(args.d, m, args.n):
            rep = build_representation(s)
            rel = representation_relations(rep)
            shapes.append(
                {
                    "shape": s.to_json(),
                    "dim": rep.dim,
                    "relations": _status(all(rel.values())),
                    "failed": sorted(k for k, v in rel.items() if not v),
                }
            )
    ok = all(v == "PASS" for v in canonical.values()) and all(s["relations"] == "PASS" for s in shapes)
    report = {
        "command": "reps-verify",
        "instance": {"d": args.d, "m": _m_json(m), "n": args.n},
        "canonical": canonical,
        "shapes": shapes,
        "status": _status(ok),
    }
    if not ok:
        raise PropertyViolation(report)
    return report


def cmd_schur(args) -> dict:
    m = _parse_m(args.m)
    if m is None:
        raise InputError("schur needs finite m", "m")
    _guard(args.d, m, args.n, args.max_rank)
    rows = []
    for s in enumerate_dm_partitions(args.d, m, args.n):
        rows.append(
            {
                "shape": s.to_json(),
                "schur": schur_element(s, max_rank=args.max_rank).to_text(),
                "factorization": _status(schur_factorization(s, args.max_rank)),
            }
        )
    ok = all(r["factorization"] == "PASS" for r in rows)
    return {"command": "schur", "instance": {"d": args.d, "m": m, "n": args.n}, "shapes": rows, "status": _status(ok)}


def cmd_esystem(args) -> dict:
    m = _parse_m(args.m)
    params = AlgebraParams(args.d, m, 1)
    sols = []
    for S in all_subsets(args.d):
        sol = esystem_solve(args.d, S)
        row = {"S": list(S), "x0": [str(v) for v in sol.x0], "E": str(sol.E)}
        if args.check:
            tp = esystem_extend(sol, params, 1)
            rep = check_affine_E_condition(tp, 1, a_values=[0] if m is None else None)
            row["E_condition"] = _status(rep["ok"] and rep["agree"])
        sols.append(row)
    ok = all(r.get("E_condition", "PASS") == "PASS" for r in sols)
    return {"command": "esystem", "d": args.d, "m": _m_json(m), "solutions": sols, "status": _status(ok)}


def _trace_inputs(args):
    tp = parse_params(_load_json(args.params, "parameter"))
    braids = parse_braids(_load_json(args.braid, "braid"))
    return tp, braids


def cmd_trace(args) -> dict:
    tp, braids = _trace_inputs(args)
    if len(braids) != 1:
        raise InputError("trace takes a single braid", "braid")
    w = braids[0]
    p = tp.params
    params = AlgebraParams(p.d, p.m, w.n, p.field)
    tau = markov_trace(tp, word_to_nested(params, delta(w)))
    return {"command": "trace", "d": p.d, "m": _m_json(p.m), "n": w.n, "braid": w.to_json(), "tau": tau.to_text()}


def cmd_invariant(args) -> dict:
    tp, braids = _trace_inputs(args)
    variants = ["Gamma", "Gamma'"] if args.variant == "both" else [args.variant]
    results = []
    for w in braids:
        row = {"braid": w.to_json()}
        for v in variants:
            row[v] = gamma_invariant(w, tp, v, enforce_E=not args.no_enforce_E).to_json()
        results.append(row)
    p = tp.params
    return {"command": "invariant", "d": p.d, "m": _m_json(p.m), "results": results}


def cmd_selfcheck(args) -> dict:
    from .checks import CRITERIA

    wanted = sorted(CRITERIA) if not args.criteria else [int(c) for c in args.criteria.split(",")]
    rows = []
    for c in wanted:
        if c not in CRITERIA:
            raise InputError(f"no criterion {c}", "criteria")
        kwargs = {"seed": args.seed, "max_rank": args.max_rank}
        if args.samples is not None:
            kwargs["samples"] = args.samples
        res = CRITERIA[c](**kwargs)
        rows.append({"criterion": c, **res.to_json()})
    ok = all(r["status"] == "PASS" for r in rows)
    report = {"command": "selfcheck", "seed": args.seed, "samples": args.samples, "criteria": rows, "status": _status(ok)}
    if not ok:
        raise PropertyViolation(report)
    return report


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    env = os.environ.get("YOKNOT_MAX_RANK")
    try:
        default_rank = int(env) if env else DEFAULT_MAX_RANK
    except ValueError:
        default_rank = DEFAULT_MAX_RANK
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for sampled suites")
    common.add_argument("--samples", type=int, default=None, help="samples per instance in sampled suites")
    common.add_argument("--max-rank", type=int, default=default_rank, help="size bound (dm)^n n! (env YOKNOT_MAX_RANK)")
    common.add_argument("--format", choices=("json", "text"), default="json")

    parser = argparse.ArgumentParser(prog="yoknot", description="Yokonuma-Hecke algebras, traces and framed link invariants.")
    sub = parser.add_subparsers(dest="command", required=True)

    def instance(p, need_n=True):
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--m", default="1", help="positive integer or 'inf'")
        p.add_argument("--n", type=int, required=need_n)

    p = sub.add_parser("dims", parents=[common], help="sum of squared dimensions against (dm)^n n!")
    instance(p, need_n=False)
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("reps-verify", parents=[common], help="defining relations on the canonical basis and in every irreducible")
    instance(p)
    p.set_defaults(func=cmd_reps_verify)

    p = sub.add_parser("schur", parents=[common], help="Schur elements and their factorization")
    instance(p)
    p.set_defaults(func=cmd_schur)

    p = sub.add_parser("esystem", parents=[common], help="solutions of the affine E-system for every subset S")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", default="1")
    p.add_argument("--check", action="store_true", help="also run the E-condition check on each solution")
    p.set_defaults(func=cmd_esystem)

    for name, func, helptext in (
        ("trace", cmd_trace, "Markov trace of the image of a braid word"),
        ("invariant", cmd_invariant, "Gamma / Gamma' of braid words"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--params", required=True, help="parameter JSON, inline or a file path")
        p.add_argument("--braid", required=True, help="braid JSON (object or list), inline or a file path")
        if name == "invariant":
            p.add_argument("--variant", choices=("Gamma", "Gamma'", "both"), default="both")
            p.add_argument("--no-enforce-E", action="store_true", help="skip the E-condition check")
        p.set_defaults(func=func)

    p = sub.add_parser("selfcheck", parents=[common], help="run the acceptance suites")
    p.add_argument("--criteria", default="", help="comma separated subset of 1..9")
    p.set_defaults(func=cmd_selfcheck)
    return parser


def _emit(report: dict, fmt: str, stream) -> None:
    if fmt == "json":
        stream.write(dump_report(report))
    else:
        stream.write("\n".join(_text(report)) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.samples is not None and args.samples < 1:
        print("error: --samples must be positive (at --samples)", file=sys.stderr)
        return 2
    try:
        report = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PropertyViolation as exc:
        report = exc.args[0]
        _emit(report, args.format, sys.stdout)
        failed = [c for c in report.get("criteria", []) if c["status"] == "FAIL"]
        names = ", ".join(f"criterion {c['criterion']} ({c['name']})" for c in failed) or "relations"
        print(f"property violation: {names}", file=sys.stderr)
        return 4
    except (ArithmeticError, RankGuardError, TraceParamError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    _emit(report, args.format, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
