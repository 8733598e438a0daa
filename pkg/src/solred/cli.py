"""Command-line entry point.

Three subcommands over scenario JSON files:

* ``construct``: run the step construction and write the trace.
* ``verify``: run one verification mode and write the report.
* ``oracle``: run the naive minimal-hit search for a single step.

Payloads are deterministic: byte-identical across reruns with equal
inputs and overrides.  Timing goes to standard error only, marked
non-deterministic, so it never contaminates an output file.  Exit codes:
0 all checks hold / full success, 1 any certified failure, 2 any
Unknown or budget exhaustion (and none failed), 3 invalid input.  With
several scenario files the worst code wins, in the order 3, 1, 2, 0.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .construction import build_s2a_from_solovay
from .approximations import prepend
from .errors import BudgetExhausted, InvalidScenario, ScenarioError
from .harness import (
    Report,
    trace_payload,
    verify_construction,
    verify_mirror,
    verify_prop1,
    verify_s2a_declared,
    verify_solovay_grid,
)
from .oracle import oracle_min_hit
from .reals import ZERO
from .scenario import format_fraction, load_scenario

EXIT_OK = 0
EXIT_FAILS = 1
EXIT_INCONCLUSIVE = 2
EXIT_INVALID = 3

_SEVERITY = {EXIT_INVALID: 3, EXIT_FAILS: 2, EXIT_INCONCLUSIVE: 1, EXIT_OK: 0}


def worst_exit(codes) -> int:
    return max(codes, key=lambda c: _SEVERITY[c], default=EXIT_OK)


def _dump(payload: dict) -> bytes:
    return (json.dumps(payload, indent=2) + "\n").encode("ascii")


def _construct_text(payload: dict) -> str:
    lines = [
        f"construct  {payload['scenario']}",
        "params     " + "  ".join(f"{k}={v}" for k, v in payload["parameters"].items()),
        f"constant   {payload['constant']}",
        "steps",
        "  n    i    stage       a                b_i",
    ]
    for row in payload["steps"]:
        lines.append(f"  {row['n']:<4} {row['i']:<4} {row['stage_found']:<11} "
                     f"{row['a']:<16} {row['b_i']}")
    if payload["exhausted"] is not None:
        lines.append(f"exhausted  step {payload['exhausted']['step']} "
                     f"(stage budget {payload['exhausted']['stage_budget']})")
    else:
        lines.append("exhausted  none")
    return "\n".join(lines) + "\n"


def _run_construct(path: str, opts: dict) -> dict:
    sc = load_scenario(path)
    depth = opts["depth"] if opts["depth"] is not None else sc.depth
    budget = opts["stage_budget"] if opts["stage_budget"] is not None else sc.stage_budget
    if sc.solovay_witness is None:
        raise InvalidScenario("construct needs a scenario with a solovay_witness")
    code = EXIT_OK
    err = ""
    try:
        _, trace = build_s2a_from_solovay(sc.solovay_witness, sc.beta_approx,
                                          sc.alpha, sc.beta, depth, budget)
    except BudgetExhausted as exc:
        trace = exc.partial
        code = EXIT_INCONCLUSIVE
        err = f"{sc.name}: {exc}\n"
    payload = trace_payload(sc, trace, depth, budget)
    return {"code": code, "stdout": _construct_text(payload), "stderr": err,
            "payload": _dump(payload)}


def _run_verify(path: str, opts: dict) -> dict:
    sc = load_scenario(path)
    mode = opts["mode"]
    if mode == "construction":
        report = verify_construction(sc, depth=opts["depth"],
                                     stage_budget=opts["stage_budget"],
                                     guard=opts["guard"],
                                     oracle_depth=opts["oracle_depth"])
    elif mode == "mirror":
        report = verify_mirror(sc, depth=opts["depth"], guard=opts["guard"])
    elif mode == "prop1":
        report = verify_prop1(sc, depth=opts["depth"],
                              stage_budget=opts["stage_budget"],
                              guard=opts["guard"])
    elif mode == "s2a-check":
        report = verify_s2a_declared(sc, depth=opts["depth"], guard=opts["guard"])
    elif mode == "solovay-check":
        report = verify_solovay_grid(sc, stage_budget=opts["stage_budget"])
    else:
        raise InvalidScenario(f"unknown verify mode: {mode}")
    return {"code": report.exit_code(), "stdout": report.to_text(), "stderr": "",
            "payload": _dump(report.payload())}


def _run_oracle(path: str, opts: dict) -> dict:
    sc = load_scenario(path)
    if sc.solovay_witness is None:
        raise InvalidScenario("oracle needs a scenario with a solovay_witness")
    n = opts["step"]
    if n < 1:
        raise InvalidScenario("oracle steps start at n = 1 (step 0 is fixed)")
    budget = opts["stage_budget"] if opts["stage_budget"] is not None else sc.stage_budget
    w = sc.solovay_witness
    try:
        _, trace = build_s2a_from_solovay(w, sc.beta_approx, sc.alpha, sc.beta,
                                          n - 1, budget)
    except BudgetExhausted as exc:
        return {"code": EXIT_INCONCLUSIVE, "stdout": "",
                "stderr": f"{sc.name}: cannot reach step {n}: {exc}\n",
                "payload": None}
    prev_index = trace.steps[-1].index
    b_pre = prepend(ZERO, sc.beta_approx)
    hit = oracle_min_hit(n, prev_index, w, b_pre, budget)
    payload: dict = {
        "format_version": "1",
        "kind": "oracle_result",
        "scenario": sc.name,
        "parameters": {"step": n, "stage_budget": budget, "prev_index": prev_index},
        "hit": None,
    }
    if hit is None:
        text = f"oracle     {sc.name}\nstep       {n}\nhit        none (stage cap {budget})\n"
        code = EXIT_INCONCLUSIVE
    else:
        payload["hit"] = {
            "stage": hit.stage,
            "i": hit.index,
            "ladder": {
                "indices": list(hit.tup.indices),
                "points": [format_fraction(p) for p in hit.tup.points],
                "values": [format_fraction(v) for v in hit.tup.values],
            },
        }
        text = (f"oracle     {sc.name}\nstep       {n}\n"
                f"hit        stage {hit.stage}, i {hit.index}, "
                f"ladder length {hit.tup.ell}\n")
        code = EXIT_OK
    return {"code": code, "stdout": text, "stderr": "", "payload": _dump(payload)}


_RUNNERS = {"construct": _run_construct, "verify": _run_verify, "oracle": _run_oracle}


def _run_one(command: str, path: str, opts: dict) -> dict:
    start = time.perf_counter()
    try:
        result = _RUNNERS[command](path, opts)
    except (ScenarioError, InvalidScenario) as exc:
        result = {"code": EXIT_INVALID, "stdout": "",
                  "stderr": f"{path}: {exc}\n", "payload": None}
    elapsed = time.perf_counter() - start
    result["stderr"] += f"{path}: {elapsed:.3f}s elapsed (non-deterministic)\n"
    return result


def _out_path(out: str | None, paths: list[str], index: int) -> Path | None:
    if out is None:
        return None
    if len(paths) == 1:
        return Path(out)
    return Path(out) / (Path(paths[index]).stem + ".json")


def _execute(command: str, args: argparse.Namespace, opts: dict) -> int:
    paths: list[str] = args.scenario
    if args.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one, [command] * len(paths), paths,
                                    [opts] * len(paths)))
    else:
        results = [_run_one(command, p, opts) for p in paths]
    if args.out is not None and len(paths) > 1:
        Path(args.out).mkdir(parents=True, exist_ok=True)
    codes = []
    for idx, res in enumerate(results):
        sys.stdout.write(res["stdout"])
        sys.stderr.write(res["stderr"])
        target = _out_path(args.out, paths, idx)
        if target is not None and res["payload"] is not None:
            target.write_bytes(res["payload"])
        codes.append(res["code"])
    return worst_exit(codes)


def _add_common(p: argparse.ArgumentParser, *, budget: bool = True) -> None:
    p.add_argument("scenario", nargs="+", help="scenario JSON file(s)")
    p.add_argument("--out", help="output file (one scenario) or directory (several)")
    if budget:
        p.add_argument("--stage-budget", type=int, dest="stage_budget",
                       help="override the scenario's stage budget")
    p.add_argument("--jobs", type=int, default=1,
                   help="run independent scenario files in parallel")
    p.add_argument("--no-accelerator", action="store_true",
                   help="force plain canonical-order search for determinism "
                        "audits (the search already runs in canonical order, "
                        "so this flag changes nothing and is accepted for "
                        "interface stability)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="solred",
        description="Deterministic construction and verification of "
                    "reducibility witnesses between computably approximable reals.")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="run the step construction, write the trace")
    _add_common(c)
    c.add_argument("--depth", type=int, help="override the scenario's step depth")

    v = sub.add_parser("verify", help="run a verification mode, write the report")
    _add_common(v)
    v.add_argument("--mode", required=True,
                   choices=["construction", "mirror", "prop1", "s2a-check",
                            "solovay-check"])
    v.add_argument("--depth", type=int, help="override the scenario's step depth")
    v.add_argument("--guard", type=int, help="override the enclosure guard bits")
    v.add_argument("--oracle-depth", type=int, default=6, dest="oracle_depth",
                   help="largest step cross-checked against the naive search "
                        "(construction mode)")

    o = sub.add_parser("oracle", help="naive minimal-hit search for one step")
    _add_common(o)
    o.add_argument("--step", type=int, required=True, help="step number n >= 1")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        sys.stderr.write("--jobs must be >= 1\n")
        return EXIT_INVALID
    opts = {
        "depth": getattr(args, "depth", None),
        "stage_budget": getattr(args, "stage_budget", None),
        "guard": getattr(args, "guard", None),
        "oracle_depth": getattr(args, "oracle_depth", 6),
        "mode": getattr(args, "mode", None),
        "step": getattr(args, "step", None),
    }
    return _execute(args.command, args, opts)


if __name__ == "__main__":
    sys.exit(main())
