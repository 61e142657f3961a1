#!/usr/bin/env python3
"""Regenerate the bundled full-effort input traces.

Usage:
    python3 tools/gen_scripts.py tune      # search calibration constants
    python3 tools/gen_scripts.py write     # freeze traces into package data
    python3 tools/gen_scripts.py verify    # re-run bundled traces, print times

The `tune` step searches thrust_coeff so the full-deflection joystick run
lands on the 197.72 s barrier-course target, then the handle crank rate for
282.29 s and the forearm pitch rate for 335.64 s. Constants it prints are
baked into dragonboat.sim.HydroParams / dragonboat.pilot by hand; `write`
then regenerates the six trace files with those shipped defaults.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from dragonboat.pilot import full_rate_for, generate_trace, rows_to_trace
from dragonboat.session import SessionConfig, resolve_script, run_headless
from dragonboat.sim import HydroParams

SCRIPT_DIR = Path(__file__).resolve().parent.parent / "src/dragonboat/data/scripts"

TARGETS = {"jc": 197.72, "ec": 282.29, "ic": 335.64}


def completion_for(technique: str, params: HydroParams, full_rate: float) -> float:
    rows, engine = generate_trace(
        technique, "barrier", params=params, full_rate=full_rate
    )
    if not engine.finished:
        raise RuntimeError(f"{technique} run did not finish")
    if engine.collisions:
        raise RuntimeError(f"{technique} run collided {engine.collisions} times")
    return engine.session.completion_time


def bisect(f, lo, hi, target, tol=0.05, iters=40):
    """Find x with f(x) ~= target; f must be monotone decreasing in x."""
    flo, fhi = f(lo), f(hi)
    if not (fhi <= target <= flo):
        raise RuntimeError(f"target {target} outside [{fhi}, {flo}]")
    for _ in range(iters):
        mid = (lo + hi) / 2.0
        fm = f(mid)
        if abs(fm - target) <= tol:
            return mid, fm
        if fm > target:
            lo = mid
        else:
            hi = mid
    return mid, fm


def tune() -> None:
    base = HydroParams()

    def jc_time(c):
        return completion_for("jc", HydroParams(thrust_coeff=c), full_rate_for("jc"))

    c, t = bisect(jc_time, 1.5, 5.0, TARGETS["jc"])
    print(f"thrust_coeff = {c:.4f}  (jc barrier {t:.2f} s)")
    params = HydroParams(thrust_coeff=c)

    def ec_time(rate):
        return completion_for("ec", params, rate)

    rate, t = bisect(ec_time, 120.0, 360.0, TARGETS["ec"])
    print(f"EC_FULL_CRANK_RATE = {rate:.2f}  (ec barrier {t:.2f} s)")

    def ic_time(rate):
        return completion_for("ic", params, rate)

    rate, t = bisect(ic_time, 60.0, 300.0, TARGETS["ic"])
    print(f"IC_FULL_PITCH_RATE = {rate:.2f}  (ic barrier {t:.2f} s)")


def write() -> None:
    SCRIPT_DIR.mkdir(parents=True, exist_ok=True)
    for technique in ("jc", "ic", "ec"):
        for course in ("straight", "barrier"):
            rows, engine = generate_trace(technique, course)
            path = SCRIPT_DIR / f"{technique}_{course}.jsonl"
            with open(path, "w") as fh:
                for row in rows:
                    fh.write(json.dumps(row) + "\n")
            print(
                f"{path.name}: {len(rows)} rows, finished={engine.finished},"
                f" completion={engine.session.completion_time}"
            )


def verify() -> None:
    params = HydroParams()
    for technique in ("jc", "ic", "ec"):
        for course in ("straight", "barrier"):
            config = SessionConfig(technique=technique, track_name=course)
            trace = resolve_script(f"{technique}_{course}", params.dt)
            record = run_headless(config, trace)
            res = record.result
            print(
                f"{technique}/{course}: finished={res['finished']}"
                f" completion={res['completion_time']}"
                f" collisions={res['collisions']}"
            )


if __name__ == "__main__":
    mode = sys.argv[1] if len(sys.argv) > 1 else "verify"
    {"tune": tune, "write": write, "verify": verify}[mode]()
