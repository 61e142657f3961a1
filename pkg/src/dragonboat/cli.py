"""Command-line entry points.

    dragonboat run     --technique jc --track barrier --script jc_barrier
    dragonboat serve   --port 8765 --device-port 8766 --record session.jsonl
    dragonboat replay  --record session.jsonl
    dragonboat stats   --input sessions/ --measure completion_time
    dragonboat score   --instrument ueq-s --responses answers.csv
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .session import (
    SessionConfig,
    SessionRecord,
    bundled_script_names,
    replay as replay_record,
    resolve_script,
    run_headless,
)
from .stats import (
    NASA_TLX,
    SSQ,
    UEQ_S,
    LongRow,
    QuestionnaireResponse,
    analyze_measure,
    format_measure_report,
    load_long_csv,
    matrix_from_long,
    measures_in,
    score_nasa_tlx,
    score_ssq,
    score_ueq_s,
    write_results_csv,
)

INSTRUMENTS = {"ueq-s": UEQ_S, "nasa-tlx": NASA_TLX, "ssq": SSQ}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dragonboat",
        description="Deterministic dragon-boat racing simulator and analysis tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="headless scripted session")
    _add_config_flags(run_p)
    run_p.add_argument(
        "--script",
        help="input trace file or bundled script name (see list-scripts);"
        " falls back to the config file's script entry",
    )
    run_p.add_argument("--out", help="write the session record here")
    run_p.add_argument("--hr", help="heart-rate CSV (t_seconds,bpm) to embed")

    serve_p = sub.add_parser("serve", help="live websocket session service")
    _add_config_flags(serve_p)
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--port", type=int, default=8765)
    serve_p.add_argument(
        "--device-port", type=int, help="TCP port for the raw device byte stream"
    )
    serve_p.add_argument("--record", help="write the session record here")

    replay_p = sub.add_parser("replay", help="verify a session record")
    replay_p.add_argument("--record", required=True)

    stats_p = sub.add_parser("stats", help="run the test battery over recorded data")
    stats_p.add_argument(
        "--input",
        required=True,
        help="long-format CSV (subject,condition,measure,value) or a directory"
        " of session records",
    )
    stats_p.add_argument("--measure", help="analyze one measure (default: all)")
    stats_p.add_argument("--alpha", type=float, default=0.05)
    stats_p.add_argument("--csv-out", help="also write flat results CSV here")

    score_p = sub.add_parser("score", help="score questionnaire responses")
    score_p.add_argument(
        "--instrument", required=True, choices=sorted(INSTRUMENTS)
    )
    score_p.add_argument(
        "--responses",
        required=True,
        help="CSV with optional subject/condition columns followed by the items",
    )

    sub.add_parser("list-scripts", help="list bundled input traces")
    return parser


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="session config JSON (flags override it)")
    p.add_argument("--technique", choices=("jc", "ic", "ec"))
    p.add_argument("--track", choices=("straight", "barrier"))
    p.add_argument("--subject")
    p.add_argument("--age", type=float)
    p.add_argument("--weight", type=float)
    p.add_argument("--sex", choices=("male", "female", "unspecified"))
    p.add_argument("--time-limit", type=float)
    p.add_argument("--seed", type=int)


def _config_from_args(args) -> SessionConfig:
    if args.config:
        with open(args.config) as fh:
            config = SessionConfig.from_dict(json.load(fh))
    else:
        config = SessionConfig()
    overrides = {}
    for flag, attr in (
        ("technique", "technique"),
        ("track", "track_name"),
        ("subject", "subject"),
        ("age", "age"),
        ("weight", "weight"),
        ("sex", "sex"),
        ("time_limit", "time_limit"),
        ("seed", "seed"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[attr] = value
    if getattr(args, "hr", None):
        overrides["hr_csv"] = args.hr
    if overrides:
        from dataclasses import replace

        config = replace(config, **overrides)
    return config


def cmd_run(args) -> int:
    config = _config_from_args(args)
    script = args.script or config.script
    if not script:
        raise ValueError("no input trace: pass --script or set it in the config")
    if args.script and config.script != args.script:
        from dataclasses import replace

        config = replace(config, script=args.script, source="script")
    trace = resolve_script(script, config.params.dt)
    record = run_headless(config, trace)
    out = args.out or config.record_path
    if out:
        record.write(out)
    result = record.result
    if result["finished"]:
        print(f"completion_time: {result['completion_time']:.4f} s")
    else:
        print("did not finish")
    print(
        f"ticks: {result['ticks']}  collisions: {result['collisions']}"
        f"  snapshots: {len(record.state_lines())}"
    )
    if "physiology" in result:
        phys = result["physiology"]
        print(
            f"avg_hr: {phys['avg_hr']:.2f} bpm  avg_hr_pct: {phys['avg_hr_pct']:.4f}"
            f"  kcal: {phys['kcal']:.1f}"
        )
    return 0 if result["finished"] else 2


def cmd_serve(args) -> int:
    from dataclasses import replace

    from .server import configure_logging, serve

    configure_logging()
    config = _config_from_args(args)
    record_path = args.record or config.record_path
    config = replace(
        config,
        source="device" if args.device_port is not None else "socket",
        record_path=record_path,
    )
    serve(
        config,
        host=args.host,
        port=args.port,
        device_port=args.device_port,
        record_path=record_path,
    )
    return 0


def cmd_replay(args) -> int:
    record = SessionRecord.read(args.record)
    result = replay_record(record)
    print(result.describe())
    return 0 if result.ok else 1


def _rows_from_sessions(directory: Path) -> list[LongRow]:
    rows: list[LongRow] = []
    for path in sorted(directory.glob("*.jsonl")):
        record = SessionRecord.read(path)
        result = record.result
        if result is None:
            continue
        subject = record.config.get("subject", path.stem)
        condition = record.config.get("technique", "unknown")
        if result.get("completion_time") is not None:
            rows.append(
                LongRow(subject, condition, "completion_time", result["completion_time"])
            )
        phys = result.get("physiology")
        if phys:
            rows.append(LongRow(subject, condition, "avg_hr_pct", phys["avg_hr_pct"]))
            rows.append(LongRow(subject, condition, "kcal", phys["kcal"]))
    return rows


def cmd_stats(args) -> int:
    source = Path(args.input)
    if source.is_dir():
        rows = _rows_from_sessions(source)
        if not rows:
            print(f"no analyzable session records under {source}", file=sys.stderr)
            return 2
    else:
        rows = load_long_csv(source)
    measures = [args.measure] if args.measure else measures_in(rows)
    reports = []
    for measure in measures:
        matrix = matrix_from_long(rows, measure)
        report = analyze_measure(matrix, measure=measure, alpha=args.alpha)
        reports.append(report)
        print(format_measure_report(report))
    if args.csv_out:
        write_results_csv(reports, args.csv_out)
        print(f"results CSV written to {args.csv_out}")
    return 0


def cmd_score(args) -> int:
    import csv as csv_mod

    instrument = INSTRUMENTS[args.instrument]
    scorer = {UEQ_S: score_ueq_s, NASA_TLX: score_nasa_tlx, SSQ: score_ssq}[instrument]
    with open(args.responses, newline="") as fh:
        reader = csv_mod.reader(fh)
        header = next(reader)
        meta_cols = [
            i for i, name in enumerate(header)
            if name.strip().lower() in ("subject", "condition")
        ]
        totals: dict[str, float] = {}
        count = 0
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            meta = [rec[i] for i in meta_cols]
            items = tuple(
                int(v) for i, v in enumerate(rec) if i not in meta_cols and v.strip()
            )
            response = QuestionnaireResponse(instrument=instrument, items=items)
            scores = scorer(response)
            fields = vars(scores)
            label = " ".join(meta) if meta else f"row {lineno}"
            print(
                f"{label}: "
                + "  ".join(f"{k}={v:.2f}" for k, v in fields.items())
            )
            for k, v in fields.items():
                totals[k] = totals.get(k, 0.0) + v
            count += 1
    if count:
        print(
            "mean: "
            + "  ".join(f"{k}={v / count:.2f}" for k, v in totals.items())
        )
    return 0


def cmd_list_scripts(_args) -> int:
    for name in bundled_script_names():
        print(name)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "run": cmd_run,
        "serve": cmd_serve,
        "replay": cmd_replay,
        "stats": cmd_stats,
        "score": cmd_score,
        "list-scripts": cmd_list_scripts,
    }[args.command]
    try:
        return handler(args)
    except (ValueError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
