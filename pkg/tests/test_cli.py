import json
import random

import pytest

from dragonboat.cli import main
from dragonboat.session import SessionConfig, parse_trace_lines, run_headless


def run_cli(*argv):
    return main(list(argv))


class TestRun:
    def test_bundled_script_prints_completion(self, capsys, tmp_path):
        out = tmp_path / "rec.jsonl"
        code = run_cli(
            "run",
            "--technique", "jc",
            "--track", "straight",
            "--script", "jc_straight",
            "--out", str(out),
        )
        captured = capsys.readouterr().out
        assert code == 0
        assert "completion_time: 195.95" in captured
        assert out.exists()

    def test_unknown_script_fails_cleanly(self, capsys):
        code = run_cli("run", "--technique", "jc", "--script", "nope")
        assert code == 2
        assert "bundled" in capsys.readouterr().err

    def test_technique_script_mismatch_is_user_error(self, capsys, tmp_path):
        # an ec-rate script fed to jc saturates the stick; run completes but
        # much slower than the jc calibration, which is fine: values clamp
        trace = tmp_path / "t.jsonl"
        trace.write_text(
            "\n".join(
                [
                    json.dumps({"t": 0.0, "event": "calibrate_done"}),
                    json.dumps({"t": 0.0, "event": "race_requested"}),
                    json.dumps({"t": 0.0, "left": 0.5, "right": 0.5}),
                ]
            )
        )
        code = run_cli(
            "run", "--technique", "jc", "--track", "straight",
            "--script", str(trace), "--time-limit", "600",
        )
        assert code == 0


class TestConfigFile:
    def test_run_with_config_json_and_flag_override(self, capsys, tmp_path):
        config_path = tmp_path / "session.json"
        config_path.write_text(
            json.dumps(SessionConfig(technique="ec", track_name="straight").to_dict())
        )
        code = run_cli(
            "run",
            "--config", str(config_path),
            "--technique", "jc",  # flag overrides the file
            "--script", "jc_straight",
        )
        out = capsys.readouterr().out
        assert code == 0
        assert "completion_time: 195.95" in out


class TestReplay:
    def test_replay_ok_and_tamper_detected(self, capsys, tmp_path):
        out = tmp_path / "rec.jsonl"
        run_cli(
            "run", "--technique", "jc", "--track", "straight",
            "--script", "jc_straight", "--out", str(out),
        )
        assert run_cli("replay", "--record", str(out)) == 0
        assert "replay ok" in capsys.readouterr().out

        lines = out.read_text().splitlines()
        for i, line in enumerate(lines):
            row = json.loads(line)
            if row.get("type") == "state" and row.get("tick", 0) > 100:
                row["dist"] += 0.001
                lines[i] = json.dumps(row, sort_keys=True, separators=(",", ":"))
                break
        out.write_text("\n".join(lines) + "\n")
        assert run_cli("replay", "--record", str(out)) == 1
        assert "diverged at tick" in capsys.readouterr().out


class TestStats:
    def _long_csv(self, tmp_path):
        rng = random.Random(3)
        path = tmp_path / "long.csv"
        with open(path, "w") as fh:
            fh.write("subject,condition,measure,value\n")
            for i in range(18):
                for cond, center in (("jc", 197.7), ("ic", 335.6), ("ec", 282.3)):
                    fh.write(
                        f"p{i:02d},{cond},completion_time,"
                        f"{rng.gauss(center, 25.0):.3f}\n"
                    )
        return path

    def test_battery_over_long_csv(self, capsys, tmp_path):
        path = self._long_csv(tmp_path)
        code = run_cli("stats", "--input", str(path), "--measure", "completion_time")
        out = capsys.readouterr().out
        assert code == 0
        assert "Friedman: chi2(2)" in out
        assert "alpha = 0.0167" in out

    def test_battery_over_session_dir(self, capsys, tmp_path):
        sessions = tmp_path / "sessions"
        sessions.mkdir()
        events = [
            {"t": 0.0, "event": "calibrate_done"},
            {"t": 0.0, "event": "race_requested"},
        ]
        rng = random.Random(11)
        for subject in ("p01", "p02", "p03"):
            for tech, effort in (("jc", 1.0), ("ic", 125.5), ("ec", 197.0)):
                cfg = SessionConfig(
                    technique=tech,
                    track_name="straight",
                    subject=subject,
                    time_limit=500.0,
                )
                scale = 1.0 - 0.03 * rng.random()
                trace = parse_trace_lines(
                    (
                        json.dumps(r)
                        for r in events
                        + [{"t": 0.0, "left": effort * scale, "right": effort * scale}]
                    ),
                    cfg.params.dt,
                )
                record = run_headless(cfg, trace)
                record.write(sessions / f"{subject}_{tech}.jsonl")
        code = run_cli("stats", "--input", str(sessions), "--measure", "completion_time")
        out = capsys.readouterr().out
        assert code == 0
        assert "completion_time" in out
        assert "Friedman" in out

    def test_csv_output(self, capsys, tmp_path):
        path = self._long_csv(tmp_path)
        out_csv = tmp_path / "results.csv"
        code = run_cli(
            "stats", "--input", str(path), "--csv-out", str(out_csv)
        )
        assert code == 0
        assert out_csv.exists()


class TestScore:
    def test_ueq_scores(self, capsys, tmp_path):
        path = tmp_path / "ueq.csv"
        path.write_text(
            "subject,condition,i1,i2,i3,i4,i5,i6,i7,i8\n"
            "p01,jc,5,5,5,5,6,6,6,6\n"
            "p02,jc,4,4,4,4,4,4,4,4\n"
        )
        code = run_cli("score", "--instrument", "ueq-s", "--responses", str(path))
        out = capsys.readouterr().out
        assert code == 0
        assert "pragmatic=1.00" in out
        assert "hedonic=2.00" in out
        assert "mean: pragmatic=0.50" in out

    def test_ssq_scores(self, capsys, tmp_path):
        path = tmp_path / "ssq.csv"
        items = ",".join(f"i{k}" for k in range(1, 17))
        zeros = ",".join(["0"] * 16)
        one_nausea = ",".join(["0"] * 5 + ["1"] + ["0"] * 10)
        path.write_text(f"subject,{items}\np01,{zeros}\np02,{one_nausea}\n")
        code = run_cli("score", "--instrument", "ssq", "--responses", str(path))
        out = capsys.readouterr().out
        assert code == 0
        assert "nausea=9.54" in out
        assert "total=3.74" in out

    def test_bad_item_range_rejected(self, capsys, tmp_path):
        path = tmp_path / "tlx.csv"
        path.write_text("i1,i2,i3,i4,i5,i6\n9,1,1,1,1,1\n")
        code = run_cli("score", "--instrument", "nasa-tlx", "--responses", str(path))
        assert code == 2
        assert "outside" in capsys.readouterr().err


class TestListScripts:
    def test_lists_all_six(self, capsys):
        assert run_cli("list-scripts") == 0
        out = capsys.readouterr().out.split()
        assert len(out) == 6
        assert "jc_barrier" in out
