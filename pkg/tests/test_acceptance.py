"""Acceptance suite: one test per release criterion, at stated tolerances.

Run with `pytest tests/test_acceptance.py -s` to see one PASS line per
criterion; any assertion failure marks that criterion red.
"""

import itertools
import json
import random
import time

import pytest

from dragonboat.physiology import HeartSample, avg_hr_pct, hr_max
from dragonboat.protocol import (
    PAYLOAD_LENGTHS,
    DeviceFrame,
    decode_stream,
    encode_frame,
    encoder_report_frame,
    heartbeat_frame,
)
from dragonboat.race import track_preset
from dragonboat.session import (
    SessionConfig,
    parse_trace_lines,
    replay,
    resolve_script,
    run_headless,
)
from dragonboat.sim import (
    BoatState,
    HydroParams,
    PaddleState,
    in_water,
    mirror,
    step,
)
from dragonboat.stats import (
    RepeatedMeasures,
    aligned_rank_transform,
    bonferroni_alpha,
    friedman,
    mann_whitney_u,
    midranks,
    rm_anova_oneway,
    score_ssq,
)
from dragonboat.stats.questionnaires import SSQ, QuestionnaireResponse
from dragonboat.techniques import EncoderSample

DT = HydroParams().dt

SCRIPTS = [
    (tech, course)
    for tech in ("jc", "ic", "ec")
    for course in ("straight", "barrier")
]


def _ok(name: str) -> None:
    print(f"\nACCEPTANCE PASS: {name}")


@pytest.fixture(scope="module")
def bundled_runs():
    """Run every bundled script twice plus replay, timing the whole batch."""
    runs = {}
    started = time.perf_counter()
    for tech, course in SCRIPTS:
        config = SessionConfig(technique=tech, track_name=course)
        trace = resolve_script(f"{tech}_{course}", DT)
        first = run_headless(config, trace)
        second = run_headless(config, trace)
        verification = replay(first)
        runs[(tech, course)] = (first, second, verification)
    return runs, time.perf_counter() - started


def test_determinism_and_replay(bundled_runs):
    runs, elapsed = bundled_runs
    for (tech, course), (first, second, verification) in runs.items():
        assert first.state_lines() == second.state_lines(), (
            f"{tech}/{course}: reruns disagree"
        )
        assert first.digest() == second.digest()
        assert verification.ok, f"{tech}/{course}: replay diverged"
    assert elapsed < 10.0, f"determinism batch took {elapsed:.2f} s (budget 10 s)"
    _ok(
        "determinism & replay: 6 scripts x 2 runs byte-identical,"
        f" replays verified, {elapsed:.2f} s"
    )


def test_water_zone_table():
    sweep = [0.0, 69.99, 70.0, 180.0, 289.99, 290.0, 337.0, 359.99]
    expected = [True, True, False, False, False, True, True, True]
    got = [in_water(a) for a in sweep]
    assert got == expected
    _ok("water-zone table: 8-angle sweep matches area definitions exactly")


def test_movement_semantics(bundled_runs):
    runs, _ = bundled_runs
    # equal-hand scripts hold the course axis all the way down the kilometre
    for tech in ("jc", "ic", "ec"):
        record, _, _ = runs[(tech, "straight")]
        assert record.result["finished"]
        states = [r for r in record.rows if r["type"] == "state"]
        assert all(abs(s["y"]) < 1e-9 for s in states), tech
        assert states[-1]["heading"] == 0.0, tech

    # a dominant left hand turns the boat to the right (negative heading)
    config = SessionConfig(technique="jc", track_name="straight", time_limit=30.0)
    trace = parse_trace_lines(
        (
            json.dumps(r)
            for r in [
                {"t": 0.0, "event": "calibrate_done"},
                {"t": 0.0, "event": "race_requested"},
                {"t": 0.0, "left": 1.0, "right": 0.6},
            ]
        ),
        DT,
    )
    record = run_headless(config, trace)
    final = [r for r in record.rows if r["type"] == "state"][-1]
    assert final["heading"] < 0.0
    assert final["y"] < 0.0

    # stepping a mirrored state with swapped paddles mirrors the step
    h = HydroParams()
    rng = random.Random(4242)
    for _ in range(300):
        b = BoatState(
            x=rng.uniform(0, 1000),
            y=rng.uniform(-7, 7),
            heading=rng.uniform(-3.1, 3.1),
            surge_velocity=rng.uniform(-6, 6),
            yaw_rate=rng.uniform(-1, 1),
        )
        pl = PaddleState(side="left", angle=rng.uniform(0, 359.9),
                         angular_velocity=rng.uniform(-400, 400))
        pr_ = PaddleState(side="right", angle=rng.uniform(0, 359.9),
                          angular_velocity=rng.uniform(-400, 400))
        pl.refresh_water_flag()
        pr_.refresh_water_flag()
        swapped_l = PaddleState(side="left", angle=pr_.angle,
                                angular_velocity=pr_.angular_velocity)
        swapped_r = PaddleState(side="right", angle=pl.angle,
                                angular_velocity=pl.angular_velocity)
        swapped_l.refresh_water_flag()
        swapped_r.refresh_water_flag()
        lhs = step(mirror(b), swapped_l, swapped_r, h)
        rhs = mirror(step(b, pl, pr_, h))
        for attr in ("x", "y", "heading", "surge_velocity", "yaw_rate"):
            assert abs(getattr(lhs, attr) - getattr(rhs, attr)) <= 1e-9
    _ok("movement semantics: lane-center hold, rightward bias, mirror symmetry")


def test_calibration_targets():
    targets = {"jc": (197.72, 0.05), "ec": (282.29, 0.10), "ic": (335.64, 0.15)}
    started = time.perf_counter()
    times = {}
    for tech, (center, tol) in targets.items():
        config = SessionConfig(technique=tech, track_name="barrier")
        record = run_headless(config, resolve_script(f"{tech}_barrier", DT))
        result = record.result
        assert result["finished"], tech
        assert result["collisions"] == 0, tech
        completion = result["completion_time"]
        low, high = center * (1 - tol), center * (1 + tol)
        assert low <= completion <= high, (
            f"{tech}: {completion:.2f} s outside [{low:.2f}, {high:.2f}]"
        )
        times[tech] = completion
    elapsed = time.perf_counter() - started
    assert times["jc"] < times["ec"] < times["ic"], times
    assert elapsed < 5.0, f"calibration batch took {elapsed:.2f} s (budget 5 s)"
    _ok(
        "calibration: jc %.2f s, ec %.2f s, ic %.2f s in-band, ordered, %.2f s"
        % (times["jc"], times["ec"], times["ic"], elapsed)
    )


def test_physiology_oracles():
    assert hr_max(25) == 195.0  # exact
    series = [HeartSample(t=float(t), bpm=81.63) for t in range(0, 61, 5)]
    pct = avg_hr_pct(series, age=24.83)
    assert abs(pct - 0.4184) <= 1e-4

    # clamping: anything at or above the predicted max normalizes to 1
    for bpm in (195.0, 210.0, 240.0):
        clamped = avg_hr_pct([HeartSample(t=0.0, bpm=bpm)], age=25)
        assert clamped == 1.0
    # monotone in mean bpm and always within [0, 1]
    values = [
        avg_hr_pct([HeartSample(t=0.0, bpm=float(b))], age=30)
        for b in range(40, 250, 3)
    ]
    assert all(0.0 <= v <= 1.0 for v in values)
    assert all(b >= a for a, b in zip(values, values[1:]))
    # predicted max strictly decreasing in age
    maxima = [hr_max(a) for a in range(15, 80)]
    assert all(b < a for a, b in zip(maxima, maxima[1:]))
    _ok("physiology: hr_max exact, normalization oracle, clamp + monotone sweeps")


def _exact_friedman_permutation_p(rows):
    observed = friedman(
        RepeatedMeasures(values=tuple(tuple(r) for r in rows))
    ).statistic
    ge = total = 0
    for combo in itertools.product(
        *[list(itertools.permutations(r)) for r in rows]
    ):
        total += 1
        if friedman(RepeatedMeasures(values=combo)).statistic >= observed - 1e-12:
            ge += 1
    return ge / total


def _enumerate_mwu_p(a, b):
    pooled = list(a) + list(b)
    n, na = len(pooled), len(a)
    nb = n - na
    ranks = midranks(pooled)

    def u_min(indices):
        s = sum(ranks[i] for i in indices)
        ua = s - na * (na + 1) / 2.0
        return min(ua, na * nb - ua)

    observed = u_min(range(na))
    hits = total = 0
    for combo in itertools.combinations(range(n), na):
        total += 1
        if u_min(combo) <= observed + 1e-9:
            hits += 1
    return hits / total


def test_statistics_oracle_suite():
    # Friedman agrees with the exact permutation distribution (n <= 5, k = 3)
    oracle_matrices = [
        [[1, 2, 3], [1, 2, 3], [1, 2, 3], [2, 1, 3]],
        [[6.7, 5.2, 4.8], [6.4, 9.0, 1.5], [1.0, 7.5, 9.2], [5.2, 4.4, 7.2]],
        [[9.3, 2.5, 0.2], [9.5, 3.2, 3.9], [9.8, 2.8, 0.9], [8.9, 2.4, 2.2],
         [9.4, 2.3, 9.0]],
    ]
    for rows in oracle_matrices:
        res = friedman(RepeatedMeasures(values=tuple(tuple(r) for r in rows)))
        exact = _exact_friedman_permutation_p(rows)
        assert abs(res.p_value - exact) <= 0.005, rows

    # Mann-Whitney exact p equals full enumeration for every combined n <= 10
    rng = random.Random(1001)
    for na in range(1, 10):
        for nb in range(1, 11 - na):
            for _ in range(4):
                a = [rng.randrange(0, 5) for _ in range(na)]
                b = [rng.randrange(0, 5) for _ in range(nb)]
                ours = mann_whitney_u(a, b, mode="exact").p_value
                assert ours == pytest.approx(_enumerate_mwu_p(a, b), abs=1e-12)

    # Bonferroni-adjusted alpha prints as the familiar three-comparison value
    assert f"{bonferroni_alpha(0.05, 3):.4f}" == "0.0167"

    # RM-ANOVA F and partial eta^2 against a definitional SS oracle
    rows = [
        [10.1, 12.3, 15.2],
        [9.4, 11.8, 14.1],
        [11.0, 12.9, 16.0],
        [8.9, 10.5, 13.3],
        [10.7, 13.1, 15.8],
        [9.9, 12.0, 14.6],
    ]
    n, k = len(rows), 3
    grand = sum(map(sum, rows)) / (n * k)
    ss_cond = n * sum(
        (sum(r[j] for r in rows) / n - grand) ** 2 for j in range(k)
    )
    ss_subj = k * sum((sum(r) / k - grand) ** 2 for r in rows)
    ss_total = sum((v - grand) ** 2 for r in rows for v in r)
    ss_err = ss_total - ss_cond - ss_subj
    f_oracle = (ss_cond / (k - 1)) / (ss_err / ((n - 1) * (k - 1)))
    eta_oracle = ss_cond / (ss_cond + ss_err)
    res = rm_anova_oneway(RepeatedMeasures(values=tuple(tuple(r) for r in rows)))
    assert abs(res.statistic - f_oracle) <= 1e-9
    assert abs(res.effect_size - eta_oracle) <= 1e-9

    # ART of a zero-subject-effect matrix is the plain joint ranking
    flat_rows = [[3.0, 9.0, 6.0], [2.0, 10.0, 6.0], [1.0, 12.0, 5.0]]
    aligned = aligned_rank_transform(
        RepeatedMeasures(values=tuple(tuple(r) for r in flat_rows))
    )
    assert [v for row in aligned.values for v in row] == midranks(
        [v for row in flat_rows for v in row]
    )

    # SSQ single-item and saturated cases against the Kennedy weight table
    single = [0] * 16
    single[5] = 1  # increased salivation: nausea-only symptom
    s = score_ssq(QuestionnaireResponse(instrument=SSQ, items=tuple(single)))
    assert s.nausea == pytest.approx(9.54)
    assert s.total == pytest.approx(3.74)
    full = score_ssq(QuestionnaireResponse(instrument=SSQ, items=(3,) * 16))
    assert full.nausea == pytest.approx(3 * 7 * 9.54)
    assert full.oculomotor == pytest.approx(3 * 7 * 7.58)
    assert full.disorientation == pytest.approx(3 * 7 * 13.92)
    assert full.total == pytest.approx(3 * 21 * 3.74)
    _ok("statistics: permutation/enumeration/SS/Kennedy oracles all agree")


def test_protocol_robustness():
    rng = random.Random(20240607)
    # random byte streams: total parser, never failing or over-consuming
    for _ in range(100_000):
        blob = bytes(rng.randrange(256) for _ in range(rng.randrange(0, 40)))
        frames, consumed, _ = decode_stream(blob)
        assert 0 <= consumed <= len(blob)

    # random well-formed frames survive an encode/decode round trip
    for _ in range(10_000):
        ftype = rng.choice(list(PAYLOAD_LENGTHS))
        frame = DeviceFrame(
            ftype,
            rng.randrange(256),
            bytes(rng.randrange(256) for _ in range(PAYLOAD_LENGTHS[ftype])),
        )
        decoded, consumed, diags = decode_stream(encode_frame(frame))
        assert decoded == [frame]
        assert diags.crc_mismatch == 0

    # the two worked encodings, CRC bytes precomputed with an independent
    # bitwise CRC-16/CCITT-FALSE implementation
    assert encode_frame(heartbeat_frame(0)) == bytes.fromhex("aa550300485c")
    sample = EncoderSample(side="left", angle=33700, angular_velocity=0)
    assert encode_frame(encoder_report_frame(sample, 1)) == bytes.fromhex(
        "aa55010100a48300004e82"
    )
    _ok("protocol: 1e5 fuzz streams, 1e4 round trips, worked CRC frames exact")


def test_race_logic(bundled_runs):
    from dragonboat.race import BoatFootprint, detect_finish, detect_start

    track = track_preset("barrier")

    # bow-edge starts, stern-edge finishes on crafted footprints
    def fp(bow_x, stern_x):
        return BoatFootprint(bow=(bow_x, 0.0), stern=(stern_x, 0.0), beam=1.2)

    assert detect_start(fp(-0.5, -13.0), fp(0.5, -12.0), track)
    assert not detect_start(fp(0.5, -12.0), fp(1.5, -11.0), track)
    assert not detect_finish(fp(1002.0, 989.0), fp(1004.0, 991.5), track)
    assert detect_finish(fp(1011.9, 999.9), fp(1012.6, 1000.6), track)

    # a full-throttle straight run into the wall collides and stops there
    config = SessionConfig(technique="jc", track_name="barrier", time_limit=150.0)
    trace = parse_trace_lines(
        (
            json.dumps(r)
            for r in [
                {"t": 0.0, "event": "calibrate_done"},
                {"t": 0.0, "event": "race_requested"},
                {"t": 0.0, "left": 1.0, "right": 1.0},
            ]
        ),
        DT,
    )
    record = run_headless(config, trace)
    assert record.result["finished"] is False
    assert record.result["collisions"] > 0
    states = [r for r in record.rows if r["type"] == "state"]
    assert all(s["x"] < 500.0 for s in states)

    # the scripted detour (bundled pilot script) clears both walls
    runs, _ = bundled_runs
    detour, _, _ = runs[("jc", "barrier")]
    assert detour.result["finished"] is True
    assert detour.result["collisions"] == 0

    # 101 buoys on every lane line
    assert len(track.buoy_xs()) == 101
    assert len(track.lane_line_ys()) == track.lane_count + 1
    _ok("race logic: line edges, wall stop, scripted detour, 101 buoys per line")
