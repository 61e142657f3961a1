import math
import random

import pytest

from dragonboat.sim import (
    DEFAULT_WATER_ZONE,
    BoatState,
    HydroParams,
    PaddleState,
    WaterZone,
    in_water,
    mirror,
    paddle_thrust,
    step,
    terminal_speed,
    wrap_degrees,
    wrap_pi,
)


def test_wrap_degrees_range():
    for a in (-720.5, -360.0, -0.0001, 0.0, 359.999, 360.0, 1000.0, -1e-13):
        w = wrap_degrees(a)
        assert 0.0 <= w < 360.0


def test_wrap_pi_range_and_convention():
    assert wrap_pi(math.pi) == math.pi  # upper edge inclusive
    assert wrap_pi(-math.pi) == math.pi
    assert wrap_pi(3 * math.pi) == pytest.approx(math.pi)
    for a in (-10.0, -math.pi, 0.0, 2.9, math.pi, 7.2):
        w = wrap_pi(a)
        assert -math.pi < w <= math.pi


class TestWaterZone:
    def test_default_arcs(self):
        assert DEFAULT_WATER_ZONE.in_water_arcs == ((290.0, 360.0), (0.0, 70.0))

    def test_example_angles(self):
        # hardware Area 1 is 290-360 and 0-70; Area 2 (70-290) hovers mid-air
        assert in_water(337.0) is True
        assert in_water(180.0) is False

    def test_half_open_boundaries(self):
        assert in_water(70.0) is False
        assert in_water(290.0) is True
        assert in_water(0.0) is True
        assert in_water(69.99) is True
        assert in_water(289.99) is False

    def test_rejects_unwrapped_angle(self):
        with pytest.raises(ValueError):
            in_water(360.0)
        with pytest.raises(ValueError):
            in_water(-1.0)

    def test_complement_covers_circle(self):
        zone = DEFAULT_WATER_ZONE
        spans = sorted(zone.in_water_arcs + zone.out_of_water_arcs())
        assert spans[0][0] == 0.0
        assert spans[-1][1] == 360.0
        for (_, hi_a), (lo_b, _) in zip(spans, spans[1:]):
            assert hi_a == lo_b

    def test_membership_has_exactly_one_answer(self):
        zone = DEFAULT_WATER_ZONE
        outs = zone.out_of_water_arcs()
        for i in range(36000):
            angle = i / 100.0
            wet = in_water(angle, zone)
            dry = any(lo <= angle < hi for lo, hi in outs)
            assert wet != dry

    def test_overlapping_arcs_rejected(self):
        with pytest.raises(ValueError):
            WaterZone(((0.0, 100.0), (50.0, 200.0)))
        with pytest.raises(ValueError):
            WaterZone(((-10.0, 20.0),))


class TestPaddleThrust:
    def test_airborne_blade_produces_nothing(self):
        p = PaddleState(side="left", angle=180.0, angular_velocity=300.0)
        assert paddle_thrust(p, HydroParams()) == 0.0

    def test_zero_rotation(self):
        p = PaddleState(side="left", angle=0.0, angular_velocity=0.0)
        assert paddle_thrust(p, HydroParams()) == 0.0

    def test_proportional_to_rate_in_water(self):
        h = HydroParams(thrust_coeff=2.0)
        p = PaddleState(side="right", angle=300.0, angular_velocity=100.0)
        assert paddle_thrust(p, h) == pytest.approx(200.0)

    def test_backward_rotation_reverses(self):
        h = HydroParams()
        p = PaddleState(side="left", angle=10.0, angular_velocity=-50.0)
        assert paddle_thrust(p, h) < 0.0


def _wet_paddle(side, omega):
    return PaddleState(side=side, angle=0.0, angular_velocity=omega, in_water=True)


class TestStep:
    def test_rest_is_a_fixed_point(self):
        h = HydroParams()
        b = BoatState()
        left = _wet_paddle("left", 0.0)
        right = _wet_paddle("right", 0.0)
        after = step(b, left, right, h)
        assert after == b

    def test_equal_forces_keep_zero_yaw_exactly(self):
        h = HydroParams()
        b = BoatState()
        for _ in range(600):
            b = step(b, _wet_paddle("left", 180.0), _wet_paddle("right", 180.0), h)
        assert b.yaw_rate == 0.0
        assert b.heading == 0.0
        assert b.y == 0.0
        assert b.x > 0.0

    def test_dominant_left_turns_right(self):
        h = HydroParams()
        b = BoatState()
        b = step(b, _wet_paddle("left", 300.0), _wet_paddle("right", 100.0), h)
        assert b.yaw_rate < 0.0

    def test_reverse_when_both_negative(self):
        h = HydroParams()
        b = BoatState()
        for _ in range(120):
            b = step(b, _wet_paddle("left", -180.0), _wet_paddle("right", -180.0), h)
        assert b.surge_velocity < 0.0
        assert b.x < 0.0
        assert b.yaw_rate == 0.0

    def test_determinism_bitwise(self):
        h = HydroParams()
        rng = random.Random(42)
        inputs = [
            (rng.uniform(-360, 360), rng.uniform(-360, 360), rng.uniform(0, 359.99))
            for _ in range(500)
        ]

        def run():
            b = BoatState()
            out = []
            for wl, wr, angle in inputs:
                left = PaddleState(side="left", angle=angle, angular_velocity=wl)
                left.refresh_water_flag()
                right = PaddleState(side="right", angle=angle, angular_velocity=wr)
                right.refresh_water_flag()
                b = step(b, left, right, h)
                out.append((b.x, b.y, b.heading, b.surge_velocity, b.yaw_rate,
                            b.distance_travelled))
            return out

        assert run() == run()

    def test_drag_dissipates_coasting_speed(self):
        h = HydroParams()
        b = BoatState(surge_velocity=5.0)
        idle_l = PaddleState(side="left", angle=180.0, angular_velocity=0.0)
        idle_r = PaddleState(side="right", angle=180.0, angular_velocity=0.0)
        prev = b.surge_velocity
        for _ in range(300):
            b = step(b, idle_l, idle_r, h)
            assert 0.0 < b.surge_velocity < prev
            prev = b.surge_velocity

    def test_distance_travelled_monotone(self):
        h = HydroParams()
        rng = random.Random(9)
        b = BoatState()
        last = 0.0
        for _ in range(400):
            omega = rng.uniform(-360, 360)
            b = step(b, _wet_paddle("left", omega), _wet_paddle("right", omega), h)
            assert b.distance_travelled >= last
            last = b.distance_travelled

    def test_bounded_input_speed_stays_below_terminal(self):
        h = HydroParams()
        omega_max = 360.0
        bound = terminal_speed(omega_max, h)
        b = BoatState()
        for _ in range(6000):
            b = step(b, _wet_paddle("left", omega_max), _wet_paddle("right", omega_max), h)
            assert abs(b.surge_velocity) < bound
        # converged close under the bound: the always-wet case approaches it
        assert b.surge_velocity > 0.95 * bound


class TestMirror:
    def test_negates_lateral_quantities(self):
        b = BoatState(x=5.0, y=1.0, heading=0.2, surge_velocity=3.0, yaw_rate=0.3)
        m = mirror(b)
        assert (m.y, m.heading, m.yaw_rate) == (-1.0, -0.2, -0.3)
        assert (m.x, m.surge_velocity) == (5.0, 3.0)

    def test_involution(self):
        b = BoatState(x=1.0, y=-2.0, heading=1.1, surge_velocity=-0.5, yaw_rate=0.7)
        assert mirror(mirror(b)) == b

    def test_straight_line_state_is_fixed(self):
        b = BoatState(x=10.0, surge_velocity=4.0)
        assert mirror(b) == b

    def test_mirror_symmetry_of_step(self):
        h = HydroParams()
        rng = random.Random(1234)
        for _ in range(200):
            b = BoatState(
                x=rng.uniform(-100, 100),
                y=rng.uniform(-10, 10),
                heading=rng.uniform(-3.0, 3.0),
                surge_velocity=rng.uniform(-6, 6),
                yaw_rate=rng.uniform(-1, 1),
                distance_travelled=rng.uniform(0, 500),
            )
            angle_l = rng.uniform(0, 359.99)
            angle_r = rng.uniform(0, 359.99)
            wl, wr = rng.uniform(-360, 360), rng.uniform(-360, 360)
            left = PaddleState(side="left", angle=angle_l, angular_velocity=wl)
            left.refresh_water_flag()
            right = PaddleState(side="right", angle=angle_r, angular_velocity=wr)
            right.refresh_water_flag()
            # mirrored boat with swapped paddles
            m_left = PaddleState(side="left", angle=angle_r, angular_velocity=wr)
            m_left.refresh_water_flag()
            m_right = PaddleState(side="right", angle=angle_l, angular_velocity=wl)
            m_right.refresh_water_flag()
            direct = step(mirror(b), m_left, m_right, h)
            reflected = mirror(step(b, left, right, h))
            assert direct.x == pytest.approx(reflected.x, abs=1e-9)
            assert direct.y == pytest.approx(reflected.y, abs=1e-9)
            assert direct.heading == pytest.approx(reflected.heading, abs=1e-9)
            assert direct.surge_velocity == pytest.approx(
                reflected.surge_velocity, abs=1e-9
            )
            assert direct.yaw_rate == pytest.approx(reflected.yaw_rate, abs=1e-9)


class TestHydroParams:
    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            HydroParams(mass=0.0)
        with pytest.raises(ValueError):
            HydroParams(dt=-1.0)

    def test_beam_is_twice_the_lever_arm(self):
        h = HydroParams(half_beam=0.6)
        assert h.beam == 1.2
