import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forwardreg.environments import (
    ABRUPT_CHANGES,
    SLOW_DRIFT_STEPS,
    _splitmix64,
    BanditEnvSpec,
    BanditStream,
    RegressionEnvSpec,
    RegressionStream,
    derive_replicate_seed,
    gen_bandit_round,
    gen_regression_step,
    theta_path_value,
    total_variation,
)


class TestRegression:
    def test_noiseless_zero_parameter(self):
        spec = RegressionEnvSpec(d=3, sigma=0.0, T=20, theta_star=[0.0, 0.0, 0.0])
        stream = RegressionStream(spec)
        assert all(stream.step(t)[1] == 0.0 for t in range(1, 21))

    def test_noiseless_scalar(self):
        spec = RegressionEnvSpec(d=1, sigma=0.0, T=1, feature_dist="fixed_list", features=[[0.5]], theta_star=[2.0])
        x, y = gen_regression_step(spec, 1)
        assert x == pytest.approx([0.5]) and y == pytest.approx(1.0)

    def test_noise_mean(self):
        spec = RegressionEnvSpec(d=2, sigma=0.3, T=100_000, seed=5)
        s = RegressionStream(spec)
        resid = s.labels - s.features @ s.theta_star
        assert abs(resid.mean()) <= 3 * 0.3 / math.sqrt(100_000)

    def test_beyond_horizon(self):
        spec = RegressionEnvSpec(d=2, sigma=0.1, T=5)
        with pytest.raises(IndexError):
            gen_regression_step(spec, 6)

    @pytest.mark.parametrize("dist, cap", [("unit_ball", 1.0), ("unit_cube", math.sqrt(4))])
    def test_norm_caps(self, dist, cap):
        s = RegressionStream(RegressionEnvSpec(d=4, sigma=0.1, T=5000, seed=1, feature_dist=dist))
        assert np.linalg.norm(s.features, axis=1).max() <= cap + 1e-12
        if dist == "unit_cube":
            assert s.features.min() >= 0 and s.features.max() <= 1

    def test_determinism(self):
        spec = RegressionEnvSpec(d=3, sigma=0.1, T=50, seed=123)
        a, b = RegressionStream(spec), RegressionStream(spec)
        np.testing.assert_array_equal(a.features, b.features)
        np.testing.assert_array_equal(a.labels, b.labels)

    def test_step_uses_rng_state(self):
        spec = RegressionEnvSpec(d=3, sigma=0.1, T=10, seed=4)
        stream = RegressionStream(spec)
        x, y = gen_regression_step(spec, 7, stream)
        x2, y2 = gen_regression_step(spec, 7)
        np.testing.assert_array_equal(x, x2)
        assert y == y2

    @pytest.mark.parametrize(
        "kw",
        [
            dict(d=0, sigma=0.1, T=5),
            dict(d=2, sigma=-1.0, T=5),
            dict(d=2, sigma=0.1, T=5, feature_dist="gaussian"),
            dict(d=2, sigma=0.1, T=5, feature_dist="fixed_list", features=[[1, 0]]),
            dict(d=2, sigma=0.1, T=5, theta_star=[1.0]),
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            RegressionEnvSpec(**kw)


class TestSchedules:
    def test_abrupt(self):
        assert theta_path_value("abrupt", 1) == pytest.approx([1, 0])
        assert theta_path_value("abrupt", 1500) == pytest.approx([-1, 0])
        assert theta_path_value("abrupt", 2000) == pytest.approx([-1, 0])
        assert theta_path_value("abrupt", 2500) == pytest.approx([0, 1])
        assert theta_path_value("abrupt", 3500) == pytest.approx([0, -1])

    def test_abrupt_three_changes(self):
        thetas = np.array([theta_path_value("abrupt", t) for t in range(0, 4001)])
        jumps = np.flatnonzero(np.linalg.norm(np.diff(thetas, axis=0), axis=1) > 0)
        assert len(jumps) == 3
        assert len(ABRUPT_CHANGES) == 3

    def test_slow_endpoints(self):
        assert theta_path_value("slow", 0) == pytest.approx([1, 0])
        assert theta_path_value("slow", 3000) == pytest.approx([0, 1], abs=1e-15)
        assert theta_path_value("slow", 3900) == pytest.approx([0, 1], abs=1e-15)

    def test_slow_variation(self):
        thetas = np.array([theta_path_value("slow", t) for t in range(0, 4001)])
        assert total_variation(thetas) == pytest.approx(1.5708, abs=1e-3)
        steps = np.linalg.norm(np.diff(thetas[: SLOW_DRIFT_STEPS + 1], axis=0), axis=1)
        chord = 2 * math.sin(math.pi / 4 / SLOW_DRIFT_STEPS)
        np.testing.assert_allclose(steps, chord, rtol=1e-9)
        assert chord == pytest.approx((math.pi / 2) / 3000, rel=1e-6)

    def test_unknown_path(self):
        with pytest.raises(ValueError):
            theta_path_value("zigzag", 3)


class TestBandit:
    def test_round_shapes(self):
        spec = BanditEnvSpec(d=2, sigma=0.1, T=4000, seed=1, K=10, arms="resample_circle", theta_path="abrupt")
        A, theta = gen_bandit_round(spec, 1500)
        assert A.shape == (10, 2)
        assert theta == pytest.approx([-1, 0])
        np.testing.assert_allclose(np.linalg.norm(A, axis=1), 1.0)

    def test_slow_theta(self):
        stream = BanditStream(BanditEnvSpec(d=2, sigma=0.1, T=4000, theta_path="slow", arms="resample_circle"))
        assert stream.theta_at(0) == pytest.approx([1, 0])
        assert stream.theta_at(3500) == pytest.approx([0, 1], abs=1e-15)

    @pytest.mark.parametrize("arms", ["fixed_ball", "resample_ball"])
    def test_arm_caps(self, arms):
        stream = BanditStream(BanditEnvSpec(d=6, sigma=0.1, T=200, seed=3, K=10, arms=arms, max_norm=200.0))
        for t in (1, 50, 200):
            assert np.linalg.norm(stream.actions_at(t), axis=1).max() <= 200.0 + 1e-9

    def test_fixed_arms_are_fixed(self):
        stream = BanditStream(BanditEnvSpec(d=3, sigma=0.1, T=10, seed=3))
        np.testing.assert_array_equal(stream.actions_at(1), stream.actions_at(10))

    def test_reward(self):
        spec = BanditEnvSpec(d=2, sigma=0.0, T=5, theta_star=[1.0, 2.0])
        stream = BanditStream(spec)
        assert stream.reward(3, [1.0, 1.0]) == pytest.approx(3.0)

    def test_determinism(self):
        spec = BanditEnvSpec(d=3, sigma=0.1, T=30, seed=77, arms="resample_ball")
        a, b = BanditStream(spec), BanditStream(spec)
        for t in range(1, 31):
            np.testing.assert_array_equal(a.actions_at(t), b.actions_at(t))
            assert a.reward(t, [1, 0, 0]) == b.reward(t, [1, 0, 0])

    def test_beyond_horizon(self):
        with pytest.raises(IndexError):
            gen_bandit_round(BanditEnvSpec(d=2, sigma=0.1, T=3), 4)

    @pytest.mark.parametrize(
        "kw",
        [
            dict(d=3, sigma=0.1, T=5, theta_path="abrupt"),
            dict(d=3, sigma=0.1, T=5, arms="resample_circle"),
            dict(d=2, sigma=0.1, T=5, arms="grid"),
            dict(d=2, sigma=0.1, T=5, K=0),
            dict(d=2, sigma=0.1, T=5, max_norm=0.0),
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            BanditEnvSpec(**kw)


class TestReplicateSeeds:
    def test_distinct_neighbours(self):
        assert derive_replicate_seed(42, 0) != derive_replicate_seed(42, 1)

    def test_repeatable(self):
        assert derive_replicate_seed(42, 7) == derive_replicate_seed(42, 7)

    def test_no_collisions(self):
        seeds = {derive_replicate_seed(2021, i) for i in range(10_000)}
        assert len(seeds) == 10_000

    def test_mixer_reference_value(self):
        # first output of the reference splitmix64 generator seeded with 0
        assert _splitmix64(0) == 0xE220A8397B1DCDAF

    def test_frozen_value(self):
        # pure integer arithmetic, so the value is the same on every platform
        assert derive_replicate_seed(0, 0) == _splitmix64(0xE220A8397B1DCDAF)
        assert derive_replicate_seed(0, 0) == 0xA706DD2F4D197E6F


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(0, 2**20), st.integers(0, 2**20))
def test_seed_injective(master, i, j):
    if i != j:
        assert derive_replicate_seed(master, i) != derive_replicate_seed(master, j)
    assert 0 <= derive_replicate_seed(master, i) < 2**64
