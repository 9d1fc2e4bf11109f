"""Seeded data generators for regression streams and linear-bandit worlds.

Streams draw everything up front from a PCG64 generator seeded by the spec,
so a given ``(seed, t)`` always maps to the same sample no matter how
the stream is consumed.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

__all__ = [
    "RegressionEnvSpec",
    "BanditEnvSpec",
    "RegressionStream",
    "BanditStream",
    "gen_regression_step",
    "gen_bandit_round",
    "derive_replicate_seed",
    "theta_path_value",
    "total_variation",
    "sample_unit_ball",
    "ABRUPT_CHANGES",
    "SLOW_DRIFT_STEPS",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

ABRUPT_CHANGES = (1000, 2000, 3000)
SLOW_DRIFT_STEPS = 3000

FEATURE_DISTS = ("unit_cube", "unit_ball", "fixed_list")
ARM_MODES = ("fixed_ball", "resample_ball", "resample_circle")
THETA_PATHS = ("constant", "abrupt", "slow")


def _splitmix64(z: int) -> int:
    z = (z + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_replicate_seed(master_seed: int, replicate_index: int) -> int:
    """64-bit seed for one replicate; injective in ``replicate_index`` for a fixed master seed."""
    base = _splitmix64(int(master_seed) & _MASK64)
    return _splitmix64((base + _GOLDEN * int(replicate_index)) & _MASK64)


def sample_unit_ball(rng: np.random.Generator, n: int, d: int, radius: float = 1.0) -> np.ndarray:
    """``n`` points uniform in the ``d``-dimensional ball of the given radius."""
    g = rng.standard_normal((n, d))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    r = rng.random((n, 1)) ** (1.0 / d)
    return radius * r * g / norms


@dataclass
class RegressionEnvSpec:
    d: int
    sigma: float
    T: int
    seed: int = 0
    feature_dist: str = "unit_ball"
    theta_star: list | None = None
    features: list | None = None

    def __post_init__(self):
        if self.d < 1 or self.T < 1:
            raise ValueError("d and T must be positive")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        if self.feature_dist not in FEATURE_DISTS:
            raise ValueError(f"feature_dist must be one of {FEATURE_DISTS}, got {self.feature_dist!r}")
        if self.feature_dist == "fixed_list":
            if self.features is None or len(self.features) < self.T:
                raise ValueError("fixed_list needs at least T features")
        if self.theta_star is not None and len(self.theta_star) != self.d:
            raise ValueError("theta_star has the wrong dimension")

    @property
    def max_norm(self) -> float:
        if self.feature_dist == "unit_ball":
            return 1.0
        if self.feature_dist == "unit_cube":
            return math.sqrt(self.d)
        return float(np.linalg.norm(np.asarray(self.features, dtype=float)[: self.T], axis=1).max())

    def to_dict(self) -> dict:
        return asdict(self)


class RegressionStream:
    """Materialized regression data ``y_t = x_t^T theta_* + sigma * N(0, 1)``, ``t = 1..T``.

    A ``None`` ``theta_star`` is drawn uniformly from the unit ball.
    """

    def __init__(self, spec: RegressionEnvSpec):
        self.spec = spec
        rng = np.random.Generator(np.random.PCG64(spec.seed))
        d, T = spec.d, spec.T
        if spec.theta_star is None:
            self.theta_star = sample_unit_ball(rng, 1, d)[0]
        else:
            self.theta_star = np.asarray(spec.theta_star, dtype=float)
        if spec.feature_dist == "unit_cube":
            self.features = rng.random((T, d))
        elif spec.feature_dist == "unit_ball":
            self.features = sample_unit_ball(rng, T, d)
        else:
            self.features = np.asarray(spec.features, dtype=float)[:T].reshape(T, d)
        self.noise = spec.sigma * rng.standard_normal(T)
        self.labels = self.features @ self.theta_star + self.noise

    def step(self, t: int) -> tuple[np.ndarray, float]:
        if not 1 <= t <= self.spec.T:
            raise IndexError(f"step {t} outside 1..{self.spec.T}")
        return self.features[t - 1], float(self.labels[t - 1])


def gen_regression_step(spec: RegressionEnvSpec, t: int, rng_state: RegressionStream | None = None):
    """Feature and label for step ``t`` (1-based); deterministic in ``(spec.seed, t)``."""
    stream = rng_state if rng_state is not None else RegressionStream(spec)
    return stream.step(t)


def theta_path_value(path: str, t: float, theta_star=None) -> np.ndarray:
    """True parameter at round ``t`` for the stationary and drifting schedules."""
    if path == "constant":
        return np.asarray(theta_star, dtype=float)
    if path == "abrupt":
        first, second, third = ABRUPT_CHANGES
        if t < first:
            return np.array([1.0, 0.0])
        if t <= second:
            return np.array([-1.0, 0.0])
        if t < third:
            return np.array([0.0, 1.0])
        return np.array([0.0, -1.0])
    if path == "slow":
        angle = 0.5 * math.pi * min(max(t, 0.0), SLOW_DRIFT_STEPS) / SLOW_DRIFT_STEPS
        return np.array([math.cos(angle), math.sin(angle)])
    raise ValueError(f"theta_path must be one of {THETA_PATHS}, got {path!r}")


def total_variation(thetas: np.ndarray) -> float:
    """``sum_s ||theta(s+1) - theta(s)||_2`` over consecutive rows."""
    thetas = np.asarray(thetas, dtype=float)
    return float(np.linalg.norm(np.diff(thetas, axis=0), axis=1).sum())


@dataclass
class BanditEnvSpec:
    d: int
    sigma: float
    T: int
    seed: int = 0
    K: int = 10
    arms: str = "fixed_ball"
    theta_path: str = "constant"
    theta_star: list | None = None
    max_norm: float = 1.0

    def __post_init__(self):
        if self.d < 1 or self.T < 1 or self.K < 1:
            raise ValueError("d, T and K must be positive")
        if self.sigma < 0 or not self.max_norm > 0:
            raise ValueError("sigma must be nonnegative and max_norm positive")
        if self.arms not in ARM_MODES:
            raise ValueError(f"arms must be one of {ARM_MODES}, got {self.arms!r}")
        if self.theta_path not in THETA_PATHS:
            raise ValueError(f"theta_path must be one of {THETA_PATHS}, got {self.theta_path!r}")
        if self.theta_path != "constant" and self.d != 2:
            raise ValueError("the drifting schedules live in dimension 2")
        if self.arms == "resample_circle" and self.d != 2:
            raise ValueError("resample_circle arms need d = 2")

    def to_dict(self) -> dict:
        return asdict(self)


class BanditStream:
    """Materialized action sets, parameter path and reward noise for rounds ``1..T``.

    A constant path with ``theta_star=None`` draws the parameter uniformly from the unit ball.
    """

    def __init__(self, spec: BanditEnvSpec):
        self.spec = spec
        rng = np.random.Generator(np.random.PCG64(spec.seed))
        d, K, T = spec.d, spec.K, spec.T
        if spec.theta_path == "constant":
            if spec.theta_star is None:
                self._theta = sample_unit_ball(rng, 1, d)[0]
            else:
                self._theta = np.asarray(spec.theta_star, dtype=float)
        else:
            self._theta = None
        if spec.arms == "fixed_ball":
            self._arms = sample_unit_ball(rng, K, d, spec.max_norm)
        elif spec.arms == "resample_ball":
            self._arms = sample_unit_ball(rng, T * K, d, spec.max_norm).reshape(T, K, d)
        else:
            angles = rng.uniform(0.0, 2.0 * math.pi, size=(T, K))
            self._arms = spec.max_norm * np.stack([np.cos(angles), np.sin(angles)], axis=-1)
        self.noise = spec.sigma * rng.standard_normal(T)

    def theta_at(self, t: int) -> np.ndarray:
        return theta_path_value(self.spec.theta_path, t, self._theta)

    def actions_at(self, t: int) -> np.ndarray:
        if not 1 <= t <= self.spec.T:
            raise IndexError(f"round {t} outside 1..{self.spec.T}")
        if self._arms.ndim == 2:
            return self._arms
        return self._arms[t - 1]

    def round(self, t: int) -> tuple[np.ndarray, np.ndarray]:
        return self.actions_at(t), self.theta_at(t)

    def reward(self, t: int, x) -> float:
        return float(np.asarray(x, dtype=float) @ self.theta_at(t) + self.noise[t - 1])


def gen_bandit_round(spec: BanditEnvSpec, t: int, rng_state: BanditStream | None = None):
    """Action set and true parameter of round ``t`` (1-based)."""
    stream = rng_state if rng_state is not None else BanditStream(spec)
    return stream.round(t)
