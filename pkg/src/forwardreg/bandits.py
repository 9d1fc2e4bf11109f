"""Optimistic linear-bandit agents over finite action sets.

``OFUL`` and ``OFULForward`` share a ridge design ``G = lam I + sum x x^T``;
the forward agent scores each candidate ``x`` with the design
``G + x x^T`` it would have after playing it.  ``DLinUCB`` keeps the
discounted pair ``(V, V_tilde)`` and its forward variant scores with
``V + a a^T`` and ``V_tilde + a a^T``.  All agents break ties by list position.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bounds import BoundParams, beta_ridge, dlinucb_beta
from .design import DesignState

__all__ = [
    "OFUL",
    "OFULForward",
    "DLinUCB",
    "DiscountedState",
    "oful_index",
    "oful_forward_index",
    "select_action",
    "dlinucb_step",
    "pseudo_regret_step",
    "make_agent",
    "AGENTS",
]

AGENTS = ("oful", "oful_f", "dlinucb", "dlinucb_f")


def _actions(actions) -> np.ndarray:
    A = np.asarray(actions, dtype=float)
    if A.ndim == 1:
        A = A[None, :]
    if A.shape[0] == 0:
        raise ValueError("empty action set")
    return A


class _Agent:
    def __init__(self, d: int, params: BoundParams):
        if params.d != d:
            raise ValueError(f"params.d={params.d} does not match d={d}")
        self.d = d
        self.params = params
        self.t = 0

    def index(self, actions) -> np.ndarray:
        raise NotImplementedError

    def select(self, actions) -> tuple[int, np.ndarray]:
        A = _actions(actions)
        if A.shape[1] != self.d:
            raise ValueError(f"actions have dimension {A.shape[1]}, expected {self.d}")
        i = int(np.argmax(self.index(A)))
        return i, A[i]

    def update(self, x, y: float) -> None:
        raise NotImplementedError


class OFUL(_Agent):
    """OFUL with the ridge estimate: ``x^T theta_t + radius(t) ||x||_{G_t^{-1}}``.

    ``radius`` maps the number of observations to the ellipsoid radius and
    defaults to :func:`beta_ridge`.
    """

    name = "oful"

    def __init__(self, d: int, params: BoundParams, radius: Callable[[int], float] | None = None):
        super().__init__(d, params)
        self.design = DesignState.new(d, params.lam)
        self.theta = np.zeros(d)
        self.running_X = 0.0
        self.radius = radius if radius is not None else (lambda n: beta_ridge(params, n))

    def index(self, actions) -> np.ndarray:
        A = _actions(actions)
        U = A @ self.design.gram_inv
        norms = np.sqrt(np.maximum(np.einsum("kd,kd->k", U, A), 0.0))
        return A @ self.theta + self.radius(self.t) * norms

    def update(self, x, y: float) -> None:
        x = np.asarray(x, dtype=float)
        self.design.update(x, y)
        self.theta = self.design.solve()
        self.running_X = max(self.running_X, float(np.linalg.norm(x)))
        self.t += 1


class OFULForward(OFUL):
    """OFUL^f: each action ``x`` is scored with the forward estimate ``(G + x x^T)^{-1} b``.

    Score: ``<x, theta^f(x)> + ||x||_{(G + x x^T)^{-1}} * ((sqrt(lam) + ||x||) S
    + sigma sqrt(2 log((1 + t X_t(x)^2 / (lam d))^{d/2} / delta)))`` where ``t`` is the
    current round and ``X_t(x) = max(||x||, max played norm)``.
    """

    name = "oful_f"

    def __init__(self, d: int, params: BoundParams):
        super().__init__(d, params)

    def index(self, actions) -> np.ndarray:
        A = _actions(actions)
        p = self.params
        U = A @ self.design.gram_inv
        m = np.maximum(np.einsum("kd,kd->k", U, A), 0.0)
        at = A @ self.theta
        # theta^f(x) = theta - G^{-1} x (x^T theta) / (1 + m)
        exploit = at - m * at / (1.0 + m)
        norm_f = np.sqrt(m / (1.0 + m))
        xnorm = np.linalg.norm(A, axis=1)
        X_t = np.maximum(xnorm, self.running_X)
        round_t = self.t + 1
        log_term = 0.5 * p.d * np.log1p(round_t * X_t**2 / (p.lam * p.d)) + math.log(1.0 / p.delta)
        width = (math.sqrt(p.lam) + xnorm) * p.S + p.sigma * np.sqrt(2.0 * log_term)
        return exploit + norm_f * width


@dataclass
class DiscountedState:
    V: np.ndarray
    V_tilde: np.ndarray
    b: np.ndarray
    gamma: float
    lam: float
    t: int = 0

    @classmethod
    def new(cls, d: int, lam: float, gamma: float) -> "DiscountedState":
        if not 0.0 < gamma <= 1.0:
            raise ValueError(f"gamma must lie in (0, 1], got {gamma!r}")
        if not lam > 0:
            raise ValueError("lam must be positive")
        eye = np.eye(d)
        return cls(lam * eye, lam * eye.copy(), np.zeros(d), float(gamma), float(lam))

    def update(self, x, y: float) -> None:
        x = np.asarray(x, dtype=float)
        g, lam = self.gamma, self.lam
        eye = np.eye(self.b.size)
        xx = np.outer(x, x)
        self.V = g * self.V + xx + (1.0 - g) * lam * eye
        self.V_tilde = g * g * self.V_tilde + xx + (1.0 - g * g) * lam * eye
        self.b = g * self.b + float(y) * x
        self.t += 1

    @property
    def theta(self) -> np.ndarray:
        return np.linalg.solve(self.V, self.b)


class DLinUCB(_Agent):
    """Discounted LinUCB (``variant='ridge'``) and its forward version (``'forward'``)."""

    def __init__(self, d: int, params: BoundParams, gamma: float, variant: str = "ridge"):
        super().__init__(d, params)
        if variant not in ("ridge", "forward"):
            raise ValueError(f"variant must be 'ridge' or 'forward', got {variant!r}")
        self.variant = variant
        self.name = "dlinucb" if variant == "ridge" else "dlinucb_f"
        self.state = DiscountedState.new(d, params.lam, gamma)

    @property
    def gamma(self) -> float:
        return self.state.gamma

    def beta(self) -> float:
        return dlinucb_beta(self.params, self.state.t, self.state.gamma)

    def index(self, actions) -> np.ndarray:
        A = _actions(actions)
        s = self.state
        V_inv = np.linalg.inv(s.V)
        U = A @ V_inv
        at = A @ (V_inv @ s.b)
        spread = np.maximum(np.einsum("kd,de,ke->k", U, s.V_tilde, U), 0.0)
        if self.variant == "ridge":
            return at + self.beta() * np.sqrt(spread)
        m = np.maximum(np.einsum("kd,kd->k", U, A), 0.0)
        # (V + a a^T)^{-1} a = V^{-1} a / (1 + m)
        width_sq = (spread + m * m) / (1.0 + m) ** 2
        return at / (1.0 + m) + self.beta() * np.sqrt(width_sq)

    def update(self, x, y: float) -> None:
        self.state.update(x, y)
        self.t = self.state.t


def oful_index(state: OFUL, x) -> float:
    return float(OFUL.index(state, x)[0])


def oful_forward_index(state: OFULForward, x) -> float:
    return float(OFULForward.index(state, x)[0])


def select_action(state, actions, index_fn) -> tuple[int, np.ndarray]:
    """Exhaustive argmax of ``index_fn(state, x)``; the first maximizer wins."""
    A = _actions(actions)
    best_i, best_v = 0, -math.inf
    for i, x in enumerate(A):
        v = index_fn(state, x)
        if v > best_v:
            best_i, best_v = i, v
    return best_i, A[best_i]


def dlinucb_step(state: DLinUCB, actions, reward_fn) -> tuple[int, DLinUCB]:
    """One D-LinUCB round: pick the best index, pay ``reward_fn(x)``, update."""
    i, x = state.select(actions)
    state.update(x, reward_fn(x))
    return i, state


def pseudo_regret_step(theta_star, actions, chosen: int) -> float:
    """``max_a <a, theta_*> - <x_chosen, theta_*>``."""
    means = _actions(actions) @ np.asarray(theta_star, dtype=float)
    return max(float(means.max() - means[chosen]), 0.0)


def make_agent(name: str, d: int, params: BoundParams, gamma: float = 1.0):
    if name == "oful":
        return OFUL(d, params)
    if name == "oful_f":
        return OFULForward(d, params)
    if name == "dlinucb":
        return DLinUCB(d, params, gamma, "ridge")
    if name == "dlinucb_f":
        return DLinUCB(d, params, gamma, "forward")
    raise ValueError(f"unknown bandit agent {name!r}; expected one of {AGENTS}")
