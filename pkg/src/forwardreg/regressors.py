"""Online ridge, forward and unregularized-forward regression.

All three estimators share the same loop: ``predict(x)`` issues a prediction
for the incoming feature, ``observe(x, y)`` pays the square loss and folds
the sample into the design.  The forward estimators use the incoming
feature inside the Gram matrix before predicting; that view is temporary
and never mutates the persistent design.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .design import DesignState, _as_vector, pinv

__all__ = [
    "RegressorSnapshot",
    "StepDiagnostics",
    "OnlineRidge",
    "OnlineForward",
    "UnregularizedForward",
    "make_regressor",
    "batch_ols",
    "OLSResult",
    "ALGOS",
]

ALGOS = ("ridge", "forward", "unregularized_forward")


@dataclass(frozen=True)
class RegressorSnapshot:
    algo: str
    theta: np.ndarray
    t: int
    lam: float


@dataclass
class StepDiagnostics:
    """Per-step quantities of one online regression round.

    ``second_term`` of the forward algorithm for step ``t`` needs
    ``x_{t+1}``; it stays 0 until the next ``predict`` call fills it in.
    """

    t: int
    prediction: float
    loss: float
    first_term: float
    second_term: float = 0.0
    instant_oracle_regret: float = math.nan


class _OnlineRegressor:
    algo = ""

    def __init__(self, d: int, lam: float):
        self.design = DesignState.new(d, lam)
        self.d = self.design.dim
        self.lam = self.design.lam
        self.t = 0
        self.theta = np.zeros(self.d)
        self._issued: tuple[np.ndarray, float] | None = None

    def snapshot(self) -> RegressorSnapshot:
        return RegressorSnapshot(self.algo, self.theta.copy(), self.t, self.lam)

    def _prediction_for(self, x: np.ndarray) -> float:
        if self._issued is not None and np.array_equal(self._issued[0], x):
            return self._issued[1]
        return self.predict(x)

    def _finish(self, x, y, yhat, first, second, theta_star) -> tuple[RegressorSnapshot, StepDiagnostics]:
        loss = (yhat - y) ** 2
        regret = math.nan
        if theta_star is not None:
            regret = loss - (float(x @ np.asarray(theta_star, dtype=float)) - y) ** 2
        self._issued = None
        diag = StepDiagnostics(self.t, yhat, loss, first, second, regret)
        return self.snapshot(), diag

    def predict(self, x) -> float:
        raise NotImplementedError

    def observe(self, x, y: float, theta_star=None):
        raise NotImplementedError


class OnlineRidge(_OnlineRegressor):
    """Greedy ridge regression, ``theta_t = G_t(lam)^{-1} b_t``."""

    algo = "ridge"

    def __init__(self, d: int, lam: float):
        if lam <= 0:
            raise ValueError("online ridge needs lam > 0")
        super().__init__(d, lam)

    def predict(self, x) -> float:
        x = _as_vector(x, self.d)
        yhat = float(x @ self.theta)
        self._issued = (x.copy(), yhat)
        return yhat

    def observe(self, x, y: float, theta_star=None):
        x = _as_vector(x, self.d)
        y = float(y)
        yhat = self._prediction_for(x)
        self.design.update(x, y)
        self.t += 1
        self.theta = self.design.solve()
        first = (yhat - y) ** 2 * self.design.mahalanobis_sq(x)
        return self._finish(x, y, yhat, first, 0.0, theta_star)


class OnlineForward(_OnlineRegressor):
    """Forward (Vovk-Azoury-Warmuth) regression, ``theta_t = G_{t+1}^{-1} b_t``.

    ``theta`` holds ``G_t^{-1} b_t``, the estimate before the next feature is
    known; :meth:`theta_for` gives the forward estimate for a given next feature.
    """

    algo = "forward"

    def __init__(self, d: int, lam: float):
        if lam <= 0:
            raise ValueError("regularized forward needs lam > 0; use UnregularizedForward")
        super().__init__(d, lam)
        self._last: StepDiagnostics | None = None

    def theta_for(self, x_next) -> np.ndarray:
        return self.design.solve_extra(x_next)

    def predict(self, x) -> float:
        x = _as_vector(x, self.d)
        theta_f = self.theta_for(x)
        yhat = float(x @ theta_f)
        if self._last is not None:
            self._last.second_term = self.design.mahalanobis_sq(x) * yhat**2
            self._last = None
        self._issued = (x.copy(), yhat)
        return yhat

    def observe(self, x, y: float, theta_star=None):
        x = _as_vector(x, self.d)
        y = float(y)
        yhat = self._prediction_for(x)
        self.design.update(x, y)
        self.t += 1
        self.theta = self.design.solve()
        first = y**2 * self.design.mahalanobis_sq(x)
        snap, diag = self._finish(x, y, yhat, first, 0.0, theta_star)
        self._last = diag
        return snap, diag


class UnregularizedForward(_OnlineRegressor):
    """Forward regression with ``lam = 0``: ``theta_t = G_{t+1}(0)^+ b_t``.

    ``theta`` holds ``G_t(0)^+ b_t``.
    """

    algo = "unregularized_forward"

    def __init__(self, d: int, lam: float = 0.0):
        if lam != 0:
            raise ValueError("the unregularized forward algorithm uses lam = 0")
        super().__init__(d, 0.0)
        self._last: StepDiagnostics | None = None

    def theta_for(self, x_next) -> np.ndarray:
        return self.design.pinv_solve(_as_vector(x_next, self.d))

    def predict(self, x) -> float:
        x = _as_vector(x, self.d)
        yhat = float(x @ self.theta_for(x))
        if self._last is not None:
            self._last.second_term = max(float(x @ pinv(self.design) @ x), 0.0) * yhat**2
            self._last = None
        self._issued = (x.copy(), yhat)
        return yhat

    def observe(self, x, y: float, theta_star=None):
        x = _as_vector(x, self.d)
        y = float(y)
        yhat = self._prediction_for(x)
        self.design.update(x, y)
        self.t += 1
        g_pinv = pinv(self.design)
        self.theta = g_pinv @ self.design.b
        first = y**2 * max(float(x @ g_pinv @ x), 0.0)
        snap, diag = self._finish(x, y, yhat, first, 0.0, theta_star)
        self._last = diag
        return snap, diag


def make_regressor(algo: str, d: int, lam: float) -> _OnlineRegressor:
    if algo == "ridge":
        return OnlineRidge(d, lam)
    if algo == "forward":
        return OnlineForward(d, lam)
    if algo == "unregularized_forward":
        return UnregularizedForward(d, lam)
    raise ValueError(f"unknown regression algorithm {algo!r}; expected one of {ALGOS}")


class OLSResult(NamedTuple):
    theta: np.ndarray
    loss: float
    rank_deficient: bool


def batch_ols(features, labels) -> OLSResult:
    """Unregularized least squares over the whole sample.

    Rank-deficient designs get the minimum-norm minimizer and are flagged.
    """
    X = np.atleast_2d(np.asarray(features, dtype=float))
    y = np.asarray(labels, dtype=float).ravel()
    if y.size == 0 or X.size == 0:
        raise ValueError("batch_ols needs at least one sample")
    if X.shape[0] != y.size:
        raise ValueError(f"{X.shape[0]} features but {y.size} labels")
    theta, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ theta
    return OLSResult(theta, float(resid @ resid), bool(rank < X.shape[1]))
