"""Confidence widths and regret bounds for online regression and linear bandits.

Every evaluator is a pure function of a :class:`BoundParams` bundle and a
time index.  Leading (first-order) terms and the explicit finite-time
expressions are separate functions; the explicit ones need the
data-dependent sum ``A = sum_t ((theta_{t-1} - theta_*)^T x_t)^2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

__all__ = [
    "BoundParams",
    "beta_ridge",
    "beta_forward",
    "regret_bound_ridge",
    "regret_bound_forward",
    "explicit_bound_ridge",
    "explicit_bound_forward",
    "adversarial_bound",
    "tail_bound",
    "feature_budget",
    "oful_regret_bound",
    "dlinucb_beta",
    "dlinucb_regret_bound",
    "ridge_front_factor",
]


@dataclass(frozen=True)
class BoundParams:
    sigma: float
    S: float
    X: float
    lam: float
    delta: float
    d: int

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta!r}")
        if self.sigma < 0 or self.S < 0:
            raise ValueError("sigma and S must be nonnegative")
        if not self.X > 0:
            raise ValueError(f"X must be positive, got {self.X!r}")
        if not self.lam > 0:
            raise ValueError(f"lam must be positive, got {self.lam!r}")
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"d must be a positive integer, got {self.d!r}")

    def with_(self, **changes) -> "BoundParams":
        return replace(self, **changes)


def _growth(p: BoundParams, t: float) -> float:
    """``log(1 + t X^2 / (lam d))``."""
    if t < 0:
        raise ValueError(f"time index must be nonnegative, got {t!r}")
    return math.log1p(t * p.X**2 / (p.lam * p.d))


def ridge_front_factor(X: float, lam: float) -> float:
    """``(X^2/lam) / log(1 + X^2/lam)``; always >= 1."""
    z = X**2 / lam
    return z / math.log1p(z)


def _noise_radius(p: BoundParams, t: float, delta: float) -> float:
    # sigma * sqrt(d * log((1 + t X^2/(lam d)) / delta))
    return p.sigma * math.sqrt(p.d * (_growth(p, t) + math.log(1.0 / delta)))


def beta_ridge(p: BoundParams, t: float) -> float:
    """Radius of the ridge confidence ellipsoid, ``||theta_t - theta_*||_{G_t} <= radius``."""
    return _noise_radius(p, t, p.delta) + math.sqrt(p.lam) * p.S


def beta_forward(p: BoundParams, t: float) -> float:
    """Radius of the forward confidence ellipsoid, measured in ``G_{t+1}``."""
    return _noise_radius(p, t, p.delta) + (math.sqrt(p.lam) + p.X) * p.S


def regret_bound_forward(p: BoundParams, T: float) -> float:
    """First-order high-probability bound on the oracle regret of the forward algorithm."""
    g = _growth(p, T)
    return 2.0 * p.d * p.sigma**2 * g * (0.5 * p.d * g + math.log(2.0 / p.delta))


def regret_bound_ridge(p: BoundParams, T: float) -> float:
    """First-order bound for online ridge: the forward bound times ``ridge_front_factor``."""
    return ridge_front_factor(p.X, p.lam) * regret_bound_forward(p, T)


def tail_bound(A: float, sigma: float, sigma_prime: float, delta: float) -> float:
    """Mixture-martingale envelope for ``S_t = sum_s eps_s (theta_{s-1} - theta_*)^T x_s``.

    ``sigma * sqrt(2 (1/sigma'^2 + A) log(sqrt(1 + sigma'^2 A) / delta))``.
    ``delta = 1`` is accepted as the limiting case.
    """
    if A < 0:
        raise ValueError("A must be nonnegative")
    if not sigma_prime > 0:
        raise ValueError("sigma_prime must be positive")
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"delta must lie in (0, 1], got {delta!r}")
    log_term = 0.5 * math.log1p(sigma_prime**2 * A) - math.log(delta)
    return sigma * math.sqrt(2.0 * (1.0 / sigma_prime**2 + A) * max(log_term, 0.0))


def explicit_bound_ridge(p: BoundParams, T: float, A: float, sigma_prime: float = 1.0) -> float:
    """Finite-time ridge bound: squared width (at ``delta/2``) times the ridge feature budget, plus the tail term."""
    width = _noise_radius(p, T, p.delta / 2.0) + math.sqrt(p.lam) * p.S
    main = width**2 * ridge_front_factor(p.X, p.lam) * p.d * _growth(p, T)
    return main + tail_bound(A, p.sigma, sigma_prime, p.delta / 2.0)


def explicit_bound_forward(p: BoundParams, T: float, A: float, sigma_prime: float = 1.0) -> float:
    """Finite-time forward bound with explicit constants.

    Keeps the ``(X^2/lam)/log(1+X^2/lam)`` factor on the first term and the
    undivided ``delta`` in the tail term exactly as that aggregate is written;
    compare with :func:`regret_bound_forward`, which has neither.
    """
    width = _noise_radius(p, T, p.delta / 2.0) + (math.sqrt(p.lam) + p.X) * p.S
    main = width**2 * ridge_front_factor(p.X, p.lam) * p.d * _growth(p, T)
    return main + tail_bound(A, p.sigma, sigma_prime, p.delta)


def adversarial_bound(algo: str, Y: float, p: BoundParams, T: float, lambda_rank_min: float | None = None) -> float:
    """Bounded-observation bounds: ``c Y^2 d log(1 + T X^2/(lam d))`` with ``c = 4`` (ridge) or 1 (forward).

    With ``lambda_rank_min`` (smallest positive eigenvalue of the unregularized
    design) the sequential-regret correction ``lam Y^2 T / lambda_rank_min`` is added.
    """
    c = {"ridge": 4.0, "forward": 1.0}.get(algo)
    if c is None:
        raise ValueError(f"algo must be 'ridge' or 'forward', got {algo!r}")
    out = c * Y**2 * p.d * _growth(p, T)
    if lambda_rank_min is not None:
        if not lambda_rank_min > 0:
            raise ValueError("lambda_rank_min must be positive")
        out += p.lam * Y**2 * T / lambda_rank_min
    return out


def feature_budget(lemma: str, p: BoundParams, T: float, lambda_min_G_T0: float | None = None) -> float:
    """Elliptical-potential caps on summed squared feature norms.

    ``forward``: ``sum_t ||x_t||^2_{G_t^{-1}} <= d log(1 + T X^2 / (lambda_min d))``
    (``lambda_min`` defaults to ``lam``).
    ``ridge``: ``sum_t ||x_t||^2_{G_{t-1}^{-1}} <= ridge_front_factor * d log(1 + T X^2 / (lam d))``.
    """
    if lemma == "forward":
        lmin = p.lam if lambda_min_G_T0 is None else lambda_min_G_T0
        if not lmin > 0:
            raise ValueError("lambda_min_G_T0 must be positive")
        return p.d * math.log1p(T * p.X**2 / (lmin * p.d))
    if lemma == "ridge":
        return ridge_front_factor(p.X, p.lam) * p.d * _growth(p, T)
    raise ValueError(f"lemma must be 'forward' or 'ridge', got {lemma!r}")


def oful_regret_bound(variant: str, p: BoundParams, T: float) -> float:
    """Pseudo-regret bounds for OFUL (``ridge``) and OFUL^f (``forward``) without bounded rewards.

    ``log(lam + T X^2/d)`` is clipped at 0 so the square root stays real for tiny ``lam`` and ``T``.
    """
    if T < 0:
        raise ValueError("T must be nonnegative")
    if variant not in ("ridge", "forward"):
        raise ValueError(f"variant must be 'ridge' or 'forward', got {variant!r}")
    confidence = p.sigma * math.sqrt(2.0 * math.log(1.0 / p.delta) + p.d * _growth(p, T))
    potential = T * p.d * max(math.log(p.lam + T * p.X**2 / p.d), 0.0)
    if variant == "ridge":
        return 4.0 * math.sqrt(ridge_front_factor(p.X, p.lam) * potential) * (math.sqrt(p.lam) * p.S + confidence)
    return 4.0 * math.sqrt(potential) * ((math.sqrt(p.lam) + p.X) * p.S + confidence)


def dlinucb_beta(p: BoundParams, n: int, gamma: float) -> float:
    """Discounted confidence radius after ``n`` observations.

    ``sqrt(lam) S + sigma sqrt(2 log(1/delta) + d log(1 + X^2 (1 - gamma^{2n}) / (lam d (1 - gamma^2))))``;
    at ``gamma == 1`` the geometric ratio is its limit ``n``.
    """
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"gamma must lie in (0, 1], got {gamma!r}")
    if gamma == 1.0:
        ratio = float(n)
    else:
        ratio = -math.expm1(2 * n * math.log(gamma)) / (1.0 - gamma**2)
    inner = 2.0 * math.log(1.0 / p.delta) + p.d * math.log1p(p.X**2 * ratio / (p.lam * p.d))
    return math.sqrt(p.lam) * p.S + p.sigma * math.sqrt(inner)


def dlinucb_regret_bound(variant: str, p: BoundParams, T: float, gamma: float, D: int, B_T: float) -> float:
    """Non-stationary regret bounds for D-LinUCB (``ridge``) and D-LinUCB^f (``forward``).

    ``2 X D B_T + (4 X^3 S / lam) gamma^D / (1 - gamma) T + c beta_T sqrt(d T) sqrt(T log(1/gamma) + log(1 + k X^2 / (d lam (1 - gamma))))``
    with ``c = 2 sqrt(2), k = 1`` for ridge and ``c = 2, k = 2 - gamma`` for forward.
    ``gamma == 1`` is accepted as a limit (the bias term is then infinite unless ``T == 0``).
    """
    if variant not in ("ridge", "forward"):
        raise ValueError(f"variant must be 'ridge' or 'forward', got {variant!r}")
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"gamma must lie in (0, 1], got {gamma!r}")
    if D < 1:
        raise ValueError("D must be a positive integer")
    if B_T < 0 or T < 0:
        raise ValueError("B_T and T must be nonnegative")
    if T == 0:
        return 2.0 * p.X * D * B_T
    beta_T = dlinucb_beta(p, int(T), gamma)
    if gamma == 1.0:
        return math.inf
    if variant == "ridge":
        c, k = 2.0 * math.sqrt(2.0), 1.0
    else:
        c, k = 2.0, 2.0 - gamma
    drift = 2.0 * p.X * D * B_T
    bias = 4.0 * p.X**3 * p.S / p.lam * gamma**D / (1.0 - gamma) * T
    potential = T * math.log(1.0 / gamma) + math.log1p(k * p.X**2 / (p.d * p.lam * (1.0 - gamma)))
    return drift + bias + c * beta_T * math.sqrt(p.d * T) * math.sqrt(potential)
