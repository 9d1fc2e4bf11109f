"""Regularized design (Gram) matrix with rank-one updates.

The state tracks ``G = lam * I + sum_s x_s x_s^T``, the response sum
``b = sum_s y_s x_s`` and, when ``G`` is invertible, its inverse and
log-determinant.  For ``lam > 0`` the inverse is maintained by
Sherman-Morrison updates and re-factorized every ``REFACTOR_EVERY`` steps,
or immediately when ``x^T G^{-1} x`` exceeds ``REFACTOR_ABOVE_M`` (a new,
barely explored direction, where the downdate would cancel badly).
For ``lam == 0`` nothing is maintained incrementally; rank, inverse and
pseudo-inverse are recomputed spectrally.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

__all__ = [
    "DesignState",
    "SingularDesignError",
    "new_design",
    "rank_one_update",
    "mahalanobis_sq",
    "solve_theta",
    "pinv_solve",
    "pinv",
    "REFACTOR_EVERY",
    "REFACTOR_ABOVE_M",
    "RANK_TOL",
]

REFACTOR_EVERY = 512
REFACTOR_ABOVE_M = 1e2
RANK_TOL = 1e-10


class SingularDesignError(np.linalg.LinAlgError):
    """Raised when an inverse is requested from a rank-deficient design."""


def _as_vector(x, d: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x.reshape(1)
    if x.shape != (d,):
        raise ValueError(f"expected a vector of dimension {d}, got shape {x.shape}")
    return x


def _spectral_rank(eigvals: np.ndarray, tol: float = RANK_TOL) -> int:
    top = eigvals.max(initial=0.0)
    if top <= 0.0:
        return 0
    return int(np.count_nonzero(eigvals > tol * top))


@dataclass
class DesignState:
    dim: int
    lam: float
    gram: np.ndarray
    b: np.ndarray
    gram_inv: np.ndarray | None = None
    log_det: float | None = None
    count: int = 0
    rank: int = 0
    _since_refactor: int = field(default=0, repr=False)
    _chol: tuple | None = field(default=None, repr=False)

    @classmethod
    def new(cls, d: int, lam: float) -> "DesignState":
        if int(d) != d or d < 1:
            raise ValueError(f"dimension must be a positive integer, got {d!r}")
        if not lam >= 0:
            raise ValueError(f"regularization must be nonnegative, got {lam!r}")
        d = int(d)
        lam = float(lam)
        state = cls(dim=d, lam=lam, gram=lam * np.eye(d), b=np.zeros(d))
        if lam > 0:
            state.gram_inv = np.eye(d) / lam
            state.log_det = d * np.log(lam)
            state.rank = d
        return state

    @property
    def invertible(self) -> bool:
        return self.gram_inv is not None

    def copy(self) -> "DesignState":
        return DesignState(
            dim=self.dim,
            lam=self.lam,
            gram=self.gram.copy(),
            b=self.b.copy(),
            gram_inv=None if self.gram_inv is None else self.gram_inv.copy(),
            log_det=self.log_det,
            count=self.count,
            rank=self.rank,
            _since_refactor=self._since_refactor,
            _chol=None if self._chol is None else (self._chol[0].copy(), self._chol[1]),
        )

    def update(self, x, y: float) -> "DesignState":
        """Add ``x x^T`` to the Gram matrix and ``y x`` to ``b`` in place."""
        x = _as_vector(x, self.dim)
        y = float(y)
        self.gram += np.outer(x, x)
        self.b += y * x
        self.count += 1
        if self.lam > 0:
            self._since_refactor += 1
            gx = self.gram_inv @ x
            m = float(x @ gx)
            # the rank-one downdate loses about log10(1 + m) digits, so large m refactors
            if self._since_refactor >= REFACTOR_EVERY or m > REFACTOR_ABOVE_M:
                self._refactor()
            else:
                self.gram_inv -= np.outer(gx, gx) / (1.0 + m)
                self.log_det += np.log1p(m)
                self._chol = None
        else:
            self._refresh_spectral()
        return self

    def _refactor(self) -> None:
        self.gram = 0.5 * (self.gram + self.gram.T)
        c, low = scipy.linalg.cho_factor(self.gram, lower=True)
        self.gram_inv = scipy.linalg.cho_solve((c, low), np.eye(self.dim))
        self.log_det = float(2.0 * np.sum(np.log(np.diag(c))))
        self._since_refactor = 0
        self._chol = (c, low)

    def _refresh_spectral(self) -> None:
        w, v = np.linalg.eigh(self.gram)
        self.rank = _spectral_rank(w)
        if self.rank == self.dim:
            self.gram_inv = (v / w) @ v.T
            self.log_det = float(np.sum(np.log(w)))
        else:
            self.gram_inv = None
            self.log_det = None

    def mahalanobis_sq(self, x) -> float:
        x = _as_vector(x, self.dim)
        if self.gram_inv is None:
            raise SingularDesignError("singular design: rank %d < %d" % (self.rank, self.dim))
        return max(float(x @ self.gram_inv @ x), 0.0)

    def solve(self) -> np.ndarray:
        if self.gram_inv is None:
            raise SingularDesignError("singular design: rank %d < %d" % (self.rank, self.dim))
        if self._chol is not None:
            # a fresh factor avoids multiplying b through an inverse with 1/lam-sized entries
            return scipy.linalg.cho_solve(self._chol, self.b)
        return self.gram_inv @ self.b

    def solve_extra(self, x) -> np.ndarray:
        """``(G + x x^T)^{-1} b`` without touching the state."""
        x = _as_vector(x, self.dim)
        if self.gram_inv is None:
            raise SingularDesignError("singular design: rank %d < %d" % (self.rank, self.dim))
        gx = self.gram_inv @ x
        m = float(x @ gx)
        if m > REFACTOR_ABOVE_M:
            c = scipy.linalg.cho_factor(self.gram + np.outer(x, x), lower=True)
            return scipy.linalg.cho_solve(c, self.b)
        theta = self.solve()
        return theta - gx * (float(x @ theta) / (1.0 + m))

    def pinv(self, extra=None) -> np.ndarray:
        return pinv(self, extra)

    def pinv_solve(self, extra=None) -> np.ndarray:
        return pinv_solve(self, extra)


def new_design(d: int, lam: float) -> DesignState:
    return DesignState.new(d, lam)


def rank_one_update(state: DesignState, x, y: float) -> DesignState:
    return state.update(x, y)


def mahalanobis_sq(state: DesignState, x) -> float:
    """``x^T G^{-1} x``; raises :class:`SingularDesignError` when ``G`` is singular."""
    return state.mahalanobis_sq(x)


def solve_theta(state: DesignState) -> np.ndarray:
    return state.solve()


def pinv(state: DesignState, extra=None, tol: float = RANK_TOL) -> np.ndarray:
    """Moore-Penrose pseudo-inverse of ``G`` (or of ``G + extra extra^T``).

    Eigenvalues below ``tol * lambda_max`` are treated as zero.
    """
    gram = state.gram
    if extra is not None:
        extra = _as_vector(extra, state.dim)
        gram = gram + np.outer(extra, extra)
    w, v = np.linalg.eigh(gram)
    top = w.max(initial=0.0)
    if top <= 0.0:
        return np.zeros_like(gram)
    keep = w > tol * top
    vk = v[:, keep]
    return (vk / w[keep]) @ vk.T


def pinv_solve(state: DesignState, extra=None) -> np.ndarray:
    """``G^+ b``; with ``extra`` the feature is folded into ``G`` only (not ``b``)."""
    return pinv(state, extra) @ state.b
