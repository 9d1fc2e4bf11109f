"""Config-driven experiment runner.

A run is a list of ``(algo, replicate)`` tasks.  Each task rebuilds its
environment from ``derive_replicate_seed(master_seed, replicate)``, so all
algorithms of a replicate see the same data and the output does not depend
on scheduling.  Results come back as :class:`RegretTrace` objects, are
summarized by :func:`aggregate` and written by :func:`emit_csv`.
"""
from __future__ import annotations

import copy
import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from . import bounds as B
from .bandits import AGENTS, make_agent, pseudo_regret_step
from .environments import (
    BanditEnvSpec,
    BanditStream,
    RegressionEnvSpec,
    RegressionStream,
    derive_replicate_seed,
)
from .regressors import ALGOS, OnlineForward, OnlineRidge, batch_ols, make_regressor

__all__ = [
    "ConfigError",
    "AlgoSpec",
    "ExperimentConfig",
    "RegretTrace",
    "SummaryBlock",
    "ExperimentResult",
    "load_config",
    "load_preset",
    "PRESETS",
    "run_experiment",
    "run_replicate",
    "aggregate",
    "emit_csv",
    "read_csv",
    "bounds_table",
    "emit_bounds_csv",
    "write_outputs",
    "audit_regression",
    "CSV_COLUMNS",
]

CSV_COLUMNS = (
    "kind", "algo", "lambda", "gamma", "replicate", "t",
    "instant_regret", "cum_regret", "first_term", "second_term",
    "pseudo_regret", "bound_overlay",
)
TRACE_FIELDS = CSV_COLUMNS[6:]
SUMMARY_STATS = ("mean", "std", "q25", "median", "q75")
KINDS = ("regression", "bandit", "nonstationary", "bounds_table")
PRESETS = ("fig1", "fig2", "fig3", "abrupt", "slow")


class ConfigError(ValueError):
    pass


def _resolve_lambda(value, T: int) -> float:
    """Numbers pass through; the strings ``1/T`` and ``1/log(T)`` scale with the horizon."""
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).replace(" ", "")
    if text == "1/T":
        return 1.0 / T
    if text in ("1/log(T)", "1/logT"):
        return 1.0 / math.log(T)
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"cannot read lambda {value!r}") from None


@dataclass
class AlgoSpec:
    name: str
    lam: float
    gamma: float | None = None
    D: int | None = None


@dataclass
class ExperimentConfig:
    kind: str
    env: dict
    algos: list[AlgoSpec]
    replicates: int = 1
    master_seed: int = 0
    delta: float = 0.05
    S: float = 1.0
    record_diagnostics: bool = True
    checkpoints: int = 20
    outputs: dict = field(default_factory=dict)
    t_grid: list | None = None
    B_T: float | None = None

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config must be a mapping")
        raw = copy.deepcopy(raw)
        kind = raw.get("kind")
        if kind not in KINDS:
            raise ConfigError(f"kind must be one of {KINDS}, got {kind!r}")
        env = raw.get("env") or {}
        if not isinstance(env, dict) or "T" not in env or "d" not in env:
            raise ConfigError("env needs at least d and T")
        T = int(env["T"])
        algos = []
        for entry in raw.get("algos") or []:
            if not isinstance(entry, dict) or "name" not in entry:
                raise ConfigError(f"bad algo entry {entry!r}")
            name = entry["name"]
            known = ALGOS if kind == "regression" else AGENTS
            if kind != "bounds_table" and name not in known:
                raise ConfigError(f"algo {name!r} not valid for kind {kind!r}")
            lam = _resolve_lambda(entry.get("lambda", 0.0 if name == "unregularized_forward" else 1.0), T)
            if name == "unregularized_forward":
                if lam != 0:
                    raise ConfigError("unregularized_forward takes lambda = 0")
            elif not lam > 0:
                raise ConfigError(f"algo {name!r} needs lambda > 0, got {lam}")
            gamma = entry.get("gamma")
            algos.append(AlgoSpec(name, lam, None if gamma is None else gamma, entry.get("D")))
        if kind != "bounds_table" and not algos:
            raise ConfigError("at least one algo is required")
        replicates = int(raw.get("replicates", 1))
        if replicates < 1:
            raise ConfigError("replicates must be >= 1")
        delta = float(raw.get("delta", 0.05))
        if not 0 < delta < 1:
            raise ConfigError("delta must lie in (0, 1)")
        cfg = cls(
            kind=kind,
            env=env,
            algos=algos,
            replicates=replicates,
            master_seed=int(raw.get("master_seed", 0)),
            delta=delta,
            S=float(raw.get("S", 1.0)),
            record_diagnostics=bool(raw.get("record_diagnostics", True)),
            checkpoints=int(raw.get("checkpoints", 20)),
            outputs=dict(raw.get("outputs") or {}),
            t_grid=raw.get("t_grid"),
            B_T=raw.get("B_T"),
        )
        try:
            cfg.env_spec(0)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid env: {exc}") from exc
        if kind == "nonstationary":
            for a in cfg.algos:
                a.gamma = cfg.resolve_gamma(a.gamma)
                a.D = cfg.resolve_D(a)
        return cfg

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "master_seed": self.master_seed,
            "replicates": self.replicates,
            "delta": self.delta,
            "S": self.S,
            "record_diagnostics": self.record_diagnostics,
            "checkpoints": self.checkpoints,
            "env": dict(self.env),
            "algos": [
                {k: v for k, v in (("name", a.name), ("lambda", a.lam), ("gamma", a.gamma), ("D", a.D)) if v is not None}
                for a in self.algos
            ],
            "outputs": dict(self.outputs),
            **({"t_grid": list(self.t_grid)} if self.t_grid is not None else {}),
            **({"B_T": self.B_T} if self.B_T is not None else {}),
        }

    @property
    def T(self) -> int:
        return int(self.env["T"])

    @property
    def d(self) -> int:
        return int(self.env["d"])

    def env_spec(self, seed: int):
        env = {k: v for k, v in self.env.items()}
        env["seed"] = seed
        bandit_keys = {"K", "arms", "theta_path", "max_norm"}
        if self.kind == "regression" or (self.kind == "bounds_table" and not bandit_keys & env.keys()):
            return RegressionEnvSpec(**env)
        env.setdefault("theta_path", "constant" if self.kind != "nonstationary" else "abrupt")
        return BanditEnvSpec(**env)

    def variation_budget(self) -> float:
        """Total variation of the parameter path over rounds ``0..T``."""
        if self.B_T is not None:
            return float(self.B_T)
        if self.kind != "nonstationary":
            return 0.0
        stream = BanditStream(self.env_spec(0))
        thetas = np.array([stream.theta_at(t) for t in range(self.T + 1)])
        return float(np.linalg.norm(np.diff(thetas, axis=0), axis=1).sum())

    def resolve_gamma(self, gamma) -> float:
        """``"auto"`` picks ``1 - (B_T / (d T))^{2/3}``."""
        if gamma is None or gamma == "auto":
            return 1.0 - (self.variation_budget() / (self.d * self.T)) ** (2.0 / 3.0)
        gamma = float(gamma)
        if not 0 < gamma <= 1:
            raise ConfigError(f"gamma must lie in (0, 1], got {gamma}")
        return gamma

    def resolve_D(self, algo: AlgoSpec) -> int:
        if algo.D is not None:
            return int(algo.D)
        if algo.gamma >= 1.0:
            return self.T
        return max(1, int(math.ceil(math.log(1.0 / (1.0 - algo.gamma)) / (1.0 - algo.gamma))))

    def bound_params(self, lam: float) -> B.BoundParams:
        spec = self.env_spec(0)
        return B.BoundParams(
            sigma=float(spec.sigma), S=self.S, X=float(spec.max_norm),
            lam=lam, delta=self.delta, d=self.d,
        )


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from exc
    return ExperimentConfig.from_dict(raw)


def load_preset(name: str) -> ExperimentConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {PRESETS}")
    text = resources.files("forwardreg.presets").joinpath(f"{name}.yaml").read_text(encoding="utf-8")
    return ExperimentConfig.from_dict(yaml.safe_load(text))


@dataclass
class RegretTrace:
    """One ``(algo, replicate)`` run; every per-step array has length ``T``.

    Regression runs fill ``first_term``/``second_term`` and leave
    ``pseudo_regret`` NaN.  Bandit runs store the instantaneous and
    cumulative pseudo-regret in ``instant_regret``/``cum_regret`` and repeat
    the cumulative value in ``pseudo_regret``.  ``batch_regret`` holds the
    regret against the best fixed parameter at the checkpoint steps and
    NaN elsewhere.
    """

    kind: str
    algo: str
    lam: float
    gamma: float | None
    replicate: int
    t: np.ndarray
    instant_regret: np.ndarray
    cum_regret: np.ndarray
    first_term: np.ndarray
    second_term: np.ndarray
    pseudo_regret: np.ndarray
    bound_overlay: np.ndarray
    batch_regret: np.ndarray | None = None
    extras: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return getattr(self, name)


def _checkpoints(T: int, n: int) -> np.ndarray:
    if n <= 0:
        return np.array([], dtype=int)
    pts = np.unique(np.round(np.logspace(0, math.log10(T), n)).astype(int))
    return np.union1d(pts[(pts >= 1) & (pts <= T)], [T])


def _run_regression(cfg: ExperimentConfig, algo: AlgoSpec, replicate: int) -> RegretTrace:
    spec = cfg.env_spec(derive_replicate_seed(cfg.master_seed, replicate))
    stream = RegressionStream(spec)
    T, theta_star = spec.T, stream.theta_star
    reg = make_regressor(algo.name, spec.d, algo.lam)
    diags = []
    for t in range(1, T + 1):
        x, y = stream.step(t)
        reg.predict(x)
        _, diag = reg.observe(x, y, theta_star)
        diags.append(diag)
    instant = np.array([g.instant_oracle_regret for g in diags])
    losses = np.array([g.loss for g in diags])
    preds = np.array([g.prediction for g in diags])
    nan = np.full(T, np.nan)
    if cfg.record_diagnostics:
        first = np.array([g.first_term for g in diags])
        second = np.array([g.second_term for g in diags]) if algo.name != "ridge" else np.zeros(T)
    else:
        first, second = nan.copy(), nan.copy()
    ts = np.arange(1, T + 1)
    if algo.name == "unregularized_forward":
        overlay = nan.copy()
    else:
        p = cfg.bound_params(algo.lam)
        fn = B.regret_bound_ridge if algo.name == "ridge" else B.regret_bound_forward
        overlay = np.array([fn(p, t) for t in ts])
    batch = nan.copy()
    cum_loss = np.cumsum(losses)
    for c in _checkpoints(T, cfg.checkpoints):
        batch[c - 1] = cum_loss[c - 1] - batch_ols(stream.features[:c], stream.labels[:c]).loss
    gram0 = stream.features.T @ stream.features
    eig = np.linalg.eigvalsh(gram0)
    positive = eig[eig > 1e-10 * eig.max()]
    extras = {
        "theta_star": theta_star.tolist(),
        "max_abs_label": float(np.abs(stream.labels).max()),
        "max_abs_prediction": float(np.abs(preds).max()),
        "lambda_rank_min": float(positive.min()),
        "A_T": float(np.sum((preds - stream.features @ theta_star) ** 2)),
        "oracle_gap": float(np.sum(stream.noise**2) - batch_ols(stream.features, stream.labels).loss),
    }
    return RegretTrace(
        kind=cfg.kind, algo=algo.name, lam=algo.lam, gamma=None, replicate=replicate, t=ts,
        instant_regret=instant, cum_regret=np.cumsum(instant), first_term=first,
        second_term=second, pseudo_regret=nan.copy(), bound_overlay=overlay,
        batch_regret=batch, extras=extras,
    )


def _run_bandit(cfg: ExperimentConfig, algo: AlgoSpec, replicate: int) -> RegretTrace:
    spec = cfg.env_spec(derive_replicate_seed(cfg.master_seed, replicate))
    stream = BanditStream(spec)
    T = spec.T
    p = cfg.bound_params(algo.lam)
    gamma = algo.gamma if algo.gamma is not None else 1.0
    agent = make_agent(algo.name, spec.d, p, gamma)
    instant = np.empty(T)
    for t in range(1, T + 1):
        actions, theta_t = stream.round(t)
        i, x = agent.select(actions)
        agent.update(x, stream.reward(t, x))
        instant[t - 1] = pseudo_regret_step(theta_t, actions, i)
    ts = np.arange(1, T + 1)
    if cfg.kind == "nonstationary":
        variant = "ridge" if algo.name == "dlinucb" else "forward"
        thetas = np.array([stream.theta_at(t) for t in range(T + 1)])
        budget = np.cumsum(np.linalg.norm(np.diff(thetas, axis=0), axis=1))
        overlay = np.array([
            B.dlinucb_regret_bound(variant, p, t, gamma, algo.D or 1, budget[t - 1]) for t in ts
        ])
    else:
        variant = "ridge" if algo.name in ("oful", "dlinucb") else "forward"
        overlay = np.array([B.oful_regret_bound(variant, p, t) for t in ts])
    cum = np.cumsum(instant)
    nan = np.full(T, np.nan)
    return RegretTrace(
        kind=cfg.kind, algo=algo.name, lam=algo.lam,
        gamma=algo.gamma if cfg.kind == "nonstationary" else None,
        replicate=replicate, t=ts, instant_regret=instant, cum_regret=cum,
        first_term=nan, second_term=nan.copy(), pseudo_regret=cum.copy(), bound_overlay=overlay,
    )


def run_replicate(cfg: ExperimentConfig, algo_index: int, replicate: int) -> RegretTrace:
    algo = cfg.algos[algo_index]
    if cfg.kind == "regression":
        return _run_regression(cfg, algo, replicate)
    if cfg.kind in ("bandit", "nonstationary"):
        return _run_bandit(cfg, algo, replicate)
    raise ConfigError(f"kind {cfg.kind!r} has no replicates to run")


def _task(args):
    raw, algo_index, replicate = args
    return run_replicate(ExperimentConfig.from_dict(raw), algo_index, replicate)


@dataclass
class SummaryBlock:
    kind: str
    algo: str
    lam: float
    gamma: float | None
    n: int
    t: np.ndarray
    stats: dict  # column -> {stat name -> array}


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    traces: list[RegretTrace]
    summary: list[SummaryBlock]

    def traces_for(self, algo: str, lam: float | None = None) -> list[RegretTrace]:
        return [tr for tr in self.traces if tr.algo == algo and (lam is None or tr.lam == lam)]

    def final(self, algo: str, column: str = "cum_regret", lam: float | None = None) -> np.ndarray:
        return np.array([tr.column(column)[-1] for tr in self.traces_for(algo, lam)])


def run_experiment(config: ExperimentConfig, n_jobs: int = 1) -> ExperimentResult:
    """Run every ``(algo, replicate)`` pair and aggregate.

    ``n_jobs > 1`` uses worker processes; results are ordered by
    ``(algo, replicate)`` either way, so the output is identical.
    """
    if config.kind == "bounds_table":
        raise ConfigError("bounds_table configs are evaluated by bounds_table()")
    tasks = [(i, r) for i in range(len(config.algos)) for r in range(config.replicates)]
    if n_jobs is None or n_jobs <= 1:
        traces = [run_replicate(config, i, r) for i, r in tasks]
    else:
        raw = config.to_dict()
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            traces = list(pool.map(_task, [(raw, i, r) for i, r in tasks], chunksize=max(1, len(tasks) // (4 * n_jobs))))
    return ExperimentResult(config, traces, aggregate(traces))


def aggregate(traces) -> list[SummaryBlock]:
    """Per-step mean, std, quartiles and median across replicates of each (algo, lambda, gamma).

    Columns that are NaN for a group (not applicable to that algorithm) are left out.
    """
    traces = list(traces)
    if not traces:
        raise ValueError("aggregate needs at least one trace")
    groups: dict[tuple, list[RegretTrace]] = {}
    for tr in traces:
        groups.setdefault((tr.kind, tr.algo, tr.lam, tr.gamma), []).append(tr)
    blocks = []
    for (kind, algo, lam, gamma), members in groups.items():
        lengths = {len(m.t) for m in members}
        if len(lengths) != 1:
            raise ValueError(f"traces of {algo} have different lengths {sorted(lengths)}")
        stats = {}
        for col in TRACE_FIELDS:
            M = np.vstack([m.column(col) for m in members])
            if np.isnan(M).any():
                continue
            q25, med, q75 = np.percentile(M, [25, 50, 75], axis=0)
            stats[col] = {"mean": M.mean(axis=0), "std": M.std(axis=0), "q25": q25, "median": med, "q75": q75}
        blocks.append(SummaryBlock(kind, algo, lam, gamma, len(members), members[0].t.copy(), stats))
    return blocks


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return ""
    return repr(v)


def emit_csv(rows_source, path) -> Path:
    """Write traces (one row per step) or summary blocks (one row per step and statistic).

    Summary rows carry the statistic name in the ``replicate`` column.
    """
    path = Path(path)
    items = list(rows_source)
    try:
        fh = open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    with fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for item in items:
            head = (item.kind, item.algo, _fmt(item.lam), _fmt(item.gamma))
            if isinstance(item, RegretTrace):
                cols = [item.column(c) for c in TRACE_FIELDS]
                for k, t in enumerate(item.t):
                    writer.writerow((*head, item.replicate, int(t), *(_fmt(c[k]) for c in cols)))
            elif isinstance(item, SummaryBlock):
                for stat in SUMMARY_STATS:
                    cols = [item.stats[c][stat] if c in item.stats else None for c in TRACE_FIELDS]
                    for k, t in enumerate(item.t):
                        writer.writerow((*head, stat, int(t), *("" if c is None else _fmt(c[k]) for c in cols)))
            else:
                raise TypeError(f"cannot write {type(item).__name__} rows")
    return path


def read_csv(path) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def emit_batch_regret_csv(traces, path) -> Path:
    """Checkpoint rows: regret against the best fixed parameter next to the oracle regret."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("algo", "lambda", "replicate", "t", "batch_regret", "oracle_regret"))
        for tr in traces:
            if tr.batch_regret is None:
                continue
            for k in np.flatnonzero(~np.isnan(tr.batch_regret)):
                writer.writerow((tr.algo, _fmt(tr.lam), tr.replicate, int(tr.t[k]),
                                 _fmt(tr.batch_regret[k]), _fmt(tr.cum_regret[k])))
    return path


BOUND_COLUMNS = (
    "T", "regret_bound_ridge", "regret_bound_forward",
    "feature_budget_ridge", "feature_budget_forward", "oful_ridge", "oful_forward",
    "dlinucb_ridge", "dlinucb_forward",
)


def bounds_table(config: ExperimentConfig) -> list[dict]:
    """Every regret and feature-norm bound on a grid of horizons, one dict per grid point.

    The grid comes from ``t_grid`` or defaults to 0 plus 30 log-spaced points up to ``T``.
    ``lam`` is the first algorithm's regularization (1 without algorithms);
    discount and window use that algorithm's ``gamma``/``D`` or the automatic choices.
    """
    lam = config.algos[0].lam if config.algos else 1.0
    if not lam > 0:
        lam = 1.0 / config.T
    p = config.bound_params(lam)
    if config.t_grid is not None:
        grid = [int(t) for t in config.t_grid]
    else:
        grid = [0, *np.unique(np.round(np.logspace(0, math.log10(config.T), 30)).astype(int)).tolist()]
    algo = config.algos[0] if config.algos else AlgoSpec("bounds", lam)
    gamma = algo.gamma if isinstance(algo.gamma, float) else config.resolve_gamma(algo.gamma)
    gamma = min(gamma, 1.0 - 1e-12)
    D = algo.D if algo.D is not None else max(1, int(math.ceil(math.log(1.0 / (1.0 - gamma)) / (1.0 - gamma))))
    B_T = config.variation_budget()
    rows = []
    for T in grid:
        rows.append({
            "T": T,
            "regret_bound_ridge": B.regret_bound_ridge(p, T),
            "regret_bound_forward": B.regret_bound_forward(p, T),
            "feature_budget_ridge": B.feature_budget("ridge", p, T),
            "feature_budget_forward": B.feature_budget("forward", p, T),
            "oful_ridge": B.oful_regret_bound("ridge", p, T),
            "oful_forward": B.oful_regret_bound("forward", p, T),
            "dlinucb_ridge": B.dlinucb_regret_bound("ridge", p, T, gamma, D, B_T),
            "dlinucb_forward": B.dlinucb_regret_bound("forward", p, T, gamma, D, B_T),
        })
    return rows


def emit_bounds_csv(rows, path) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(BOUND_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in BOUND_COLUMNS])
    return path


def _plot_summary(summary, path) -> None:
    import matplotlib

    matplotlib.use("svg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for block in summary:
        st = block.stats.get("cum_regret")
        if st is None:
            continue
        label = block.algo if block.kind == "bandit" else f"{block.algo} lam={block.lam:.3g}"
        (line,) = ax.plot(block.t, st["mean"], label=label)
        ax.fill_between(block.t, st["q25"], st["q75"], color=line.get_color(), alpha=0.2)
    ax.set_xlabel("t")
    ax.set_ylabel("cumulative regret")
    ax.set_yscale("symlog", linthresh=1e-2)
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def write_outputs(result: ExperimentResult, out_dir) -> list[Path]:
    """Write ``summary.csv`` and, as configured, ``traces.csv``, ``batch_regret.csv`` and ``summary.svg``."""
    out = Path(out_dir)
    os.makedirs(out, exist_ok=True)
    cfg = result.config
    written = [emit_csv(result.summary, out / "summary.csv")]
    if cfg.outputs.get("traces", False):
        written.append(emit_csv(result.traces, out / "traces.csv"))
    if cfg.kind == "regression":
        written.append(emit_batch_regret_csv(result.traces, out / "batch_regret.csv"))
    if cfg.outputs.get("svg", False):
        _plot_summary(result.summary, out / "summary.svg")
        written.append(out / "summary.svg")
    with open(out / "config.yaml", "w", encoding="utf-8") as fh:
        yaml.safe_dump(cfg.to_dict(), fh, sort_keys=False)
    written.append(out / "config.yaml")
    return written


def audit_regression(spec: RegressionEnvSpec, lam: float, delta: float, S: float = 1.0) -> dict:
    """Run ridge and forward side by side and audit their ellipsoids and feature sums.

    Returns worst-case radius ratios (``> 1`` means the ellipsoid was left at some
    step), the oracle regrets at ``T``, and the summed squared feature norms
    ``sum ||x_t||^2_{G_{t-1}^{-1}}`` (ridge) and ``sum ||x_t||^2_{G_t^{-1}}`` (forward).
    """
    stream = RegressionStream(spec)
    theta_star = stream.theta_star
    p = B.BoundParams(sigma=spec.sigma, S=S, X=spec.max_norm, lam=lam, delta=delta, d=spec.d)
    ridge, fwd = OnlineRidge(spec.d, lam), OnlineForward(spec.d, lam)
    ridge_ratio = fwd_ratio = 0.0
    ridge_regret = fwd_regret = 0.0
    ridge_sum = fwd_sum = 0.0
    for t in range(1, spec.T + 1):
        x, y = stream.step(t)
        # forward estimate theta_{t-1}, measured in G_t = G_{t-1} + x x^T
        err = fwd.theta_for(x) - theta_star
        dist = math.sqrt(max(err @ fwd.design.gram @ err + (x @ err) ** 2, 0.0))
        fwd_ratio = max(fwd_ratio, dist / B.beta_forward(p, t - 1))
        ridge_sum += ridge.design.mahalanobis_sq(x)
        ridge.predict(x)
        fwd.predict(x)
        _, dr = ridge.observe(x, y, theta_star)
        _, df = fwd.observe(x, y, theta_star)
        ridge_regret += dr.instant_oracle_regret
        fwd_regret += df.instant_oracle_regret
        fwd_sum += fwd.design.mahalanobis_sq(x)
        err = ridge.theta - theta_star
        dist = math.sqrt(max(err @ ridge.design.gram @ err, 0.0))
        ridge_ratio = max(ridge_ratio, dist / B.beta_ridge(p, t))
    return {
        "ridge_ratio": ridge_ratio,
        "forward_ratio": fwd_ratio,
        "ridge_violation": ridge_ratio > 1.0,
        "forward_violation": fwd_ratio > 1.0,
        "ridge_regret": ridge_regret,
        "forward_regret": fwd_regret,
        "ridge_feature_sum": ridge_sum,
        "forward_feature_sum": fwd_sum,
        "params": p,
    }
