"""Acceptance gate: criteria 1-10, each at its stated tolerance.

Every criterion prints one ``[PASS]``/``[FAIL]`` line (also repeated in the
pytest terminal summary).  Run standalone with ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import math
import subprocess
import sys
import time
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

from forwardreg.bounds import BoundParams, feature_budget, oful_regret_bound, regret_bound_forward
from forwardreg.environments import RegressionEnvSpec, RegressionStream, derive_replicate_seed
from forwardreg.harness import PRESETS, audit_regression, emit_csv, load_preset, run_experiment
from forwardreg.regressors import OnlineForward, OnlineRidge, UnregularizedForward

REPORT: list[str] = []


def _report(number, ok: bool, detail: str) -> bool:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    REPORT.append(line)
    print(line)
    return ok


def criterion_1():
    """Incremental ridge/forward estimates match from-scratch solves within 1e-8, in under 10 s."""
    start = time.perf_counter()
    worst = 0.0
    cases = [(20, 1e-6, 10_000, 0), (5, 1e-6, 10_000, 1), (20, 1.0, 10_000, 2), (1, 1e-6, 2_000, 3), (10, 1e-3, 5_000, 4)]
    for d, lam, T, seed in cases:
        rng = np.random.default_rng(seed)
        X = rng.uniform(-1.0, 1.0, (T, d))
        y = X @ rng.standard_normal(d) + 0.1 * rng.standard_normal(T)
        ridge, fwd = OnlineRidge(d, lam), OnlineForward(d, lam)
        G, b = lam * np.eye(d), np.zeros(d)
        checks = {1, 2, d - 1, d, d + 1, 50, 100, 511, 512, 513, 1000, T // 2, T - 1}
        for t in range(T):
            x = X[t]
            if t in checks:
                worst = max(worst, np.abs(ridge.theta - np.linalg.solve(G, b)).max())
                worst = max(worst, np.abs(fwd.theta_for(x) - np.linalg.solve(G + np.outer(x, x), b)).max())
            ridge.predict(x)
            ridge.observe(x, y[t])
            fwd.predict(x)
            fwd.observe(x, y[t])
            G += np.outer(x, x)
            b += y[t] * x
        worst = max(worst, np.abs(ridge.theta - np.linalg.solve(G, b)).max())
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 10.0
    return _report(1, ok, f"max |incremental - direct| = {worst:.2e} (<= 1e-8), {elapsed:.1f} s (< 10 s)")


def criterion_2():
    """forward_predict = ridge_predict / (1 + ||x||^2_{G^-1}) within 1e-10 on 10^4 cases."""
    rng = np.random.default_rng(2)
    worst, cases = 0.0, 0
    while cases < 10_000:
        d = int(rng.integers(1, 11))
        lam = float(10.0 ** rng.uniform(-3, 1))
        ridge, fwd = OnlineRidge(d, lam), OnlineForward(d, lam)
        for _ in range(int(rng.integers(0, 30))):
            x, y = rng.standard_normal(d), float(rng.standard_normal())
            ridge.observe(x, y)
            fwd.observe(x, y)
        for _ in range(50):
            x = rng.standard_normal(d) * rng.uniform(0.1, 3.0)
            m = ridge.design.mahalanobis_sq(x)
            worst = max(worst, abs(fwd.predict(x) - ridge.predict(x) / (1.0 + m)))
            cases += 1
    return _report(2, worst <= 1e-10, f"max shrinkage-identity error {worst:.2e} over {cases} cases (<= 1e-10)")


def criterion_3():
    """Summed feature norms stay within both elliptical-potential budgets on 100 seeded runs."""
    failures = 0
    worst = 0.0
    for r in range(100):
        dist = "unit_ball" if r % 2 == 0 else "unit_cube"
        lam = (0.1, 1.0, 10.0)[r % 3]
        spec = RegressionEnvSpec(d=5, sigma=0.1, T=1000, seed=derive_replicate_seed(3, r), feature_dist=dist)
        a = audit_regression(spec, lam, 0.05)
        p = a["params"]
        f_cap, r_cap = feature_budget("forward", p, spec.T), feature_budget("ridge", p, spec.T)
        worst = max(worst, a["forward_feature_sum"] / f_cap, a["ridge_feature_sum"] / r_cap)
        failures += a["forward_feature_sum"] > f_cap or a["ridge_feature_sum"] > r_cap
    return _report(3, failures == 0, f"{failures}/100 runs exceed a budget; worst sum/budget ratio {worst:.3f}")


@lru_cache(maxsize=1)
def _coverage_runs():
    start = time.perf_counter()
    runs = [
        audit_regression(RegressionEnvSpec(d=5, sigma=0.1, T=1000, seed=derive_replicate_seed(45, r)), 1.0, 0.05)
        for r in range(200)
    ]
    return runs, time.perf_counter() - start


def criterion_4():
    """Ellipsoid violation frequency <= 0.08 for both radii over 200 replicates, in under 60 s."""
    runs, elapsed = _coverage_runs()
    ridge = np.mean([a["ridge_violation"] for a in runs])
    fwd = np.mean([a["forward_violation"] for a in runs])
    ok = ridge <= 0.08 and fwd <= 0.08 and elapsed < 60.0
    return _report(4, ok, f"violation frequency ridge {ridge:.3f}, forward {fwd:.3f} (<= 0.08), {elapsed:.1f} s (< 60 s)")


def criterion_5():
    """Forward oracle regret at T is below its leading-term bound in >= 92% of replicates."""
    runs, _ = _coverage_runs()
    p = runs[0]["params"]
    bound = regret_bound_forward(p, 1000)
    frac = np.mean([a["forward_regret"] <= bound for a in runs])
    med = np.median([a["forward_regret"] for a in runs])
    return _report(5, frac >= 0.92, f"{frac:.1%} of replicates below bound {bound:.3f} (>= 92%); median regret {med:.3f}")


@lru_cache(maxsize=None)
def _preset_run(name):
    start = time.perf_counter()
    res = run_experiment(load_preset(name))
    return res, time.perf_counter() - start


def criterion_6():
    """Forward's cross-lambda spread is smaller than ridge's; ridge at 1/T costs >= 2x ridge at 1."""
    res, _ = _preset_run("fig2")
    means = {(b.algo, b.lam): b.stats["cum_regret"]["mean"][-1] for b in res.summary}
    spread = {}
    for algo in ("ridge", "forward"):
        vals = [v for (a, _), v in means.items() if a == algo]
        spread[algo] = max(vals) / min(vals)
    T = res.config.T
    ratio = means[("ridge", 1.0 / T)] / means[("ridge", 1.0)]
    a_ok = spread["forward"] < spread["ridge"]
    b_ok = ratio >= 2.0
    detail = (
        f"spread forward {spread['forward']:.2f} < ridge {spread['ridge']:.2f}: {'ok' if a_ok else 'no'}; "
        f"ridge(1/T)/ridge(1) = {ratio:.2f} (>= 2): {'ok' if b_ok else 'no'}"
    )
    return _report(6, a_ok and b_ok, detail)


def criterion_7():
    """Median pseudo-regret of OFUL^f below OFUL's and below its bound; under 5 minutes."""
    res, elapsed = _preset_run("fig3")
    cfg = res.config
    med_f, med_r = np.median(res.final("oful_f")), np.median(res.final("oful"))
    bound = oful_regret_bound("forward", cfg.bound_params(cfg.algos[1].lam), cfg.T)
    a_ok, b_ok = med_f < med_r, med_f <= bound
    detail = (
        f"median OFUL^f {med_f:.1f} < OFUL {med_r:.1f}: {'ok' if a_ok else 'no'}; "
        f"OFUL^f median <= bound {bound:.4g}: {'ok' if b_ok else 'no'}; {elapsed:.1f} s (< 300 s)"
    )
    return _report(7, a_ok and b_ok and elapsed < 300.0, detail)


def criterion_8():
    """D-LinUCB^f mean cumulative pseudo-regret within 1.5x of D-LinUCB on both drifting worlds."""
    parts, ok = [], True
    for name in ("abrupt", "slow"):
        res, _ = _preset_run(name)
        f, r = res.final("dlinucb_f").mean(), res.final("dlinucb").mean()
        ratio = f / r
        ok &= 1.0 / 1.5 <= ratio <= 1.5
        parts.append(f"{name}: {f:.1f} vs {r:.1f} (ratio {ratio:.3f})")
    return _report(8, ok, "; ".join(parts) + " (ratio in [1/1.5, 1.5])")


def criterion_9():
    """Noise-free: unregularized forward recovers theta_* once full rank (a) and has zero loss after (b)."""
    worst_theta, worst_loss = 0.0, 0.0
    for r in range(20):
        d = 2 + r % 7
        spec = RegressionEnvSpec(d=d, sigma=0.0, T=200, seed=derive_replicate_seed(9, r))
        stream = RegressionStream(spec)
        reg = UnregularizedForward(d)
        for t in range(1, spec.T + 1):
            x, y = stream.step(t)
            full_rank_before = reg.design.rank == d
            reg.predict(x)
            snap, diag = reg.observe(x, y)
            if reg.design.rank == d:
                worst_theta = max(worst_theta, np.abs(snap.theta - stream.theta_star).max())
            if full_rank_before:
                worst_loss = max(worst_loss, diag.loss)
    a_ok, b_ok = worst_theta <= 1e-8, worst_loss <= 1e-8
    detail = (
        f"(a) max |theta - theta_*| after full rank {worst_theta:.2e} (<= 1e-8): {'ok' if a_ok else 'no'}; "
        f"(b) max loss after full rank {worst_loss:.2e} (zero): {'ok' if b_ok else 'no'}"
    )
    return _report(9, a_ok and b_ok, detail)


def criterion_10(tmp_dir: Path):
    """Two executions of every preset with the same master seed give byte-identical CSV."""
    different = []
    for name in PRESETS:
        res, _ = _preset_run(name)
        first = emit_csv(res.summary, tmp_dir / f"{name}-inproc.csv")
        out = tmp_dir / f"{name}-cli"
        proc = subprocess.run(
            [sys.executable, "-m", "forwardreg", _subcommand(name), "--preset", name, "--out", str(out)],
            capture_output=True, text=True,
        )
        if proc.returncode != 0 or first.read_bytes() != (out / "summary.csv").read_bytes():
            different.append(name)
    detail = "all presets identical across two executions" if not different else f"differs: {', '.join(different)}"
    return _report(10, not different, detail)


def _subcommand(preset):
    return {"fig1": "regress", "fig2": "regress", "fig3": "bandit"}.get(preset, "drift")


def test_criterion_1_oracle_equivalence():
    assert criterion_1()


def test_criterion_2_shrinkage_identity():
    assert criterion_2()


def test_criterion_3_elliptical_potential():
    assert criterion_3()


def test_criterion_4_confidence_coverage():
    assert criterion_4()


def test_criterion_5_bound_validity():
    assert criterion_5()


def test_criterion_6_regularization_robustness():
    assert criterion_6()


def test_criterion_7_tiny_regularization_bandit():
    assert criterion_7()


def test_criterion_8_drifting_bandits():
    assert criterion_8()


def test_criterion_9_noise_free_exactness():
    assert criterion_9()


def test_criterion_10_determinism(tmp_path):
    assert criterion_10(tmp_path)


if __name__ == "__main__":
    import tempfile

    checks = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
              criterion_6, criterion_7, criterion_8, criterion_9]
    results = [fn() for fn in checks]
    with tempfile.TemporaryDirectory() as tmp:
        results.append(criterion_10(Path(tmp)))
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
