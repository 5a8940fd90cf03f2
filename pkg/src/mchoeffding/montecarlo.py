"""Seeded trajectory simulation: tail estimates with Wilson intervals and
Gaussian baselines for the vector-valued comparison.

Determinism contract: every random draw is a pure function of
(master_seed, trial index, step counter), so reports are bit-identical for a
fixed configuration regardless of batching or parallelism.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import evaluate_tail_bounds
from .chain import FunctionFamily, MarkovChain
from .errors import EmptyInput, OutOfRange
from .rng import normal_block, trial_seeds, uniform_block

_Z95 = 1.959963984540054


def wilson_interval(successes: int, trials: int, z: float = _Z95):
    """95% Wilson score interval; well behaved at extreme tail probabilities."""
    if trials < 1:
        raise OutOfRange("trials must be positive")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


@dataclass(frozen=True)
class SimConfig:
    trials: int
    master_seed: int
    parallelism: int = 1  # advisory only; results never depend on it

    def __post_init__(self):
        if self.trials < 1:
            raise OutOfRange("trials must be at least 1")


@dataclass(frozen=True)
class TailReport:
    u_grid: np.ndarray
    estimates: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    bounds: dict
    vacuous: dict
    trials: int
    master_seed: int
    lam: float
    extra: dict = field(default_factory=dict)

    def rows(self):
        names = sorted(self.bounds)
        header = ["u", "estimate", "ci_low", "ci_high"] + names + ["vacuous_flags"]
        out = [header]
        for i, u in enumerate(self.u_grid):
            flags = ";".join(n for n in names if self.vacuous[n][i])
            out.append([float(u), float(self.estimates[i]),
                        float(self.ci_low[i]), float(self.ci_high[i])]
                       + [float(self.bounds[n][i]) for n in names] + [flags])
        return out


def _walk(chain: MarkovChain, uniforms: np.ndarray) -> np.ndarray:
    """Map uniform draws of shape (trials, n) to state paths via inverse CDF."""
    trials, n = uniforms.shape
    cum_rows = np.cumsum(chain.transition, axis=1)
    cum_pi = np.cumsum(chain.stationary)
    states = np.empty((trials, n), dtype=np.int64)
    states[:, 0] = np.searchsorted(cum_pi, uniforms[:, 0], side="right")
    np.clip(states[:, 0], 0, chain.n_states - 1, out=states[:, 0])
    for k in range(1, n):
        c = cum_rows[states[:, k - 1]]
        nxt = (uniforms[:, k][:, None] > c).sum(axis=1)
        states[:, k] = np.clip(nxt, 0, chain.n_states - 1)
    return states


def sample_path(chain: MarkovChain, n: int, seed: int) -> np.ndarray:
    """One stationary path Y_1..Y_n, deterministic in `seed`."""
    if n < 1:
        raise OutOfRange("n must be at least 1")
    u = uniform_block(np.array([seed], dtype=np.uint64), n)
    return _walk(chain, u)[0]


def sample_paths(chain: MarkovChain, n: int, cfg: SimConfig) -> np.ndarray:
    """(trials, n) state paths; row t equals sample_path with the t-th derived seed."""
    seeds = trial_seeds(cfg.master_seed, cfg.trials)
    return _walk(chain, uniform_block(seeds, n))


def simulate_sums(chain: MarkovChain, funcs: FunctionFamily, cfg: SimConfig) -> np.ndarray:
    """Per-trial realizations of S_n = sum_i f_i(Y_i)."""
    states = sample_paths(chain, funcs.n_steps, cfg)
    S = np.zeros(cfg.trials)
    for i in range(funcs.n_steps):
        S += funcs.values[i][states[:, i]]
    return S


def estimate_tail(chain: MarkovChain, funcs: FunctionFamily, u_grid, cfg: SimConfig,
                  lam: float | None = None) -> TailReport:
    """Empirical Pr[|S_n| >= u * ||a||_2] over the u-grid, with bound columns."""
    from .spectral import contraction

    u_grid = np.asarray(u_grid, dtype=float)
    if lam is None:
        lam = contraction(chain)
    S = simulate_sums(chain, funcs, cfg)
    scale = funcs.a_l2
    est = np.empty(len(u_grid))
    lo = np.empty(len(u_grid))
    hi = np.empty(len(u_grid))
    for i, u in enumerate(u_grid):
        hits = int(np.sum(np.abs(S) >= u * scale - 1e-12))
        est[i] = hits / cfg.trials
        lo[i], hi[i] = wilson_interval(hits, cfg.trials)
    bound_cols = evaluate_tail_bounds(u_grid, lam)
    vac = {name: vals >= 1.0 for name, vals in bound_cols.items()}
    return TailReport(u_grid=u_grid, estimates=est, ci_low=lo, ci_high=hi,
                      bounds=bound_cols, vacuous=vac,
                      trials=cfg.trials, master_seed=cfg.master_seed, lam=float(lam))


def _norms(sums: np.ndarray, norm_kind: str) -> np.ndarray:
    from .matrixlab import schatten_norm

    if norm_kind == "euclidean":
        return np.sqrt(np.sum(sums**2, axis=tuple(range(1, sums.ndim))))
    if norm_kind == "sup":
        return np.abs(sums).reshape(len(sums), -1).max(axis=1)
    if norm_kind == "schatten_inf":
        if sums.ndim != 3:
            raise OutOfRange("schatten_inf needs matrix-valued inputs")
        return np.array([schatten_norm(m, math.inf) for m in sums])
    raise OutOfRange(f"unknown norm kind {norm_kind!r}")


def estimate_gaussian_norm(x_vectors, norm_kind: str, cfg: SimConfig):
    """Monte Carlo E[||g_1 X_1 + ... + g_n X_n||] with a standard-error CI.

    Returns (mean, ci_low, ci_high)."""
    X = np.asarray(x_vectors, dtype=float)
    if X.size == 0:
        raise EmptyInput("need at least one X vector")
    n = X.shape[0]
    g = normal_block(trial_seeds(cfg.master_seed, cfg.trials), n)
    sums = np.tensordot(g, X, axes=(1, 0))
    norms = _norms(sums, norm_kind)
    mean = float(norms.mean())
    sem = float(norms.std(ddof=1) / math.sqrt(cfg.trials)) if cfg.trials > 1 else 0.0
    return mean, mean - _Z95 * sem, mean + _Z95 * sem


def estimate_vector_sum_tail(chain: MarkovChain, funcs: FunctionFamily, x_vectors,
                             norm_kind: str, threshold_grid, cfg: SimConfig,
                             gaussian_trials: int | None = None) -> TailReport:
    """Empirical Pr[||sum_i f_i(Y_i) X_i|| >= t] per grid point.

    Each threshold t is paired with u = t / E[||sum g_i X_i||] (Gaussian
    baseline, estimated with a derived seed) and the report carries a fitted
    curve L * exp(-C u^2 (1 - lam))."""
    from .spectral import contraction

    X = np.asarray(x_vectors, dtype=float)
    if X.size == 0:
        raise EmptyInput("need at least one X vector")
    thresholds = np.asarray(threshold_grid, dtype=float)
    states = sample_paths(chain, funcs.n_steps, cfg)
    # coeff[t, i] = f_i(Y_i) on trial t
    coeff = np.stack([funcs.values[i][states[:, i]] for i in range(funcs.n_steps)], axis=1)
    sums = np.tensordot(coeff, X, axes=(1, 0))
    norms = _norms(sums, norm_kind)

    g_cfg = SimConfig(trials=gaussian_trials or cfg.trials,
                      master_seed=int(trial_seeds(cfg.master_seed ^ 0x5A5A5A5A, 1)[0]))
    g_mean, _, _ = estimate_gaussian_norm(X, norm_kind, g_cfg)

    lam = contraction(chain)
    est = np.empty(len(thresholds))
    lo = np.empty(len(thresholds))
    hi = np.empty(len(thresholds))
    for i, t in enumerate(thresholds):
        hits = int(np.sum(norms >= t - 1e-12))
        est[i] = hits / cfg.trials
        lo[i], hi[i] = wilson_interval(hits, cfg.trials)
    u_grid = thresholds / g_mean if g_mean > 0 else np.full_like(thresholds, np.inf)

    fit_L, fit_C = _fit_tail_curve(u_grid, est, lam)
    extra = {"gaussian_norm_mean": g_mean, "fitted_L": fit_L, "fitted_C": fit_C,
             "thresholds": thresholds.tolist()}
    return TailReport(u_grid=u_grid, estimates=est, ci_low=lo, ci_high=hi,
                      bounds={}, vacuous={}, trials=cfg.trials,
                      master_seed=cfg.master_seed, lam=float(lam), extra=extra)


def _fit_tail_curve(u_grid, estimates, lam):
    """Least-squares fit of log p = log L - C u^2 (1-lam) on nonzero estimates."""
    mask = (estimates > 0) & np.isfinite(u_grid)
    if mask.sum() < 2 or lam >= 1.0:
        return float("nan"), float("nan")
    x = (np.asarray(u_grid)[mask] ** 2) * (1.0 - lam)
    y = np.log(np.asarray(estimates)[mask])
    slope, intercept = np.polyfit(x, y, 1)
    return float(math.exp(intercept)), float(-slope)
