"""Monte Carlo check of the Cramer-Rao chain for photon counting after postselection.

Each trial is postselected with probability p_f; accepted trials yield a
photon count drawn from P_f(n; lambda).  lambda is re-estimated by maximum
likelihood and the spread of the estimates is compared with
1 / (N p_f F^(n)), N being the number of attempted trials.

Randomness comes from numpy's counter-based Philox generator; run r uses the
seed ``seed + r``, so runs are independent of execution order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import ExperimentConfig, postselection_probability
from .errors import FlatLikelihood, PostselectionFailed
from .fisher import fisher_photon, photon_distribution

__all__ = [
    "McRunConfig",
    "McReport",
    "make_rng",
    "sample_outcomes",
    "mle_lambda",
    "crb_experiment",
]

CDF_CUTOFF = 1.0 - 1e-12
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class McRunConfig:
    """One Monte Carlo study.

    The search window may extend below zero: P_f(n; lambda) is well defined
    there, which lets a true lambda of 0 sit strictly inside it.
    """

    base: ExperimentConfig
    n_trials: int
    n_runs: int
    seed: int
    lambda_lo: float
    lambda_hi: float
    lambda_points: int = 2001
    n_max: int | None = None

    def __post_init__(self):
        if self.n_trials < 1 or self.n_runs < 1:
            raise ValueError("n_trials and n_runs must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not self.lambda_lo < self.true_lambda < self.lambda_hi:
            raise ValueError("need lambda_lo < true lambda < lambda_hi")
        if self.lambda_points < 200:
            raise ValueError("lambda_points must be >= 200")

    @property
    def true_lambda(self) -> float:
        return self.base.lam

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.lambda_lo, self.lambda_hi, self.lambda_points)

    def resolved_n_max(self) -> int:
        return self.n_max if self.n_max is not None else self.base.default_n_max()


@dataclass(frozen=True)
class McReport:
    lambda_hat_mean: float
    lambda_hat_var: float
    crb: float
    efficiency: float
    accepted_fraction: float
    p_f: float
    fisher_photon: float
    crb_accepted: float
    n_trials: int
    n_runs: int
    seed: int


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def sample_outcomes(cfg: McRunConfig, run: int = 0) -> np.ndarray:
    """Photon counts of the accepted trials of one run (inverse-CDF sampling)."""
    p_f = postselection_probability(cfg.base)
    if p_f < 1e-6:
        raise PostselectionFailed(f"p_f = {p_f:.3e}")
    probs = photon_distribution(cfg.base, cfg.resolved_n_max()).probs
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    top = int(np.searchsorted(cdf, CDF_CUTOFF)) + 1
    cdf = cdf[:top]
    cdf[-1] = 1.0

    rng = make_rng(cfg.seed + run)
    accepted = rng.random(cfg.n_trials) < p_f
    u = rng.random(int(accepted.sum()))
    return np.searchsorted(cdf, u, side="right").astype(np.int64)


def _log_likelihood(counts: np.ndarray, cfg: McRunConfig, lam: float) -> float:
    probs = photon_distribution(cfg.base, cfg.resolved_n_max(), lam=lam).probs
    hit = counts > 0
    with np.errstate(divide="ignore"):
        return float(counts[hit] @ np.log(probs[hit]))


def mle_lambda(samples, cfg: McRunConfig) -> float:
    """Grid maximum of the log-likelihood, polished by three golden-section steps.

    Ties on the grid go to the smaller lambda.
    """
    samples = np.asarray(samples, dtype=np.int64)
    if samples.size == 0:
        raise ValueError("need at least one sample")
    n_max = cfg.resolved_n_max()
    counts = np.bincount(samples, minlength=n_max + 1)[: n_max + 1].astype(float)
    grid = cfg.grid
    ll = _grid_log_likelihood(counts, cfg)
    finite = ll[np.isfinite(ll)]
    if finite.size == 0 or finite.max() - finite.min() < 1e-9:
        raise FlatLikelihood("log-likelihood is flat over the lambda grid")
    k = int(np.argmax(ll))
    a = grid[max(k - 1, 0)]
    b = grid[min(k + 1, grid.size - 1)]
    best_lam, best_ll = grid[k], ll[k]

    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = _log_likelihood(counts, cfg, c), _log_likelihood(counts, cfg, d)
    for _ in range(3):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = _log_likelihood(counts, cfg, c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = _log_likelihood(counts, cfg, d)
    for lam, val in ((c, fc), (d, fd)):
        if val > best_ll:
            best_lam, best_ll = lam, val
    return float(best_lam)


@lru_cache(maxsize=8)
def _grid_log_matrix(base: ExperimentConfig, lo: float, hi: float, points: int,
                     n_max: int) -> np.ndarray:
    rows = []
    for lam in np.linspace(lo, hi, points):
        try:
            rows.append(photon_distribution(base, n_max, lam=lam).probs)
        except PostselectionFailed:
            rows.append(np.zeros(n_max + 1))
    with np.errstate(divide="ignore"):
        m = np.log(np.array(rows))
    m.flags.writeable = False
    return m


def _grid_log_likelihood(counts: np.ndarray, cfg: McRunConfig) -> np.ndarray:
    logp = _grid_log_matrix(cfg.base, cfg.lambda_lo, cfg.lambda_hi, cfg.lambda_points,
                            cfg.resolved_n_max())
    hit = counts > 0
    return logp[:, hit] @ counts[hit]


def crb_experiment(cfg: McRunConfig) -> McReport:
    """Repeat sampling + MLE n_runs times and compare the spread with the CRB."""
    p_f = postselection_probability(cfg.base)
    fn = fisher_photon(cfg.base, cfg.resolved_n_max())
    estimates = np.empty(cfg.n_runs)
    accepted = np.empty(cfg.n_runs)
    for r in range(cfg.n_runs):
        s = sample_outcomes(cfg, r)
        accepted[r] = s.size
        estimates[r] = mle_lambda(s, cfg)
    var = float(np.var(estimates, ddof=1)) if cfg.n_runs > 1 else math.nan
    crb = 1.0 / (cfg.n_trials * p_f * fn)
    crb_acc = 1.0 / (float(accepted.mean()) * fn)
    return McReport(
        lambda_hat_mean=float(estimates.mean()),
        lambda_hat_var=var,
        crb=crb,
        efficiency=crb / var if var > 0 else math.nan,
        accepted_fraction=float(accepted.sum() / (cfg.n_runs * cfg.n_trials)),
        p_f=p_f,
        fisher_photon=fn,
        crb_accepted=crb_acc,
        n_trials=cfg.n_trials,
        n_runs=cfg.n_runs,
        seed=cfg.seed,
    )
