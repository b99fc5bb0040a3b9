"""Seeded data-generating processes and the Monte Carlo driver.

Every replication j draws from an independent substream keyed by
(seed, j) through numpy's SeedSequence, so results are bitwise identical
regardless of execution order or worker count.  Set the environment variable
COINTSPECTRA_WORKERS to run replications on a process pool; the output never
depends on it.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cca import Deterministic, TimeSeriesPanel, analyze
from .stats import lr_stat

__all__ = [
    "DgpSpec",
    "McConfig",
    "McSummary",
    "PERCENTILE_LEVELS",
    "gen_panel",
    "run_mc",
    "WORKERS_ENV_VAR",
]

WORKERS_ENV_VAR = "COINTSPECTRA_WORKERS"
PERCENTILE_LEVELS = (5.0, 25.0, 50.0, 75.0, 95.0)


@dataclass(frozen=True)
class DgpSpec:
    """Data-generating process for one panel.

    kind "rw": pure random walk, X_t = X_{t-1} + eps_t, X_0 = 0.
    kind "ar1": stationary X_t = rho X_{t-1} + eps_t, X_0 = 0 (rho = 0 gives
    white noise).
    kind "rw_const": random walk with a drift vector redrawn from N(0, I_p)
    in every replication.

    Innovations are always N(0, I_p): the spectrum is invariant to any
    invertible linear transform of the data, so a general innovation
    covariance would add nothing observable.
    """

    kind: str
    rho: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("rw", "ar1", "rw_const"):
            raise ValueError(f"unknown dgp kind {self.kind!r}")
        if self.kind == "ar1":
            if not (0.0 <= self.rho < 1.0):
                raise ValueError(f"ar1 requires 0 <= rho < 1, got {self.rho}")
        elif self.rho != 0.0:
            raise ValueError(f"rho is only meaningful for kind 'ar1', got {self.rho}")


@dataclass(frozen=True)
class McConfig:
    p: int
    T: int
    reps: int
    dgp: DgpSpec
    det: Deterministic = Deterministic.NONE
    rank: int = 0
    seed: int = 0
    keep_spectra: bool = False

    def __post_init__(self) -> None:
        if self.p < 1:
            raise ValueError("p must be at least 1")
        if self.T < self.p + 2:
            raise ValueError(f"T must be at least p + 2 = {self.p + 2}, got {self.T}")
        if self.reps < 1:
            raise ValueError("reps must be at least 1")
        if not 0 <= self.rank < self.p:
            raise ValueError(f"rank must satisfy 0 <= rank < p, got {self.rank}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class McSummary:
    """Per-index percentile bands and the distribution of LR/(2p^2).

    lambda_percentiles has one row per level in PERCENTILE_LEVELS and one
    column per index i = 1..p, with i indexing the ascending-sorted spectrum
    (i = 1 is the smallest correlation).  LR statistics are summarized over
    the finite replications only; n_infinite_lr counts the rest.
    """

    config: McConfig
    lambda_percentiles: np.ndarray
    lr_scaled_percentiles: np.ndarray | None
    lr_scaled_mean: float | None
    n_infinite_lr: int
    spectra: np.ndarray | None = None

    @property
    def p(self) -> int:
        return self.config.p

    def band(self, level: float) -> np.ndarray:
        """Percentile row for one of the PERCENTILE_LEVELS."""
        idx = PERCENTILE_LEVELS.index(level)
        return self.lambda_percentiles[idx]

    def to_dict(self) -> dict:
        cfg = self.config
        return {
            "p": cfg.p,
            "T": cfg.T,
            "reps": cfg.reps,
            "seed": cfg.seed,
            "dgp": {"kind": cfg.dgp.kind, "rho": cfg.dgp.rho},
            "det": cfg.det.value,
            "rank": cfg.rank,
            "percentile_levels": list(PERCENTILE_LEVELS),
            "lambda_percentiles": self.lambda_percentiles.tolist(),
            "lr_scaled_percentiles": (
                None
                if self.lr_scaled_percentiles is None
                else self.lr_scaled_percentiles.tolist()
            ),
            "lr_scaled_mean": self.lr_scaled_mean,
            "n_infinite_lr": self.n_infinite_lr,
        }

    def csv_text(self) -> str:
        """One row per index i with the five percentile columns."""
        header = "i," + ",".join(f"p{int(lv)}" for lv in PERCENTILE_LEVELS)
        lines = [header]
        for i in range(self.p):
            cells = ",".join(format(v, ".17g") for v in self.lambda_percentiles[:, i])
            lines.append(f"{i + 1},{cells}")
        return "\n".join(lines) + "\n"


def gen_panel(dgp: DgpSpec, p: int, T: int, stream: np.random.Generator) -> TimeSeriesPanel:
    """Draw one panel; consumes the stream deterministically.

    For "rw_const" the drift vector is drawn before the innovations, so the
    same substream always produces the same panel.
    """
    levels = np.zeros((p, T + 1))
    if dgp.kind == "rw_const":
        psi = stream.standard_normal(p)
        eps = stream.standard_normal((p, T))
        np.cumsum(eps + psi[:, None], axis=1, out=levels[:, 1:])
    elif dgp.kind == "rw":
        eps = stream.standard_normal((p, T))
        np.cumsum(eps, axis=1, out=levels[:, 1:])
    else:
        eps = stream.standard_normal((p, T))
        if dgp.rho == 0.0:
            levels[:, 1:] = eps
        else:
            from scipy.signal import lfilter

            levels[:, 1:] = lfilter([1.0], [1.0, -dgp.rho], eps, axis=1)
    return TimeSeriesPanel(levels=levels)


def _replicate(config: McConfig, j: int) -> tuple[np.ndarray, float]:
    stream = np.random.default_rng(np.random.SeedSequence([config.seed, j]))
    panel = gen_panel(config.dgp, config.p, config.T, stream)
    try:
        spectrum = analyze(panel, config.det)
        lr = lr_stat(spectrum, config.rank)
    except Exception as err:
        raise RuntimeError(f"replication {j} failed: {err}") from err
    return spectrum.ascending(), lr / (2.0 * config.p * config.p)


def _replicate_chunk(args: tuple[McConfig, list[int]]) -> list[tuple[np.ndarray, float]]:
    config, indices = args
    return [_replicate(config, j) for j in indices]


def _worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV_VAR, "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def run_mc(config: McConfig) -> McSummary:
    """Run all replications and aggregate.

    The per-replication results are assembled in replication order before any
    statistic is computed, which together with the (seed, j) substreams makes
    the summary independent of the degree of parallelism.
    """
    workers = _worker_count()
    if workers == 1:
        results = [_replicate(config, j) for j in range(config.reps)]
    else:
        chunks = [
            (config, list(range(start, config.reps, workers))) for start in range(workers)
        ]
        results = [None] * config.reps
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for (_, indices), chunk in zip(chunks, pool.map(_replicate_chunk, chunks)):
                for j, res in zip(indices, chunk):
                    results[j] = res
    spectra = np.vstack([lam for lam, _ in results])
    lr_scaled = np.array([v for _, v in results])
    lam_pct = np.percentile(spectra, PERCENTILE_LEVELS, axis=0)
    finite = lr_scaled[np.isfinite(lr_scaled)]
    n_inf = int(lr_scaled.size - finite.size)
    if finite.size:
        lr_pct = np.percentile(finite, PERCENTILE_LEVELS)
        lr_mean = float(finite.mean())
    else:
        lr_pct = None
        lr_mean = None
    return McSummary(
        config=config,
        lambda_percentiles=lam_pct,
        lr_scaled_percentiles=lr_pct,
        lr_scaled_mean=lr_mean,
        n_infinite_lr=n_inf,
        spectra=spectra if config.keep_spectra else None,
    )
