"""Shared fixtures and oracle helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from cointspectra.cca import TimeSeriesPanel

settings.register_profile(
    "deterministic",
    settings(
        max_examples=25,
        derandomize=True,
        deadline=None,
        suppress_health_check=[HealthCheck.too_slow],
    ),
)
settings.load_profile("deterministic")


def make_rw_panel(p: int, T: int, seed: int) -> TimeSeriesPanel:
    """Pure random walk panel with X_0 = 0, independent of the mc module."""
    rng = np.random.default_rng(seed)
    levels = np.zeros((p, T + 1))
    levels[:, 1:] = np.cumsum(rng.standard_normal((p, T)), axis=1)
    return TimeSeriesPanel(levels=levels)


def panel_to_csv(panel: TimeSeriesPanel, header: bool = False) -> str:
    """Serialize a panel the way the ingestion layer expects it: rows are
    time points, columns are variables."""
    lines = []
    if header:
        lines.append(",".join(f"v{i}" for i in range(panel.p)))
    for row in panel.levels.T:
        lines.append(",".join(format(v, ".17g") for v in row))
    return "\n".join(lines) + "\n"


def kolmogorov_distance(samples: np.ndarray, cdf) -> float:
    """Sup distance between the empirical d.f. of the pooled samples and a
    (possibly atomic) reference cdf, evaluated at the jump points."""
    pooled = np.sort(np.ravel(samples))
    n = pooled.size
    theo = np.asarray(cdf(pooled), dtype=float)
    upper = np.abs(np.arange(1, n + 1) / n - theo)
    lower = np.abs(np.arange(0, n) / n - theo)
    return float(max(upper.max(), lower.max()))


@pytest.fixture(scope="session")
def rw_panel_small() -> TimeSeriesPanel:
    return make_rw_panel(p=5, T=60, seed=314)
