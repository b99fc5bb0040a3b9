"""From a raw levels panel to the squared sample canonical correlations.

The pipeline is: difference and lag the panel, residualize both blocks on the
deterministic regressors, form the moment matrices, then whiten with Cholesky
factors and take squared singular values.  The whitened route is the
numerically stable equivalent of the textbook eigenproblem
S01 S11^-1 S01' S00^-1 and guarantees values in [0, 1] up to rounding.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

__all__ = [
    "Deterministic",
    "TimeSeriesPanel",
    "MomentMatrices",
    "CanonicalSpectrum",
    "SingularMomentsError",
    "SpectrumRangeError",
    "difference_and_lag",
    "residualize",
    "moments",
    "squared_ccs",
    "analyze",
]

# raw squared correlations may stray this far outside [0, 1] from rounding;
# anything worse signals a genuine rank/conditioning problem
CLAMP_TOL = 1e-10


class SingularMomentsError(ValueError):
    """A moment matrix that must be positive definite is numerically singular."""


class SpectrumRangeError(ValueError):
    """A raw squared correlation fell outside [-CLAMP_TOL, 1 + CLAMP_TOL]."""


class Deterministic(enum.Enum):
    """Deterministic regressors removed before the correlation stage.

    NONE fits nothing; CONSTANT demeans both blocks; RESTRICTED_TREND demeans
    and augments the lagged levels with the time index (for models whose
    trend enters only through the error-correction term).
    """

    NONE = "none"
    CONSTANT = "const"
    RESTRICTED_TREND = "rtrend"

    @property
    def n_regressors(self) -> int:
        return 0 if self is Deterministic.NONE else 1


@dataclass(frozen=True)
class TimeSeriesPanel:
    """Levels X_0, ..., X_T of a p-variate series, stored p x (T+1)."""

    levels: np.ndarray
    names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        levels = np.asarray(self.levels, dtype=float)
        if levels.ndim != 2:
            raise ValueError("levels must be a 2-d array, variables in rows")
        if levels.shape[0] < 1 or levels.shape[1] < 2:
            raise ValueError("panel needs at least one variable and two observations")
        if not np.all(np.isfinite(levels)):
            raise ValueError("panel contains non-finite entries; missing data are not supported")
        object.__setattr__(self, "levels", levels)
        if self.names is not None and len(self.names) != levels.shape[0]:
            raise ValueError("one name per variable required")

    @property
    def p(self) -> int:
        return self.levels.shape[0]

    @property
    def T(self) -> int:
        return self.levels.shape[1] - 1


@dataclass(frozen=True)
class MomentMatrices:
    """S00 = R0 R0'/T, S01 = R0 R1'/T, S11 = R1 R1'/T."""

    s00: np.ndarray
    s01: np.ndarray
    s11: np.ndarray
    T: int


@dataclass(frozen=True)
class CanonicalSpectrum:
    """Squared sample canonical correlations, sorted descending."""

    lambdas: np.ndarray
    p: int
    T: int

    def __post_init__(self) -> None:
        lam = np.asarray(self.lambdas, dtype=float)
        if lam.shape != (self.p,):
            raise ValueError(f"expected {self.p} values, got shape {lam.shape}")
        if np.any(lam < 0.0) or np.any(lam > 1.0):
            raise ValueError("spectrum values must lie in [0, 1]")
        if np.any(np.diff(lam) > 0.0):
            raise ValueError("spectrum must be sorted descending")
        object.__setattr__(self, "lambdas", lam)

    @property
    def c_hat(self) -> float:
        return self.p / self.T

    def ascending(self) -> np.ndarray:
        return self.lambdas[::-1].copy()


def difference_and_lag(panel: TimeSeriesPanel) -> tuple[np.ndarray, np.ndarray]:
    """Column t of the outputs holds (X_t - X_{t-1}, X_{t-1}), t = 1..T."""
    levels = panel.levels
    dx = levels[:, 1:] - levels[:, :-1]
    xlag = levels[:, :-1].copy()
    return dx, xlag


def residualize(
    dx: np.ndarray, xlag: np.ndarray, det: Deterministic
) -> tuple[np.ndarray, np.ndarray]:
    """OLS residuals of both blocks on the deterministic regressors.

    RESTRICTED_TREND appends the time index t = 1..T as an extra row of the
    lagged block (making it (p+1) x T) and demeans both blocks; the trend
    row is demeaned only, not rescaled.
    """
    T = dx.shape[1]
    if T <= det.n_regressors:
        raise ValueError(f"need T > {det.n_regressors} observations for {det.value}")
    if det is Deterministic.NONE:
        return dx, xlag
    if det is Deterministic.CONSTANT:
        r0 = dx - dx.mean(axis=1, keepdims=True)
        r1 = xlag - xlag.mean(axis=1, keepdims=True)
        return r0, r1
    trend = np.arange(1.0, T + 1.0)[None, :]
    aug = np.vstack([xlag, trend])
    r0 = dx - dx.mean(axis=1, keepdims=True)
    r1 = aug - aug.mean(axis=1, keepdims=True)
    return r0, r1


def _cholesky_or_raise(mat: np.ndarray, name: str) -> np.ndarray:
    try:
        return np.linalg.cholesky(mat)
    except np.linalg.LinAlgError as err:
        raise SingularMomentsError(f"{name} is numerically singular") from err


def moments(r0: np.ndarray, r1: np.ndarray) -> MomentMatrices:
    """Sample moment matrices of the two residual blocks."""
    if r0.shape[1] != r1.shape[1]:
        raise ValueError("residual blocks must share the time dimension")
    T = r0.shape[1]
    s00 = r0 @ r0.T / T
    s01 = r0 @ r1.T / T
    s11 = r1 @ r1.T / T
    _cholesky_or_raise(s00, "S00")
    _cholesky_or_raise(s11, "S11")
    return MomentMatrices(s00=s00, s01=s01, s11=s11, T=T)


def squared_ccs(m: MomentMatrices) -> CanonicalSpectrum:
    """Squared singular values of L0^-1 S01 L1^-T, descending.

    L0, L1 are the Cholesky factors of S00, S11.  Raw values are accepted in
    [-CLAMP_TOL, 1 + CLAMP_TOL] and clipped to [0, 1]; anything beyond that
    window raises, since it indicates a rank problem rather than rounding.
    """
    l0 = _cholesky_or_raise(m.s00, "S00")
    l1 = _cholesky_or_raise(m.s11, "S11")
    k = solve_triangular(l0, m.s01, lower=True)
    k = solve_triangular(l1, k.T, lower=True).T
    sing = np.linalg.svd(k, compute_uv=False)
    lam = sing * sing
    if np.any(lam > 1.0 + CLAMP_TOL):
        raise SpectrumRangeError(
            f"squared correlation {lam.max():.17g} exceeds 1 beyond tolerance {CLAMP_TOL}"
        )
    lam = np.clip(lam, 0.0, 1.0)
    return CanonicalSpectrum(lambdas=lam, p=m.s00.shape[0], T=m.T)


def analyze(panel: TimeSeriesPanel, det: Deterministic = Deterministic.NONE) -> CanonicalSpectrum:
    """Full pipeline: difference/lag, residualize, moments, spectrum."""
    dx, xlag = difference_and_lag(panel)
    r0, r1 = residualize(dx, xlag, det)
    return squared_ccs(moments(r0, r1))
