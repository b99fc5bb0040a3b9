"""Rank-test statistics on a canonical spectrum and their centerings.

The log-likelihood-ratio (trace) and Pillai-Bartlett statistics share the
same spectrum; under proportional p/T -> c asymptotics their natural scales
are 1/(Tp) and 1/(2p^2), and the centering constants below are closed forms
in c.  The LR center for c < 1/2 is a proven almost-sure lower bound and a
conjectured limit; it is flagged as such wherever it is reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cca import CanonicalSpectrum
from .wachter import mean_neglog

__all__ = [
    "TestReport",
    "lr_stat",
    "pb_stat",
    "lr_center_sim",
    "pb_center_sim",
    "gp_average",
    "bartlett_theoretical",
    "bartlett_jhf",
    "bartlett_corrected_lr",
    "transform_cv",
    "build_report",
    "JOHANSEN_TRACE_CV95",
    "LR_CENTER_NOTE",
    "LR_CENTER_OUT_OF_DOMAIN",
]

LR_CENTER_NOTE = "conjectured limit (proven a.s. lower bound)"
LR_CENTER_OUT_OF_DOMAIN = "out of domain: requires p/T < 1/2"

# 95% critical values of the trace test for the no-deterministic-terms case,
# from MacKinnon, Haug & Michelis (1999), Table II, first column.  Shipped
# only to exercise transform_cv; this package does not do fixed-p testing.
JOHANSEN_TRACE_CV95 = {
    1: 4.13,
    2: 12.32,
    3: 24.28,
    4: 40.17,
    5: 60.06,
    6: 83.94,
    7: 111.79,
    8: 143.64,
    9: 179.48,
    10: 219.38,
    11: 263.25,
    12: 311.09,
}


@dataclass(frozen=True)
class TestReport:
    """Everything the rank-r test produces on one spectrum.

    ``lr`` is math.inf when some squared correlation past rank r equals one
    (the statistic is then ill-defined, which is expected once p/T reaches
    1/2).  Centerings and the Bartlett factor are None outside their domains,
    with the reason recorded in ``lr_center_note``.
    """

    r: int
    p: int
    T: int
    c_hat: float
    lr: float
    pb: float
    lr_over_tp: float
    pb_over_tp: float
    lr_over_2p2: float
    gp_average: float
    lr_center_sim: float | None
    pb_center_sim: float
    lr_center_note: str
    bartlett_theoretical: float | None
    bartlett_jhf: float
    lr_corrected: float | None


def _check_rank(s: CanonicalSpectrum, r: int) -> np.ndarray:
    if not 0 <= r < s.p:
        raise ValueError(f"rank must satisfy 0 <= r < p={s.p}, got {r}")
    return s.lambdas[r:]


def lr_stat(s: CanonicalSpectrum, r: int) -> float:
    """-T * sum of log(1 - lambda_i) over the p - r smallest correlations.

    Returns math.inf if any of them equals one.
    """
    tail = _check_rank(s, r)
    if np.any(tail >= 1.0):
        return math.inf
    return float(-s.T * np.log1p(-tail).sum())


def pb_stat(s: CanonicalSpectrum, r: int) -> float:
    """T * sum of lambda_i over the p - r smallest correlations."""
    tail = _check_rank(s, r)
    return float(s.T * tail.sum())


def lr_center_sim(c: float) -> float:
    """Centering of LR/(2p^2) under proportional asymptotics, c < 1/2.

    Equals mean_neglog(c)/(2c); tends to 1 (the sequential-asymptotics
    center) as c -> 0.  Conjectured limit, proven lower bound.
    """
    return mean_neglog(c) / (2.0 * c)


def pb_center_sim(c: float) -> float:
    """a.s. limit of PB/(2p^2): 1/(1+c).  The 1/(Tp) scale is mean_identity."""
    if not (math.isfinite(c) and 0.0 < c <= 1.0):
        raise ValueError(f"aspect ratio must lie in (0, 1], got {c}")
    return 1.0 / (1.0 + c)


def gp_average(lr: float, pb: float) -> float:
    """Average of the LR and PB statistics; an infinite LR propagates."""
    return (lr + pb) / 2.0


def bartlett_theoretical(c_hat: float) -> float:
    """Correction factor implied by the proportional-asymptotics centering,
    evaluated at the finite-sample ratio c_hat = p/T < 1/2."""
    return lr_center_sim(c_hat)


def bartlett_jhf(c_hat: float) -> float:
    """Simulation-based correction factor exp(0.549 c + 0.552 c^2) fitted by
    Johansen, Hansen & Fachin (2005); their design space stops near c = 0.3,
    beyond which this curve and the theoretical one diverge."""
    if not (math.isfinite(c_hat) and c_hat > 0.0):
        raise ValueError(f"c_hat must be positive, got {c_hat}")
    return math.exp(0.549 * c_hat + 0.552 * c_hat * c_hat)


def bartlett_corrected_lr(lr: float, c_hat: float) -> float:
    """LR deflated by the theoretical correction factor."""
    if not math.isfinite(lr):
        raise ValueError("cannot correct an infinite LR statistic")
    return lr / bartlett_theoretical(c_hat)


def transform_cv(cv: float, p: int) -> float:
    """Map an unadjusted trace-test critical value to the cv/p - 2p scale,
    on which the values are O(1) in p instead of O(p^2)."""
    if p < 1:
        raise ValueError("p must be at least 1")
    return cv / p - 2.0 * p


def build_report(s: CanonicalSpectrum, r: int) -> TestReport:
    """Assemble the full report; out-of-domain centerings become None."""
    lr = lr_stat(s, r)
    pb = pb_stat(s, r)
    c_hat = s.c_hat
    tp = s.T * s.p
    two_p2 = 2.0 * s.p * s.p
    if 0.0 < c_hat < 0.5:
        center = lr_center_sim(c_hat)
        factor = bartlett_theoretical(c_hat)
        note = LR_CENTER_NOTE
        corrected = lr / factor if math.isfinite(lr) else None
    else:
        center = None
        factor = None
        note = LR_CENTER_OUT_OF_DOMAIN
        corrected = None
    return TestReport(
        r=r,
        p=s.p,
        T=s.T,
        c_hat=c_hat,
        lr=lr,
        pb=pb,
        lr_over_tp=lr / tp,
        pb_over_tp=pb / tp,
        lr_over_2p2=lr / two_p2,
        gp_average=gp_average(lr, pb),
        lr_center_sim=center,
        pb_center_sim=pb_center_sim(c_hat),
        lr_center_note=note,
        bartlett_theoretical=factor,
        bartlett_jhf=bartlett_jhf(c_hat),
        lr_corrected=corrected,
    )
