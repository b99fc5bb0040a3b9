"""Wachter quantile-quantile plot construction and rendering.

A spectrum that follows its limit law sits on the 45-degree line when the
ascending-sorted squared correlations are plotted against the limit quantiles
at the positions (i - 1/2)/p.  Monte Carlo 5%/95% per-index bands can be
attached as an envelope.  Rendering is deliberately primitive: a fixed-layout
SVG written by hand and a plain CSV, both byte-deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .cca import CanonicalSpectrum
from .mc import McSummary
from .wachter import WachterParams, quantile

__all__ = ["QQSeries", "build_qq", "attach_envelope", "render"]

CSV_HEADER = "i,q,theoretical,empirical,env_lo,env_hi"

# all rendering geometry in one place so output bytes never drift
SVG_STYLE = {
    "size": 480,
    "margin": 56,
    "point_radius": 3.0,
    "point_color": "#1f4e9c",
    "envelope_color": "#c0392b",
    "reference_dash": "6,4",
    "axis_ticks": (0.0, 0.25, 0.5, 0.75, 1.0),
    "font": "11px sans-serif",
}


@dataclass(frozen=True)
class QQSeries:
    """Paired (theoretical quantile, sorted empirical value) points."""

    q: np.ndarray
    theoretical: np.ndarray
    empirical: np.ndarray
    p: int
    T: int
    c_hat: float
    gamma1: float
    gamma2: float
    env_lo: np.ndarray | None = None
    env_hi: np.ndarray | None = None

    def __post_init__(self) -> None:
        for name in ("q", "theoretical", "empirical"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (self.p,):
                raise ValueError(f"{name} must have length p={self.p}")
            object.__setattr__(self, name, arr)
        if np.any(np.diff(self.theoretical) < 0.0):
            raise ValueError("theoretical coordinates must be nondecreasing")


def build_qq(spectrum: CanonicalSpectrum, params: WachterParams) -> QQSeries:
    """Point i pairs the limit quantile at (i - 1/2)/p with the i-th smallest
    squared correlation."""
    p = spectrum.p
    q = (np.arange(1, p + 1) - 0.5) / p
    return QQSeries(
        q=q,
        theoretical=quantile(params, q),
        empirical=spectrum.ascending(),
        p=p,
        T=spectrum.T,
        c_hat=spectrum.c_hat,
        gamma1=params.gamma1,
        gamma2=params.gamma2,
    )


def attach_envelope(series: QQSeries, mc: McSummary) -> QQSeries:
    """Fill the envelope from the per-index 5%/95% Monte Carlo bands."""
    if mc.p != series.p:
        raise ValueError(f"envelope dimension {mc.p} does not match series p={series.p}")
    return replace(series, env_lo=mc.band(5.0).copy(), env_hi=mc.band(95.0).copy())


def render(series: QQSeries, format: str) -> bytes:
    """Serialize the series; format is "csv" or "svg"."""
    if format == "csv":
        return _render_csv(series)
    if format == "svg":
        return _render_svg(series)
    raise ValueError(f"unknown format {format!r}; expected 'csv' or 'svg'")


def _g(value: float) -> str:
    return format(value, ".17g")


def _render_csv(series: QQSeries) -> bytes:
    lines = [CSV_HEADER]
    has_env = series.env_lo is not None
    for i in range(series.p):
        row = [
            str(i + 1),
            _g(series.q[i]),
            _g(series.theoretical[i]),
            _g(series.empirical[i]),
            _g(series.env_lo[i]) if has_env else "",
            _g(series.env_hi[i]) if has_env else "",
        ]
        lines.append(",".join(row))
    return ("\n".join(lines) + "\n").encode()


def _render_svg(series: QQSeries) -> bytes:
    size = SVG_STYLE["size"]
    margin = SVG_STYLE["margin"]
    inner = size - 2 * margin

    def px(x: float) -> str:
        return f"{margin + x * inner:.2f}"

    def py(y: float) -> str:
        return f"{size - margin - y * inner:.2f}"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
        f'<rect x="{margin}" y="{margin}" width="{inner}" height="{inner}" '
        'fill="none" stroke="black" stroke-width="1"/>',
    ]
    for tick in SVG_STYLE["axis_ticks"]:
        parts.append(
            f'<line x1="{px(tick)}" y1="{size - margin}" x2="{px(tick)}" '
            f'y2="{size - margin + 4}" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{px(tick)}" y="{size - margin + 16}" text-anchor="middle" '
            f'style="font:{SVG_STYLE["font"]}">{tick:g}</text>'
        )
        parts.append(
            f'<line x1="{margin - 4}" y1="{py(tick)}" x2="{margin}" '
            f'y2="{py(tick)}" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{margin - 6}" y="{py(tick)}" text-anchor="end" '
            f'dominant-baseline="middle" style="font:{SVG_STYLE["font"]}">{tick:g}</text>'
        )
    parts.append(
        f'<line x1="{px(0.0)}" y1="{py(0.0)}" x2="{px(1.0)}" y2="{py(1.0)}" '
        f'stroke="black" stroke-width="1" stroke-dasharray="{SVG_STYLE["reference_dash"]}"/>'
    )
    if series.env_lo is not None:
        for env in (series.env_lo, series.env_hi):
            pts = " ".join(
                f"{px(t)},{py(e)}" for t, e in zip(series.theoretical, env)
            )
            parts.append(
                f'<polyline points="{pts}" fill="none" '
                f'stroke="{SVG_STYLE["envelope_color"]}" stroke-width="1"/>'
            )
    for t, e in zip(series.theoretical, series.empirical):
        parts.append(
            f'<circle cx="{px(t)}" cy="{py(e)}" r="{SVG_STYLE["point_radius"]}" '
            f'fill="{SVG_STYLE["point_color"]}"/>'
        )
    label = (
        f"p={series.p} T={series.T} c={series.c_hat:.6g} "
        f"limit=({series.gamma1:.6g}, {series.gamma2:.6g})"
    )
    parts.append(
        f'<text x="{margin}" y="{margin - 8}" style="font:{SVG_STYLE["font"]}">{label}</text>'
    )
    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode()
