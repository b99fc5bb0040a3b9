"""FastAPI application wrapping the core package.

Domain errors from the core (bad parameters, malformed CSV, singular moment
matrices) surface as HTTP 400 with the underlying message; payload shape
violations are FastAPI's usual 422.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, HTTPException

from .. import __version__, wachter
from ..cca import Deterministic, analyze
from ..ingest import ingest_csv_text
from ..mc import PERCENTILE_LEVELS, DgpSpec, McConfig, McSummary, run_mc
from ..qq import attach_envelope, build_qq, render
from ..stats import (
    JOHANSEN_TRACE_CV95,
    LR_CENTER_NOTE,
    LR_CENTER_OUT_OF_DOMAIN,
    TestReport,
    bartlett_jhf,
    bartlett_theoretical,
    build_report,
    lr_center_sim,
    pb_center_sim,
    transform_cv,
)
from .models import (
    AnalyzeRequest,
    AnalyzeResponse,
    CentersRequest,
    CentersResponse,
    DensityRow,
    DgpModel,
    DistRequest,
    DistResponse,
    HealthResponse,
    LrScaledModel,
    McSummaryModel,
    QQRequest,
    QQResponse,
    QQSeriesModel,
    QuantileRow,
    SimulateRequest,
    SpectrumModel,
    TestReportModel,
)

__all__ = ["create_app"]


def _finite_or_none(x: float | None) -> float | None:
    if x is None or not math.isfinite(x):
        return None
    return x


def _report_model(report: TestReport) -> TestReportModel:
    lr_inf = math.isinf(report.lr)
    return TestReportModel(
        r=report.r,
        p=report.p,
        T=report.T,
        c_hat=report.c_hat,
        lr=_finite_or_none(report.lr),
        lr_infinite=lr_inf,
        pb=report.pb,
        lr_over_tp=_finite_or_none(report.lr_over_tp),
        pb_over_tp=report.pb_over_tp,
        lr_over_2p2=_finite_or_none(report.lr_over_2p2),
        gp_average=_finite_or_none(report.gp_average),
        gp_average_infinite=lr_inf,
        lr_center_sim=report.lr_center_sim,
        pb_center_sim=report.pb_center_sim,
        lr_center_note=report.lr_center_note,
        bartlett_theoretical=report.bartlett_theoretical,
        bartlett_jhf=report.bartlett_jhf,
        lr_corrected=report.lr_corrected,
    )


def _mc_summary_model(summary: McSummary) -> McSummaryModel:
    cfg = summary.config
    return McSummaryModel(
        p=cfg.p,
        T=cfg.T,
        reps=cfg.reps,
        seed=cfg.seed,
        dgp=DgpModel(kind=cfg.dgp.kind, rho=cfg.dgp.rho),
        det=cfg.det.value,
        rank=cfg.rank,
        percentile_levels=list(PERCENTILE_LEVELS),
        lambda_percentiles=summary.lambda_percentiles.tolist(),
        lr_scaled=LrScaledModel(
            percentile_levels=list(PERCENTILE_LEVELS),
            percentiles=(
                None
                if summary.lr_scaled_percentiles is None
                else summary.lr_scaled_percentiles.tolist()
            ),
            mean=summary.lr_scaled_mean,
            n_infinite=summary.n_infinite_lr,
        ),
    )


def _wachter_params(req: DistRequest) -> wachter.WachterParams:
    if req.c is not None:
        if req.white_noise:
            return wachter.white_noise_params(req.c)
        return wachter.coint_null_params(req.c)
    return wachter.WachterParams(gamma1=req.gamma1, gamma2=req.gamma2)


# the DGP used for null envelopes, keyed by the deterministic specification:
# with a fitted constant (or restricted trend) the null of interest is a
# random walk with a redrawn drift vector, otherwise a pure random walk
_ENVELOPE_DGP = {
    Deterministic.NONE: DgpSpec("rw"),
    Deterministic.CONSTANT: DgpSpec("rw_const"),
    Deterministic.RESTRICTED_TREND: DgpSpec("rw_const"),
}


def create_app() -> FastAPI:
    app = FastAPI(
        title="cointspectra",
        version=__version__,
        description=(
            "Sample canonical-correlation spectra of large VARs, their limit "
            "laws, cointegration rank statistics, Monte Carlo simulation, and "
            "Wachter qq plots."
        ),
    )

    @app.get("/healthz", response_model=HealthResponse)
    def healthz() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/analyze", response_model=AnalyzeResponse)
    def analyze_endpoint(req: AnalyzeRequest) -> AnalyzeResponse:
        try:
            panel = ingest_csv_text(req.csv_text)
            spectrum = analyze(panel, Deterministic(req.det))
            report = build_report(spectrum, req.rank)
        except ValueError as err:
            raise HTTPException(status_code=400, detail=str(err)) from err
        spec_model = None
        if req.include_spectrum:
            spec_model = SpectrumModel(
                p=spectrum.p,
                T=spectrum.T,
                c_hat=spectrum.c_hat,
                lambdas_desc=spectrum.lambdas.tolist(),
            )
        return AnalyzeResponse(
            report=_report_model(report),
            spectrum=spec_model,
            variable_names=list(panel.names) if panel.names else None,
        )

    @app.post("/simulate", response_model=McSummaryModel)
    def simulate_endpoint(req: SimulateRequest) -> McSummaryModel:
        try:
            config = McConfig(
                p=req.p,
                T=req.T,
                reps=req.reps,
                dgp=DgpSpec(kind=req.dgp.kind, rho=req.dgp.rho),
                det=Deterministic(req.det),
                rank=req.rank,
                seed=req.seed,
            )
            summary = run_mc(config)
        except (ValueError, RuntimeError) as err:
            raise HTTPException(status_code=400, detail=str(err)) from err
        return _mc_summary_model(summary)

    @app.post("/dist", response_model=DistResponse)
    def dist_endpoint(req: DistRequest) -> DistResponse:
        try:
            params = _wachter_params(req)
            quantile_rows = [
                QuantileRow(q=q, value=wachter.quantile(params, q)) for q in req.quantiles
            ]
            density_rows = [
                DensityRow(
                    lam=lam, pdf=wachter.pdf(params, lam), cdf=wachter.cdf(params, lam)
                )
                for lam in req.lambdas
            ]
        except ValueError as err:
            raise HTTPException(status_code=400, detail=str(err)) from err
        lo, hi = wachter.support(params)
        return DistResponse(
            gamma1=params.gamma1,
            gamma2=params.gamma2,
            b_minus=lo,
            b_plus=hi,
            atom0=params.atom0,
            atom1=params.atom1,
            quantile_rows=quantile_rows,
            density_rows=density_rows,
        )

    @app.post("/centers", response_model=CentersResponse)
    def centers_endpoint(req: CentersRequest) -> CentersResponse:
        try:
            if req.c is not None:
                c = req.c
                p = None
                T = None
            else:
                p, T = req.p, req.T
                c = p / T
            in_domain = 0.0 < c < 0.5
            mean_id = wachter.mean_identity(c)
            pb_center = pb_center_sim(c)
            jhf = bartlett_jhf(c)
        except ValueError as err:
            raise HTTPException(status_code=400, detail=str(err)) from err
        cv = JOHANSEN_TRACE_CV95.get(p) if p is not None else None
        return CentersResponse(
            c=c,
            p=p,
            T=T,
            lr_center_sim=lr_center_sim(c) if in_domain else None,
            lr_center_note=LR_CENTER_NOTE if in_domain else LR_CENTER_OUT_OF_DOMAIN,
            pb_center_sim=pb_center,
            mean_identity=mean_id,
            mean_neglog=wachter.mean_neglog(c) if in_domain else None,
            bartlett_theoretical=bartlett_theoretical(c) if in_domain else None,
            bartlett_jhf=jhf,
            cv_unadjusted=cv,
            cv_transformed=transform_cv(cv, p) if cv is not None else None,
        )

    @app.post("/qq", response_model=QQResponse)
    def qq_endpoint(req: QQRequest) -> QQResponse:
        try:
            panel = ingest_csv_text(req.csv_text)
            det = Deterministic(req.det)
            spectrum = analyze(panel, det)
            params = wachter.coint_null_params(spectrum.c_hat)
            series = build_qq(spectrum, params)
            if req.envelope:
                config = McConfig(
                    p=spectrum.p,
                    T=spectrum.T,
                    reps=req.reps,
                    dgp=_ENVELOPE_DGP[det],
                    det=det,
                    seed=req.seed,
                )
                series = attach_envelope(series, run_mc(config))
        except (ValueError, RuntimeError) as err:
            raise HTTPException(status_code=400, detail=str(err)) from err
        series_model = QQSeriesModel(
            p=series.p,
            T=series.T,
            c_hat=series.c_hat,
            gamma1=series.gamma1,
            gamma2=series.gamma2,
            q=series.q.tolist(),
            theoretical=series.theoretical.tolist(),
            empirical=series.empirical.tolist(),
            env_lo=None if series.env_lo is None else series.env_lo.tolist(),
            env_hi=None if series.env_hi is None else series.env_hi.tolist(),
        )
        return QQResponse(
            series=series_model,
            svg=render(series, "svg").decode() if "svg" in req.formats else None,
            csv=render(series, "csv").decode() if "csv" in req.formats else None,
        )

    return app
