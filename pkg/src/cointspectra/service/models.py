"""Pydantic request/response models for the HTTP service.

These are the wire contract: every CLI output file is one of the response
models serialized as JSON (or a string field of one, for SVG/CSV payloads).
Infinities never cross the wire; an infinite LR statistic travels as
lr = null with lr_infinite = true.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

DetOption = Literal["none", "const", "rtrend"]
DgpKind = Literal["rw", "ar1", "rw_const"]


class DgpModel(BaseModel):
    kind: DgpKind = "rw"
    rho: float = 0.0


class AnalyzeRequest(BaseModel):
    csv_text: str
    det: DetOption = "none"
    rank: int = Field(default=0, ge=0)
    include_spectrum: bool = True


class SpectrumModel(BaseModel):
    p: int
    T: int
    c_hat: float
    lambdas_desc: list[float]


class TestReportModel(BaseModel):
    r: int
    p: int
    T: int
    c_hat: float
    lr: Optional[float]
    lr_infinite: bool
    pb: float
    lr_over_tp: Optional[float]
    pb_over_tp: float
    lr_over_2p2: Optional[float]
    gp_average: Optional[float]
    gp_average_infinite: bool
    lr_center_sim: Optional[float]
    pb_center_sim: float
    lr_center_note: str
    bartlett_theoretical: Optional[float]
    bartlett_jhf: float
    lr_corrected: Optional[float]


class AnalyzeResponse(BaseModel):
    report: TestReportModel
    spectrum: Optional[SpectrumModel] = None
    variable_names: Optional[list[str]] = None


class SimulateRequest(BaseModel):
    p: int = Field(ge=1)
    T: int = Field(ge=3)
    reps: int = Field(ge=1)
    dgp: DgpModel = DgpModel()
    det: DetOption = "none"
    rank: int = Field(default=0, ge=0)
    seed: int = Field(default=0, ge=0)


class LrScaledModel(BaseModel):
    percentile_levels: list[float]
    percentiles: Optional[list[float]]
    mean: Optional[float]
    n_infinite: int


class McSummaryModel(BaseModel):
    p: int
    T: int
    reps: int
    seed: int
    dgp: DgpModel
    det: DetOption
    rank: int
    percentile_levels: list[float]
    lambda_percentiles: list[list[float]]
    lr_scaled: LrScaledModel


class DistRequest(BaseModel):
    c: Optional[float] = None
    white_noise: bool = False
    gamma1: Optional[float] = None
    gamma2: Optional[float] = None
    quantiles: list[float] = Field(default_factory=list)
    lambdas: list[float] = Field(default_factory=list)

    @model_validator(mode="after")
    def _one_parameterization(self) -> "DistRequest":
        by_c = self.c is not None
        by_gamma = self.gamma1 is not None or self.gamma2 is not None
        if by_c == by_gamma:
            raise ValueError("provide either c or the pair (gamma1, gamma2)")
        if by_gamma and (self.gamma1 is None or self.gamma2 is None):
            raise ValueError("gamma1 and gamma2 must be given together")
        if self.white_noise and not by_c:
            raise ValueError("white_noise applies only to the c parameterization")
        return self


class QuantileRow(BaseModel):
    q: float
    value: float


class DensityRow(BaseModel):
    lam: float
    pdf: float
    cdf: float


class DistResponse(BaseModel):
    gamma1: float
    gamma2: float
    b_minus: float
    b_plus: float
    atom0: float
    atom1: float
    quantile_rows: list[QuantileRow]
    density_rows: list[DensityRow]


class CentersRequest(BaseModel):
    c: Optional[float] = None
    p: Optional[int] = Field(default=None, ge=1)
    T: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _one_parameterization(self) -> "CentersRequest":
        by_c = self.c is not None
        by_pt = self.p is not None or self.T is not None
        if by_c == by_pt:
            raise ValueError("provide either c or the pair (p, T)")
        if by_pt and (self.p is None or self.T is None):
            raise ValueError("p and T must be given together")
        return self


class CentersResponse(BaseModel):
    c: float
    p: Optional[int]
    T: Optional[int]
    lr_center_sim: Optional[float]
    lr_center_note: str
    pb_center_sim: float
    mean_identity: float
    mean_neglog: Optional[float]
    bartlett_theoretical: Optional[float]
    bartlett_jhf: float
    cv_unadjusted: Optional[float]
    cv_transformed: Optional[float]


class QQRequest(BaseModel):
    csv_text: str
    det: DetOption = "none"
    envelope: bool = False
    reps: int = Field(default=1000, ge=1)
    seed: int = Field(default=0, ge=0)
    formats: list[Literal["svg", "csv"]] = Field(default_factory=lambda: ["svg"])


class QQSeriesModel(BaseModel):
    p: int
    T: int
    c_hat: float
    gamma1: float
    gamma2: float
    q: list[float]
    theoretical: list[float]
    empirical: list[float]
    env_lo: Optional[list[float]]
    env_hi: Optional[list[float]]


class QQResponse(BaseModel):
    series: QQSeriesModel
    svg: Optional[str] = None
    csv: Optional[str] = None


class HealthResponse(BaseModel):
    status: str
    version: str
