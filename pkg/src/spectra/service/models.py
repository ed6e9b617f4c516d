"""Request/response schemas for the spectrum service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from spectra.aim import AimConfig
from spectra.hdm import HdmConfig
from spectra.potential import PotentialParams
from spectra.report import SpectrumReport
from spectra.series import Precision


class ParamsModel(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    v0: float = Field(alias="V0")
    lam: float = Field(alias="lambda", gt=0, description="lambda must be positive")
    gamma: float
    ell: int = Field(default=0, ge=0)

    def to_params(self) -> PotentialParams:
        return PotentialParams(v0=self.v0, lam=self.lam, gamma=self.gamma, ell=self.ell)


class AimOverrides(BaseModel):
    model_config = ConfigDict(extra="forbid")

    x0: float = 0.0
    n_min: int = 8
    n_max: int = 330
    e_grid: int = 2000
    e_lo: Optional[float] = None
    e_hi: float = -1e-10
    stability_tol: float = 1e-10
    stability_runs: int = 3
    digits: int = 64
    series_len: Optional[int] = None

    def to_config(self) -> AimConfig:
        return AimConfig(
            x0=self.x0,
            n_min=self.n_min,
            n_max=self.n_max,
            e_grid=self.e_grid,
            e_lo=self.e_lo,
            e_hi=self.e_hi,
            stability_tol=self.stability_tol,
            stability_runs=self.stability_runs,
            precision=Precision(self.digits),
            series_len=self.series_len,
        )


class HdmOverrides(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    n_basis: int = Field(default=100, alias="N", ge=1)
    mu: Optional[float] = Field(default=None, gt=0)
    quadrature_n: Optional[int] = None
    z_override: Optional[float] = None

    def to_config(self) -> HdmConfig:
        return HdmConfig(
            n_basis=self.n_basis,
            mu=self.mu,
            quadrature_n=self.quadrature_n,
            z_override=self.z_override,
        )


class RunRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    method: Literal["aim", "hdm", "both"] = "both"
    params: ParamsModel
    aim: AimOverrides = Field(default_factory=AimOverrides)
    hdm: HdmOverrides = Field(default_factory=HdmOverrides)


class LevelModel(BaseModel):
    n: int
    E_aim: Optional[float] = None
    E_hdm: Optional[float] = None
    delta: Optional[float] = None


class RunResponse(BaseModel):
    params: ParamsModel
    methods: list[str]
    levels: list[LevelModel]
    meta: dict

    @classmethod
    def from_report(cls, report: SpectrumReport) -> "RunResponse":
        return cls(
            params=ParamsModel(
                V0=report.params.v0,
                **{"lambda": report.params.lam},
                gamma=report.params.gamma,
                ell=report.params.ell,
            ),
            methods=list(report.methods),
            levels=[
                LevelModel(n=row.n, E_aim=row.e_aim, E_hdm=row.e_hdm, delta=row.delta)
                for row in report.levels
            ],
            meta=report.meta,
        )

    def to_report(self) -> SpectrumReport:
        from spectra.report import LevelRow

        return SpectrumReport(
            self.params.to_params(),
            tuple(LevelRow(n=lv.n, e_aim=lv.E_aim, e_hdm=lv.E_hdm) for lv in self.levels),
            dict(self.meta),
        )


class TablesRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    methods: list[Literal["aim", "hdm"]] = ["aim", "hdm"]
    tolerance: Optional[float] = None
    columns: Optional[list[str]] = None


class CellModel(BaseModel):
    column: str
    method: str
    level: int
    reference: float
    computed: Optional[float]
    diff: float
    tolerance: float
    tolerance_kind: str
    ok: bool


class TablesResponse(BaseModel):
    ok: bool
    cells: list[CellModel]
    notes: list[str]
    text: str


class CurvesRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    params: ParamsModel
    r_max: float = Field(gt=0)
    points: int = Field(ge=2)
    which: Literal["V", "U", "both"] = "both"


class PlateauRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    params: ParamsModel
    hdm: HdmOverrides = Field(default_factory=HdmOverrides)
    mu_lo: Optional[float] = None
    mu_hi: Optional[float] = None
    steps: int = Field(default=40, ge=2)


class PlateauResponse(BaseModel):
    mu_grid: list[float]
    spectra: list[list[float]]
    ground_digits: list[int]
    window: Optional[tuple[float, float]]
    recommended_mu: Optional[float]
    no_plateau: bool
