"""Embedded reference spectra and the calibrated reproduction recipe."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from spectra.potential import PotentialParams


@dataclass(frozen=True)
class GoldenColumn:
    """One published parameter column with its per-method rows."""

    label: str
    params: PotentialParams
    aim: tuple[float, ...]
    ppsm: tuple[float, ...]
    hdm: tuple[float, ...]
    hdm_mu: float
    table: int
    known_deltas: dict[int, float]

    @property
    def n_levels(self) -> int:
        return len(self.hdm)


def _load() -> dict:
    with resources.files("spectra").joinpath("data/golden.json").open() as fh:
        return json.load(fh)


_DOC = _load()

AIM_N: int = _DOC["aim_n"]
HDM_N_BASIS: int = _DOC["hdm_n_basis"]

# acceptance tolerances for table reproduction
HDM_TOL = {1: 1e-8, 2: 1e-9}
AIM_REL_TOL = 1e-6  # levels with |E| > AIM_DEEP_CUT
AIM_ABS_TOL = 1e-4  # shallower levels
AIM_DEEP_CUT = 0.05


def columns() -> tuple[GoldenColumn, ...]:
    out = []
    t1 = _DOC["table1"]
    for col in t1["columns"]:
        out.append(
            GoldenColumn(
                label=col["label"],
                params=PotentialParams(v0=t1["v0"], lam=t1["lam"], gamma=col["gamma"]),
                aim=tuple(col["aim"]),
                ppsm=tuple(col["ppsm"]),
                hdm=tuple(col["hdm"]),
                hdm_mu=col["hdm_mu"],
                table=1,
                known_deltas={int(k): v for k, v in col["known_deltas"].items()},
            )
        )
    t2 = _DOC["table2"]
    for col in t2["columns"]:
        out.append(
            GoldenColumn(
                label=col["label"],
                params=PotentialParams(v0=col["v0"], lam=t2["lam"], gamma=t2["gamma"]),
                aim=tuple(col["aim"]),
                ppsm=tuple(col["ppsm"]),
                hdm=tuple(col["hdm"]),
                hdm_mu=col["hdm_mu"],
                table=2,
                known_deltas={int(k): v for k, v in col["known_deltas"].items()},
            )
        )
    return tuple(out)


def aim_tolerance(reference: float) -> tuple[float, str]:
    """(absolute tolerance, kind) for one published aim cell."""
    if abs(reference) > AIM_DEEP_CUT:
        return AIM_REL_TOL * abs(reference), "rel 1e-6"
    return AIM_ABS_TOL, "abs 1e-4"
