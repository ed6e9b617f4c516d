"""Spectrum reports: per-method level lists, comparison deltas, serialization.

Output formatting is deterministic by construction: energies are printed with
12 significant digits in ``E`` notation, lines end with LF, and the JSON text
is built by a fixed-order writer rather than a generic encoder, so identical
runs produce byte-identical documents.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from spectra.potential import PotentialParams

SIG_DIGITS = 12


def fmt_energy(value: float) -> str:
    """Fixed 12-significant-digit scientific notation."""
    return f"{value:.{SIG_DIGITS - 1}E}"


@dataclass(frozen=True)
class LevelRow:
    """One bound level: energies per method, aligned by ascending-energy index."""

    n: int
    e_aim: float | None = None
    e_hdm: float | None = None

    @property
    def delta(self) -> float | None:
        """Absolute AIM-HDM difference, present iff both methods ran."""
        if self.e_aim is None or self.e_hdm is None:
            return None
        return abs(self.e_aim - self.e_hdm)

    @property
    def delta_rel(self) -> float | None:
        d = self.delta
        if d is None:
            return None
        scale = max(abs(self.e_aim), abs(self.e_hdm))
        return d / scale if scale else 0.0


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalue lists for one or both methods plus convergence metadata."""

    params: PotentialParams
    levels: tuple[LevelRow, ...]
    meta: dict = field(default_factory=dict)

    @property
    def methods(self) -> tuple[str, ...]:
        names = []
        if any(row.e_aim is not None for row in self.levels):
            names.append("aim")
        if any(row.e_hdm is not None for row in self.levels):
            names.append("hdm")
        return tuple(names)

    def energies(self, method: str) -> list[float]:
        key = {"aim": "e_aim", "hdm": "e_hdm"}[method]
        return [getattr(row, key) for row in self.levels if getattr(row, key) is not None]


def combine(aim: SpectrumReport | None, hdm: SpectrumReport | None) -> SpectrumReport:
    """Merge single-method reports, aligning levels by ascending energy index."""
    if aim is None and hdm is None:
        raise ValueError("nothing to combine")
    if aim is None:
        return hdm
    if hdm is None:
        return aim
    e_aim = aim.energies("aim")
    e_hdm = hdm.energies("hdm")
    rows = tuple(
        LevelRow(
            n=i,
            e_aim=e_aim[i] if i < len(e_aim) else None,
            e_hdm=e_hdm[i] if i < len(e_hdm) else None,
        )
        for i in range(max(len(e_aim), len(e_hdm)))
    )
    meta = dict(hdm.meta)
    meta.update(aim.meta)
    return SpectrumReport(aim.params, rows, meta)


def _json_scalar(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            return "null"
        return fmt_energy(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_json_scalar(v) for v in value) + "]"
    if isinstance(value, dict):
        items = ",".join(f"{json.dumps(k)}:{_json_scalar(v)}" for k, v in value.items())
        return "{" + items + "}"
    raise TypeError(f"cannot serialize {type(value)!r}")


def to_json(report: SpectrumReport) -> str:
    """Deterministic JSON document (LF newline at end)."""
    p = report.params
    parts = []
    parts.append('{"params":{')
    parts.append(
        f'"V0":{_json_scalar(p.v0)},"lambda":{_json_scalar(p.lam)},'
        f'"gamma":{_json_scalar(p.gamma)},"ell":{p.ell}}},'
    )
    parts.append('"methods":[' + ",".join(json.dumps(m) for m in report.methods) + "],")
    level_items = []
    for row in report.levels:
        fields = [f'"n":{row.n}']
        if row.e_aim is not None:
            fields.append(f'"E_aim":{fmt_energy(row.e_aim)}')
        if row.e_hdm is not None:
            fields.append(f'"E_hdm":{fmt_energy(row.e_hdm)}')
        if row.delta is not None:
            fields.append(f'"delta":{fmt_energy(row.delta)}')
        level_items.append("{" + ",".join(fields) + "}")
    parts.append('"levels":[' + ",".join(level_items) + "],")
    parts.append('"meta":' + _json_scalar(report.meta) + "}")
    return "".join(parts) + "\n"


def from_json(text: str) -> SpectrumReport:
    """Parse a document produced by to_json back into a report."""
    doc = json.loads(text)
    params = PotentialParams(
        v0=doc["params"]["V0"],
        lam=doc["params"]["lambda"],
        gamma=doc["params"]["gamma"],
        ell=doc["params"]["ell"],
    )
    rows = tuple(
        LevelRow(n=item["n"], e_aim=item.get("E_aim"), e_hdm=item.get("E_hdm"))
        for item in doc["levels"]
    )
    return SpectrumReport(params, rows, doc.get("meta", {}))


def to_csv(report: SpectrumReport) -> str:
    """RFC-4180-style CSV with header row; energies at 12 significant digits."""
    has_aim = "aim" in report.methods
    has_hdm = "hdm" in report.methods
    cols = ["n"]
    if has_aim:
        cols.append("E_aim")
    if has_hdm:
        cols.append("E_hdm")
    if has_aim and has_hdm:
        cols.append("delta")
    lines = [",".join(cols)]
    for row in report.levels:
        cells = [str(row.n)]
        if has_aim:
            cells.append(fmt_energy(row.e_aim) if row.e_aim is not None else "")
        if has_hdm:
            cells.append(fmt_energy(row.e_hdm) if row.e_hdm is not None else "")
        if has_aim and has_hdm:
            cells.append(fmt_energy(row.delta) if row.delta is not None else "")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def to_table(report: SpectrumReport) -> str:
    """Human-readable side-by-side table."""
    p = report.params
    has_aim = "aim" in report.methods
    has_hdm = "hdm" in report.methods
    header = f"V0 = {p.v0:g}, lambda = {p.lam:g}, gamma = {p.gamma:g}, ell = {p.ell}"
    lines = [header]
    cols = ["n".rjust(3)]
    if has_aim:
        cols.append("E_aim".rjust(20))
    if has_hdm:
        cols.append("E_hdm".rjust(20))
    if has_aim and has_hdm:
        cols.append("|delta|".rjust(12))
    lines.append("  ".join(cols))
    for row in report.levels:
        cells = [str(row.n).rjust(3)]
        if has_aim:
            cells.append((fmt_energy(row.e_aim) if row.e_aim is not None else "-").rjust(20))
        if has_hdm:
            cells.append((fmt_energy(row.e_hdm) if row.e_hdm is not None else "-").rjust(20))
        if has_aim and has_hdm:
            cells.append((f"{row.delta:.3E}" if row.delta is not None else "-").rjust(12))
        lines.append("  ".join(cells))
    for key in ("mu", "plateau_window", "aim_n_max", "warnings"):
        if key in report.meta:
            lines.append(f"{key}: {report.meta[key]}")
    return "\n".join(lines) + "\n"
