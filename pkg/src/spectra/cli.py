"""Command-line client for the spectrum service.

Parses flags (plus an optional flat key=value config file), builds the
service request models, and executes them either in process (default) or
against a running server (--server URL).  Exit codes: 0 success, 2 validation
error, 3 convergence or tolerance failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import httpx
from fastapi import HTTPException
from pydantic import ValidationError

from spectra import __version__, report as report_mod
from spectra.service.app import (
    app as service_app,
    handle_curves,
    handle_plateau,
    handle_run,
    handle_tables,
)
from spectra.service.models import (
    AimOverrides,
    CurvesRequest,
    HdmOverrides,
    ParamsModel,
    PlateauRequest,
    RunRequest,
    RunResponse,
    TablesRequest,
    TablesResponse,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CONVERGENCE = 3

_CONFIG_KEYS = {
    "V0", "lambda", "gamma", "ell", "method", "N", "mu", "n_max", "digits",
    "format", "out", "x0", "e_grid", "e_lo", "e_hi", "quadrature_n",
}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_config(path: str) -> dict:
    values: dict = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise CliError(f"{path}:{lineno}: expected key=value", EXIT_VALIDATION)
                key, value = (s.strip() for s in line.split("=", 1))
                if key not in _CONFIG_KEYS:
                    raise CliError(f"{path}:{lineno}: unknown key {key!r}", EXIT_VALIDATION)
                values[key] = value
    except OSError as exc:
        raise CliError(f"cannot read config file: {exc}", EXIT_VALIDATION) from exc
    return values


def _merged(args: argparse.Namespace, config: dict, key: str, cast=str, default=None):
    flag = getattr(args, key.replace("-", "_"), None)
    if flag is not None:
        return flag
    if key in config:
        try:
            return cast(config[key])
        except ValueError as exc:
            raise CliError(f"config value for {key!r} is invalid: {exc}", EXIT_VALIDATION) from exc
    return default


class Client:
    """Executes service requests in process or over HTTP."""

    def __init__(self, server: str | None = None):
        self.server = server.rstrip("/") if server else None

    def _remote(self, path: str, payload: dict):
        resp = httpx.post(f"{self.server}{path}", json=payload, timeout=None)
        if resp.status_code == 422 or resp.status_code == 400:
            raise CliError(_detail(resp), EXIT_VALIDATION)
        if resp.status_code == 409:
            raise CliError(_detail(resp), EXIT_CONVERGENCE)
        resp.raise_for_status()
        return resp

    def run(self, req: RunRequest) -> RunResponse:
        if self.server:
            resp = self._remote("/run", req.model_dump(by_alias=True))
            return RunResponse.model_validate(resp.json())
        return _call(handle_run, req)

    def tables(self, req: TablesRequest) -> TablesResponse:
        if self.server:
            resp = self._remote("/tables", req.model_dump())
            return TablesResponse.model_validate(resp.json())
        return _call(handle_tables, req)

    def curves(self, req: CurvesRequest) -> str:
        if self.server:
            return self._remote("/curves", req.model_dump(by_alias=True)).text
        return _call(handle_curves, req)

    def plateau(self, req: PlateauRequest):
        if self.server:
            return self._remote("/plateau", req.model_dump(by_alias=True)).json()
        return _call(handle_plateau, req).model_dump()


def _detail(resp) -> str:
    try:
        return str(resp.json().get("detail", resp.text))
    except Exception:
        return resp.text


def _call(handler, req):
    try:
        return handler(req)
    except HTTPException as exc:
        code = EXIT_VALIDATION if exc.status_code in (400, 422) else EXIT_CONVERGENCE
        raise CliError(str(exc.detail), code) from exc


def _build_params(args, config) -> ParamsModel:
    v0 = _merged(args, config, "V0", float)
    lam = _merged(args, config, "lambda", float)
    gamma = _merged(args, config, "gamma", float)
    ell = _merged(args, config, "ell", int, 0)
    missing = [name for name, val in (("--V0", v0), ("--lambda", lam), ("--gamma", gamma)) if val is None]
    if missing:
        raise CliError(f"missing required parameter(s): {', '.join(missing)}", EXIT_VALIDATION)
    try:
        return ParamsModel(V0=v0, **{"lambda": lam}, gamma=gamma, ell=ell)
    except ValidationError as exc:
        raise CliError(_first_error(exc), EXIT_VALIDATION) from exc


def _first_error(exc: ValidationError) -> str:
    err = exc.errors()[0]
    loc = ".".join(str(p) for p in err["loc"]) or "request"
    msg = err["msg"]
    if loc.split(".")[-1] in ("lam", "lambda") and "greater than" in msg:
        return "lambda must be positive"
    return f"{loc}: {msg}"


def _write_output(text: str, out: str | None) -> None:
    if out and out != "-":
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_run(args) -> int:
    config = _read_config(args.config) if args.config else {}
    params = _build_params(args, config)
    method = _merged(args, config, "method", str, "both")
    try:
        aim = AimOverrides(
            x0=_merged(args, config, "x0", float, 0.0),
            n_max=_merged(args, config, "n_max", int, 330),
            e_grid=_merged(args, config, "e_grid", int, 2000),
            e_lo=_merged(args, config, "e_lo", float),
            e_hi=_merged(args, config, "e_hi", float, -1e-10),
            digits=_merged(args, config, "digits", int, 64),
        )
        hdm = HdmOverrides(
            N=_merged(args, config, "N", int, 100),
            mu=_merged(args, config, "mu", float),
            quadrature_n=_merged(args, config, "quadrature_n", int),
        )
        req = RunRequest(method=method, params=params, aim=aim, hdm=hdm)
    except ValidationError as exc:
        raise CliError(_first_error(exc), EXIT_VALIDATION)
    response = Client(args.server).run(req)
    fmt = _merged(args, config, "format", str, "table")
    rep = response.to_report()
    if fmt == "json":
        text = report_mod.to_json(rep)
    elif fmt == "csv":
        text = report_mod.to_csv(rep)
    elif fmt == "table":
        text = report_mod.to_table(rep)
    else:
        raise CliError(f"unknown format {fmt!r}", EXIT_VALIDATION)
    _write_output(text, _merged(args, config, "out", str))
    return EXIT_OK


def _cmd_tables(args) -> int:
    methods = ["aim", "hdm"] if args.method == "both" else [args.method]
    try:
        req = TablesRequest(
            methods=methods,
            tolerance=args.tolerance,
            columns=args.columns.split(",") if args.columns else None,
        )
    except ValidationError as exc:
        raise CliError(_first_error(exc), EXIT_VALIDATION)
    response = Client(args.server).tables(req)
    _write_output(response.text, args.out)
    return EXIT_OK if response.ok else EXIT_CONVERGENCE


def _cmd_curves(args) -> int:
    config = _read_config(args.config) if args.config else {}
    params = _build_params(args, config)
    try:
        req = CurvesRequest(params=params, r_max=args.r_max, points=args.points, which=args.which)
    except ValidationError as exc:
        raise CliError(_first_error(exc), EXIT_VALIDATION)
    text = Client(args.server).curves(req)
    _write_output(text, _merged(args, config, "out", str))
    return EXIT_OK


def _cmd_plateau(args) -> int:
    config = _read_config(args.config) if args.config else {}
    params = _build_params(args, config)
    try:
        hdm = HdmOverrides(
            N=_merged(args, config, "N", int, 100),
            quadrature_n=_merged(args, config, "quadrature_n", int),
        )
        req = PlateauRequest(
            params=params, hdm=hdm, mu_lo=args.mu_lo, mu_hi=args.mu_hi, steps=args.steps
        )
    except ValidationError as exc:
        raise CliError(_first_error(exc), EXIT_VALIDATION)
    doc = Client(args.server).plateau(req)
    fmt = _merged(args, config, "format", str, "table")
    if fmt == "json":
        text = json.dumps(doc, indent=2) + "\n"
    else:
        lines = [f"{'mu':>12}  ground-state digits vs next point"]
        digits = doc["ground_digits"]
        for i, mu in enumerate(doc["mu_grid"]):
            mark = str(digits[i]) if i < len(digits) else "-"
            lines.append(f"{mu:12.6f}  {mark}")
        lines.append(f"window: {doc['window']}")
        lines.append(f"recommended_mu: {doc['recommended_mu']}")
        text = "\n".join(lines) + "\n"
        if doc["no_plateau"]:
            text += "no plateau of stability found\n"
    _write_output(text, _merged(args, config, "out", str))
    return EXIT_OK if not doc["no_plateau"] else EXIT_CONVERGENCE


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run(service_app, host=args.host, port=args.port)
    return EXIT_OK


def _add_common(sub, params=True):
    sub.add_argument("--server", help="base URL of a running service (default: in-process)")
    sub.add_argument("--config", help="flat key=value config file")
    sub.add_argument("--out", help="output path (default: stdout)")
    if params:
        sub.add_argument("--V0", type=float, dest="V0")
        sub.add_argument("--lambda", type=float, dest="lambda")
        sub.add_argument("--gamma", type=float)
        sub.add_argument("--ell", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectra", description=__doc__)
    parser.add_argument("--version", action="version", version=f"spectra {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    run_p = subs.add_parser("run", help="compute a spectrum with either or both engines")
    _add_common(run_p)
    run_p.add_argument("--method", choices=["aim", "hdm", "both"])
    run_p.add_argument("--N", type=int, dest="N", help="diagonalization basis size")
    run_p.add_argument("--mu", type=float, help="basis scale (default: from plateau scan)")
    run_p.add_argument("--n-max", type=int, dest="n_max", help="iteration depth")
    run_p.add_argument("--digits", type=int, help="working precision in decimal digits")
    run_p.add_argument("--x0", type=float, help="expansion point for the iteration engine")
    run_p.add_argument("--e-grid", type=int, dest="e_grid")
    run_p.add_argument("--e-lo", type=float, dest="e_lo")
    run_p.add_argument("--e-hi", type=float, dest="e_hi")
    run_p.add_argument("--quadrature-n", type=int, dest="quadrature_n")
    run_p.add_argument("--format", choices=["table", "csv", "json"])
    run_p.set_defaults(func=_cmd_run)

    tab_p = subs.add_parser("tables", help="reproduce the published reference tables")
    _add_common(tab_p, params=False)
    tab_p.add_argument("--method", choices=["aim", "hdm", "both"], default="both")
    tab_p.add_argument("--tolerance", type=float, help="override every per-cell tolerance")
    tab_p.add_argument("--columns", help="comma-separated column labels to check")
    tab_p.set_defaults(func=_cmd_tables)

    cur_p = subs.add_parser("curves", help="emit V(r) and U(r) samples as CSV")
    _add_common(cur_p)
    cur_p.add_argument("--r-max", type=float, dest="r_max", required=True)
    cur_p.add_argument("--points", type=int, default=200)
    cur_p.add_argument("--which", choices=["V", "U", "both"], default="both")
    cur_p.set_defaults(func=_cmd_curves)

    plat_p = subs.add_parser("plateau", help="scan the basis-scale plateau of stability")
    _add_common(plat_p)
    plat_p.add_argument("--N", type=int, dest="N")
    plat_p.add_argument("--mu-lo", type=float, dest="mu_lo")
    plat_p.add_argument("--mu-hi", type=float, dest="mu_hi")
    plat_p.add_argument("--steps", type=int, default=40)
    plat_p.add_argument("--format", choices=["table", "json"])
    plat_p.set_defaults(func=_cmd_plateau)

    srv_p = subs.add_parser("serve", help="start the HTTP service")
    srv_p.add_argument("--host", default="127.0.0.1")
    srv_p.add_argument("--port", type=int, default=8000)
    srv_p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except httpx.HTTPError as exc:
        print(f"error: service request failed: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
