"""Thin command-line client for the HTTP service.

Every subcommand builds one request, sends it to the service, and writes the
response to disk (or stdout).  With no --server the app runs in-process over
an ASGI test transport, so offline invocations need no running server and
stay byte-deterministic: same flags and seed always produce the same files.
Files are written only after a successful response; failures exit nonzero
without leaving partial output behind.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

SERVER_ENV_VAR = "COINTSPECTRA_SERVER"


def _client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=3600.0)
    import warnings

    with warnings.catch_warnings():
        # the in-process test transport import can warn about its own
        # httpx/starlette pairing; that is noise for CLI users
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

        from .service import create_app

    return TestClient(create_app())


def _post(ctx: click.Context, path: str, payload: dict) -> dict:
    with _client(ctx.obj) as client:
        response = client.post(path, json=payload)
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise click.ClickException(f"{path} failed ({response.status_code}): {detail}")
    return response.json()


def _dump_json(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        out.write_text(text)
        click.echo(f"wrote {out}", err=True)


def _parse_grid(spec: str) -> list[float]:
    """Accept "a..b", "a..b..step", or a comma-separated list."""
    if ".." in spec:
        parts = spec.split("..")
        if len(parts) == 2:
            start, stop = parts
            step = "0.05"
        elif len(parts) == 3:
            start, stop, step = parts
        else:
            raise click.BadParameter(f"cannot parse grid spec {spec!r}")
        start_f, stop_f, step_f = float(start), float(stop), float(step)
        if step_f <= 0 or stop_f < start_f:
            raise click.BadParameter(f"degenerate grid spec {spec!r}")
        n = int(round((stop_f - start_f) / step_f))
        return [start_f + i * step_f for i in range(n + 1)]
    return [float(tok) for tok in spec.split(",") if tok.strip()]


@click.group()
@click.option(
    "--server",
    envvar=SERVER_ENV_VAR,
    default=None,
    help="Base URL of a running service; omit to run the app in-process.",
)
@click.pass_context
def main(ctx: click.Context, server: str | None) -> None:
    """Canonical-correlation spectra of large VARs: analysis, simulation,
    limit-law tables, and Wachter qq plots."""
    ctx.obj = server


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--det", type=click.Choice(["none", "const", "rtrend"]), default="none")
@click.option("--rank", type=int, default=0, help="Null cointegration rank r.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--qq-svg", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--qq-csv", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--envelope", is_flag=True, help="Attach a null Monte Carlo envelope to the qq plot.")
@click.option("--reps", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
def analyze(ctx, input_path, det, rank, out, qq_svg, qq_csv, envelope, reps, seed):
    """Analyze a CSV panel: rank-test report plus optional qq plot files."""
    csv_text = Path(input_path).read_text()
    report = _post(ctx, "/analyze", {"csv_text": csv_text, "det": det, "rank": rank})
    qq_payload = None
    if qq_svg or qq_csv:
        formats = [f for f, path in (("svg", qq_svg), ("csv", qq_csv)) if path]
        qq_payload = _post(
            ctx,
            "/qq",
            {
                "csv_text": csv_text,
                "det": det,
                "envelope": envelope,
                "reps": reps,
                "seed": seed,
                "formats": formats,
            },
        )
    _emit(_dump_json(report), out)
    if qq_svg:
        qq_svg.write_text(qq_payload["svg"])
        click.echo(f"wrote {qq_svg}", err=True)
    if qq_csv:
        qq_csv.write_text(qq_payload["csv"])
        click.echo(f"wrote {qq_csv}", err=True)


@main.command()
@click.option("--p", "p", required=True, type=int)
@click.option("--T", "t_obs", required=True, type=int)
@click.option("--reps", type=int, default=1000, show_default=True)
@click.option("--dgp", type=click.Choice(["rw", "ar1", "rw-const"]), default="rw", show_default=True)
@click.option("--rho", type=float, default=0.0, show_default=True, help="AR(1) coefficient.")
@click.option("--det", type=click.Choice(["none", "const", "rtrend"]), default="none")
@click.option("--rank", type=int, default=0)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.pass_context
def simulate(ctx, p, t_obs, reps, dgp, rho, det, rank, seed, fmt, out):
    """Monte Carlo simulation: per-index percentile bands and LR/(2p^2)."""
    payload = {
        "p": p,
        "T": t_obs,
        "reps": reps,
        "dgp": {"kind": dgp.replace("-", "_"), "rho": rho},
        "det": det,
        "rank": rank,
        "seed": seed,
    }
    summary = _post(ctx, "/simulate", payload)
    if fmt == "json":
        _emit(_dump_json(summary), out)
    else:
        levels = summary["percentile_levels"]
        header = "i," + ",".join(f"p{int(lv)}" for lv in levels)
        rows = [header]
        pct = summary["lambda_percentiles"]
        for i in range(summary["p"]):
            rows.append(
                f"{i + 1}," + ",".join(format(pct[k][i], ".17g") for k in range(len(levels)))
            )
        _emit("\n".join(rows) + "\n", out)


@main.command()
@click.option("--c", "c", type=float, default=None, help="Aspect ratio p/T.")
@click.option("--gamma1", type=float, default=None)
@click.option("--gamma2", type=float, default=None)
@click.option("--wn", is_flag=True, help="Use the white-noise limit law for the given c.")
@click.option("--quantiles", default=None, help='Grid spec "a..b[..step]" or comma list.')
@click.option("--lambdas", default=None, help="Evaluation points for pdf/cdf, same syntax.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.pass_context
def dist(ctx, c, gamma1, gamma2, wn, quantiles, lambdas, fmt, out):
    """Evaluate a Wachter limit law: support, atoms, quantiles, pdf/cdf."""
    payload = {
        "c": c,
        "white_noise": wn,
        "gamma1": gamma1,
        "gamma2": gamma2,
        "quantiles": _parse_grid(quantiles) if quantiles else [],
        "lambdas": _parse_grid(lambdas) if lambdas else [],
    }
    result = _post(ctx, "/dist", payload)
    if fmt == "json":
        _emit(_dump_json(result), out)
        return
    if result["quantile_rows"] and result["density_rows"]:
        raise click.ClickException("csv output supports one table; request only one of --quantiles/--lambdas")
    if result["quantile_rows"]:
        rows = ["q,quantile"] + [
            f'{format(r["q"], ".17g")},{format(r["value"], ".17g")}'
            for r in result["quantile_rows"]
        ]
    else:
        rows = ["lambda,pdf,cdf"] + [
            f'{format(r["lam"], ".17g")},{format(r["pdf"], ".17g")},{format(r["cdf"], ".17g")}'
            for r in result["density_rows"]
        ]
    _emit("\n".join(rows) + "\n", out)


@main.command()
@click.option("--c", "c", type=float, default=None, help="Aspect ratio p/T.")
@click.option("--p", "p", type=int, default=None)
@click.option("--T", "t_obs", type=int, default=None)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.pass_context
def centers(ctx, c, p, t_obs, out):
    """Centering constants, Bartlett factors, and transformed critical values."""
    result = _post(ctx, "/centers", {"c": c, "p": p, "T": t_obs})
    _emit(_dump_json(result), out)


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--det", type=click.Choice(["none", "const", "rtrend"]), default="none")
@click.option("--envelope", is_flag=True)
@click.option("--reps", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["svg", "csv", "json"]), default="svg", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.pass_context
def qq(ctx, input_path, det, envelope, reps, seed, fmt, out):
    """Wachter qq plot of a CSV panel against its null limit law."""
    payload = {
        "csv_text": Path(input_path).read_text(),
        "det": det,
        "envelope": envelope,
        "reps": reps,
        "seed": seed,
        "formats": [fmt] if fmt in ("svg", "csv") else [],
    }
    result = _post(ctx, "/qq", payload)
    if fmt == "json":
        _emit(_dump_json(result["series"]), out)
    else:
        _emit(result[fmt], out)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service with uvicorn."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main(sys.argv[1:])
