"""Command-line front end.

A thin client over the service layer: arguments are packed into the same
request models the HTTP endpoints accept, and handled either in-process
(default; output is deterministic and exit codes are meaningful) or by a
running server via --url.

Exit codes: 0 verified/ok, 2 mismatch, 1 usage or configuration error.
"""

from __future__ import annotations

import json
import os
import sys
from typing import Optional

import click

from . import identities
from .graphs import GraphError
from .partitions import PartitionError
from .series import SeriesError, render_monomial
from .service import (
    DEFAULT_Q_ORDER,
    GraphRequest,
    RequestError,
    SeriesRequest,
    VerifyRequest,
    handle_graph,
    handle_series,
    handle_verify,
    identity_catalogue,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2


def _default_z_order() -> int:
    env = os.environ.get("VERTEXID_DEFAULT_ORDER")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            click.echo(f"warning: ignoring bad VERTEXID_DEFAULT_ORDER={env!r}", err=True)
    return 4


def _post(url: str, path: str, payload: dict) -> dict:
    import httpx

    resp = httpx.post(url.rstrip("/") + path, json=payload, timeout=None)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except Exception:
            detail = resp.text
        raise RequestError(f"server returned {resp.status_code}: {detail}")
    return resp.json()


def _common_options(fn):
    fn = click.option("--z-order", type=int, default=None, help="z-degree per active variable")(fn)
    fn = click.option("--q-order", type=int, default=DEFAULT_Q_ORDER, show_default=True,
                      help="q-order Q; the u-window becomes [-2Q, 2Q]")(fn)
    fn = click.option("--z-total", type=int, default=None, help="cap on the total z-degree")(fn)
    fn = click.option("--json", "as_json", is_flag=True, help="machine-readable output")(fn)
    fn = click.option("--url", default=None, help="send the request to a running server")(fn)
    return fn


@click.group()
def main() -> None:
    """Exact q-series identity verification engine."""


@main.command("list")
@click.option("--json", "as_json", is_flag=True)
def list_cmd(as_json: bool) -> None:
    """List registered identities."""
    infos = identity_catalogue()
    if as_json:
        click.echo(json.dumps([i.model_dump() for i in infos], indent=2))
        return
    for i in infos:
        ring = "Q" + (("[" + ",".join(i.ring) + "]") if i.ring else "")
        click.echo(f"{i.name:22} {ring:10} z-vars={i.z_count}  {i.description}")


@main.command()
@click.argument("name")
@_common_options
@click.option("--theta", default=None, help="rational theta sample for no-theta, e.g. 5/3")
@click.option("--max-size", type=int, default=None, help="partition-size bound for family sweeps")
@click.option("--threads", type=int, default=1, show_default=True,
              help="parallel member checks (result is thread-count independent)")
@click.option("--deterministic", is_flag=True, help="zero out duration_ms in JSON output")
def verify(name, z_order, q_order, z_total, as_json, url, theta, max_size, threads, deterministic):
    """Verify a registered identity window-wise and report the verdict."""
    req = VerifyRequest(
        name=name,
        z_order=z_order if z_order is not None else _default_z_order(),
        q_order=q_order,
        z_total=z_total,
        theta=theta,
        max_size=max_size,
        threads=threads,
        deterministic=deterministic,
    )
    try:
        if url:
            data = _post(url, "/verify", req.model_dump())
        else:
            data = handle_verify(req).model_dump()
        if name == "four-loop" and not url:
            # printed-form reports are diagnostics, not part of the verdict
            from .service import _spec_for_identity

            for aux in identities.four_loop_printed_reports(_spec_for_identity(req)):
                click.echo(aux.render(), err=True)
    except identities.UnknownIdentityError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    except (RequestError, SeriesError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)

    if as_json:
        payload = dict(data)
        payload.pop("detail", None)
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
    else:
        click.echo(_render_verify(data))
    sys.exit(EXIT_OK if data["verdict"] == "match" else EXIT_MISMATCH)


def _render_verify(data: dict) -> str:
    lines = [f"identity {data['name']}: {data['verdict'].upper()}"]
    mism = data.get("mismatch")
    if mism:
        key = (mism["monomial"]["u_exp"], *mism["monomial"]["z_exps"])
        lines.append(
            f"  first mismatch at {render_monomial(key)}: lhs={mism['lhs']} rhs={mism['rhs']}"
        )
    if data.get("detail"):
        lines.append(f"  {data['detail']}")
    w = data["window"]
    lines.append(
        f"  window u={w['u_window']} z={w['z_windows']}"
        + (f" total<={w['z_total']}" if w.get("z_total") is not None else "")
        + f"  ({data['duration_ms']:.0f} ms)"
    )
    return "\n".join(lines)


@main.command()
@click.argument("expr")
@_common_options
@click.option("--theta", default=None, help="rational theta for no-theta builders")
def series(expr, z_order, q_order, z_total, as_json, url, theta):
    """Print a series: lhs:<name>, rhs:<name>, vertex:<a;b;c> or schur:<parts>."""
    req = SeriesRequest(
        expr=expr,
        z_order=z_order if z_order is not None else _default_z_order(),
        q_order=q_order,
        z_total=z_total,
        theta=theta,
    )
    try:
        if url:
            data = _post(url, "/series", req.model_dump())
        else:
            data = handle_series(req).model_dump()
    except (identities.UnknownIdentityError, RequestError, SeriesError, PartitionError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    if as_json:
        click.echo(json.dumps(data, indent=2, sort_keys=True))
    else:
        click.echo(data["text"])
    sys.exit(EXIT_OK)


@main.command()
@click.argument("graph_ref")
@_common_options
@click.option("--check-rotations", is_flag=True, help="assert start-slot invariance")
def graph(graph_ref, z_order, q_order, z_total, as_json, url, check_rotations):
    """Evaluate a built-in graph by name or a graph JSON file by path."""
    req = GraphRequest(
        graph=graph_ref,
        z_order=z_order if z_order is not None else _default_z_order(),
        q_order=q_order,
        z_total=z_total,
        check_rotations=check_rotations,
    )
    try:
        if url:
            data = _post(url, "/graph", req.model_dump())
        else:
            data = handle_graph(req).model_dump()
    except (GraphError, RequestError, SeriesError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    except FileNotFoundError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    if as_json:
        click.echo(json.dumps(data, indent=2, sort_keys=True))
    else:
        click.echo(data["text"])
        if data.get("rotations_ok") is not None:
            click.echo(
                "rotations: ok" if data["rotations_ok"] else f"rotations: FAILED at {data['rotation_failure']}",
                err=True,
            )
    if check_rotations and data.get("rotations_ok") is False:
        sys.exit(EXIT_MISMATCH)
    sys.exit(EXIT_OK)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
