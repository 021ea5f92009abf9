"""HTTP facade over the verification engine.

The FastAPI app exposes identity verification, series inspection and graph
evaluation; the CLI drives the same handler functions in-process, so both
front ends share one request/response vocabulary.

Verification jobs are pure CPU work on immutable inputs, so the handlers are
plain synchronous functions; concurrent requests are safe.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import identities
from .graphs import BUILTIN_GRAPHS, Graph, GraphError, builtin, check_rotations, evaluate
from .partitions import Partition, PartitionError
from .series import MultiSeries, SeriesError, TruncationSpec, render_series
from .symfunc import principal_schur
from .vertex import vertex

DEFAULT_Z_ORDER = 4
DEFAULT_Q_ORDER = 8


# -- models -------------------------------------------------------------------


class WindowModel(BaseModel):
    """Explicit truncation window; mirrors TruncationSpec."""

    u_window: tuple[int, int]
    z_windows: list[tuple[int, int]] = Field(default_factory=list)
    z_total: Optional[int] = None

    def to_spec(self) -> TruncationSpec:
        return TruncationSpec(
            self.u_window[0],
            self.u_window[1],
            tuple((lo, hi) for lo, hi in self.z_windows),
            self.z_total,
        )

    @classmethod
    def from_spec(cls, spec: TruncationSpec) -> "WindowModel":
        return cls(
            u_window=(spec.u_lo, spec.u_hi),
            z_windows=[(lo, hi) for lo, hi in spec.z_windows],
            z_total=spec.z_total,
        )


class VerifyRequest(BaseModel):
    name: str
    z_order: int = DEFAULT_Z_ORDER
    q_order: int = DEFAULT_Q_ORDER
    z_total: Optional[int] = None
    window: Optional[WindowModel] = None  # overrides the order shorthands
    theta: Optional[str] = None  # rational literal like "5/3", no-theta only
    max_size: Optional[int] = None  # family sweeps (cyclic-schur, hook-product)
    threads: int = 1
    deterministic: bool = False


class MismatchModel(BaseModel):
    monomial: dict
    lhs: list[dict]
    rhs: list[dict]


class VerifyResponse(BaseModel):
    name: str
    window: dict
    verdict: Literal["match", "mismatch"]
    mismatch: Optional[MismatchModel] = None
    duration_ms: float
    detail: str = ""


class SeriesRequest(BaseModel):
    expr: str  # lhs:<identity> | rhs:<identity> | vertex:<a;b;c> | schur:<parts>
    z_order: int = DEFAULT_Z_ORDER
    q_order: int = DEFAULT_Q_ORDER
    z_total: Optional[int] = None
    window: Optional[WindowModel] = None
    theta: Optional[str] = None


class SeriesResponse(BaseModel):
    expr: str
    ring: list[str]
    truncation: dict
    terms: list[dict]
    text: str


class GraphRequest(BaseModel):
    graph: str | dict  # builtin name or inline JSON object
    z_order: int = DEFAULT_Z_ORDER
    q_order: int = DEFAULT_Q_ORDER
    z_total: Optional[int] = None
    window: Optional[WindowModel] = None
    check_rotations: bool = False


class GraphResponse(BaseModel):
    truncation: dict
    terms: list[dict]
    text: str
    rotations_ok: Optional[bool] = None
    rotation_failure: Optional[str] = None


class IdentityInfo(BaseModel):
    name: str
    description: str
    ring: list[str]
    z_count: int


class RequestError(ValueError):
    pass


# -- handlers (shared by HTTP and CLI) -----------------------------------------


def _spec_for_identity(req: VerifyRequest) -> TruncationSpec:
    if req.window is not None:
        return req.window.to_spec()
    ident = identities.get(req.name)
    windows = tuple(
        (-req.z_order, req.z_order) if (i + 1) in ident.z_laurent else (0, req.z_order)
        for i in range(ident.z_count)
    )
    z_total = req.z_total if req.z_total is not None else ident.default_z_total
    return TruncationSpec(-2 * req.q_order, 2 * req.q_order, windows, z_total)


def _params_from(req: VerifyRequest) -> dict:
    params: dict[str, Any] = {}
    if req.theta is not None:
        try:
            th = Fraction(req.theta)
        except (ValueError, ZeroDivisionError) as exc:
            raise RequestError(f"bad theta literal {req.theta!r}") from exc
        params["theta"] = th
        params["thetas"] = (th,)
    if req.max_size is not None:
        params["max_size"] = req.max_size
    return params


def handle_verify(req: VerifyRequest) -> VerifyResponse:
    spec = _spec_for_identity(req)
    report = identities.verify(req.name, spec, _params_from(req), threads=req.threads)
    payload = report.to_json()
    if req.deterministic:
        payload["duration_ms"] = 0.0
    return VerifyResponse(**payload, detail=report.detail)


def _general_spec(z_count: int, z_order: int, q_order: int, z_total: Optional[int],
                  window: Optional[WindowModel]) -> TruncationSpec:
    if window is not None:
        return window.to_spec()
    return TruncationSpec(-2 * q_order, 2 * q_order, ((0, z_order),) * z_count, z_total)


def build_series(req: SeriesRequest) -> tuple[MultiSeries, str]:
    expr = req.expr.strip()
    if ":" not in expr:
        raise RequestError(
            f"cannot parse series expression {expr!r}; "
            "expected lhs:<identity>, rhs:<identity>, vertex:<a;b;c> or schur:<parts>"
        )
    kind, _, arg = expr.partition(":")
    if kind in ("lhs", "rhs"):
        ident = identities.get(arg)
        verify_req = VerifyRequest(
            name=arg, z_order=req.z_order, q_order=req.q_order,
            z_total=req.z_total, window=req.window, theta=req.theta,
        )
        spec = _spec_for_identity(verify_req)
        params = _params_from(verify_req)
        builder = ident.build_lhs if kind == "lhs" else ident.build_rhs
        return builder(spec, params), expr
    if kind == "vertex":
        bits = arg.split(";")
        if len(bits) != 3:
            raise RequestError(f"vertex expression needs two ';' separators, got {arg!r}")
        try:
            triple = [Partition.parse(b) for b in bits]
        except PartitionError as exc:
            raise RequestError(str(exc)) from exc
        spec = _general_spec(0, req.z_order, req.q_order, req.z_total, req.window)
        return vertex(triple[0], triple[1], triple[2], spec), expr
    if kind == "schur":
        try:
            lam = Partition.parse(arg)
        except PartitionError as exc:
            raise RequestError(str(exc)) from exc
        spec = _general_spec(0, req.z_order, req.q_order, req.z_total, req.window)
        return principal_schur(lam, spec), expr
    raise RequestError(f"unknown series expression kind {kind!r}")


def handle_series(req: SeriesRequest) -> SeriesResponse:
    series, expr = build_series(req)
    data = series.to_json()
    return SeriesResponse(
        expr=expr,
        ring=data["ring"],
        truncation=data["truncation"],
        terms=data["terms"],
        text=render_series(series),
    )


def resolve_graph(spec: str | dict) -> Graph:
    if isinstance(spec, dict):
        return Graph.from_json(spec)
    if spec in BUILTIN_GRAPHS:
        return builtin(spec)
    return Graph.load(spec)


def handle_graph(req: GraphRequest) -> GraphResponse:
    g = resolve_graph(req.graph)
    z_count = max(g.max_z_index(), 0)
    spec = _general_spec(z_count, req.z_order, req.q_order, req.z_total, req.window)
    series = evaluate(g, spec)
    data = series.to_json()
    rotations_ok = None
    rotation_failure = None
    if req.check_rotations:
        ok, label, _ = check_rotations(g, spec)
        rotations_ok = ok
        rotation_failure = label
    return GraphResponse(
        truncation=data["truncation"],
        terms=data["terms"],
        text=render_series(series),
        rotations_ok=rotations_ok,
        rotation_failure=rotation_failure,
    )


def identity_catalogue() -> list[IdentityInfo]:
    return [
        IdentityInfo(
            name=i.name, description=i.description, ring=list(i.ring), z_count=i.z_count
        )
        for i in identities.list_identities()
    ]


# -- FastAPI wiring --------------------------------------------------------------

app = FastAPI(
    title="vertexid",
    description="Exact q-series engine for hook-length / topological-vertex identities",
)


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok"}


@app.get("/identities", response_model=list[IdentityInfo])
def get_identities():
    return identity_catalogue()


@app.post("/verify", response_model=VerifyResponse)
def post_verify(req: VerifyRequest):
    try:
        return handle_verify(req)
    except identities.UnknownIdentityError as exc:
        raise HTTPException(status_code=404, detail=str(exc))
    except (RequestError, SeriesError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/series", response_model=SeriesResponse)
def post_series(req: SeriesRequest):
    try:
        return handle_series(req)
    except identities.UnknownIdentityError as exc:
        raise HTTPException(status_code=404, detail=str(exc))
    except (RequestError, SeriesError, PartitionError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/graph", response_model=GraphResponse)
def post_graph(req: GraphRequest):
    try:
        return handle_graph(req)
    except GraphError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except FileNotFoundError as exc:
        raise HTTPException(status_code=404, detail=str(exc))
