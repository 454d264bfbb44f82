"""HTTP front door over the catalog, planner and containerizer.

Request and response bodies are the canonical JSON document formats; search
filters arrive as repeatable ``filter.<field>=<value>`` query parameters.
Error responses share one shape: ``{"status", "code", "detail",
"violations"?}`` with status drawn from {400, 404, 409, 500}.
"""

from __future__ import annotations

import json
import os
import socket
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from . import vocab
from .catalog import FACET_FIELDS, KINDS, Catalog, SearchQuery, serialize_document
from .containerize import (
    ContainerConfig,
    DEFAULT_CONTAINER_CONFIG,
    generate_dockerfile,
    generate_pod_manifest,
    select_base_image,
)
from .errors import (
    NoPipelineFoundError,
    PortInUseError,
    PrimcatError,
    QueryError,
    SchemaViolationError,
)
from .planner import (
    pipeline_from_dict,
    pipeline_to_dict,
    plan_outcome,
    validate_pipeline,
)
from .schema import Violation, dataset_from_dict, problem_from_dict

ENV_STORE = "PRIMCAT_STORE"
ENV_PORT = "PRIMCAT_PORT"

_STATUS_BY_CODE = {
    "INVALID_DOCUMENT": 400,
    "INVALID_QUERY": 400,
    "UNKNOWN_FIELD": 400,
    "UNKNOWN_TASK": 400,
    "INVALID_IMAGE_REF": 400,
    "NOT_APPLICABLE": 400,
    "NOT_FOUND": 404,
    "VERSION_NOT_FOUND": 404,
    "UNKNOWN_DATASET": 404,
    "UNKNOWN_PRIMITIVE": 404,
    "STORE_UNREADABLE": 500,
}

_KIND_BY_ROUTE = {"primitives": "primitive", "datasets": "dataset", "problems": "problem"}


@dataclass(frozen=True)
class GatewayConfig:
    store_root: Path
    host: str = "127.0.0.1"
    port: int = 8000
    container: ContainerConfig = field(default_factory=ContainerConfig)
    ui_root: Path | None = None


def load_config(store: str | None = None, port: int | None = None,
                config_file: str | None = None,
                ui_root: str | None = None) -> GatewayConfig:
    """Resolve configuration: explicit arguments > environment > file > defaults."""
    file_values: dict = {}
    if config_file:
        file_values = json.loads(Path(config_file).read_text(encoding="utf-8"))
    resolved_store = (store or os.environ.get(ENV_STORE)
                      or file_values.get("store_root") or "store")
    resolved_port = port if port is not None else int(
        os.environ.get(ENV_PORT) or file_values.get("port", 8000))
    tags = file_values.get("base_image_tags", {})
    container = ContainerConfig(
        nlp_tag=tags.get("nlp", DEFAULT_CONTAINER_CONFIG.nlp_tag),
        vision_tag=tags.get("vision", DEFAULT_CONTAINER_CONFIG.vision_tag),
        full_tag=tags.get("full", DEFAULT_CONTAINER_CONFIG.full_tag),
        data_mount=file_values.get("data_mount", DEFAULT_CONTAINER_CONFIG.data_mount),
    )
    resolved_ui = ui_root or file_values.get("ui_root")
    return GatewayConfig(
        store_root=Path(resolved_store),
        host=file_values.get("host", "127.0.0.1"),
        port=resolved_port,
        container=container,
        ui_root=Path(resolved_ui) if resolved_ui else None,
    )


def _error_doc(status: int, code: str, detail: str, violations=None) -> dict:
    doc = {"status": status, "code": code, "detail": detail}
    if violations is not None:
        doc["violations"] = [v.to_doc() for v in violations]
    return doc


async def _json_body(request: Request) -> dict:
    raw = await request.body()
    try:
        body = json.loads(raw or b"")
    except json.JSONDecodeError as exc:
        raise SchemaViolationError([Violation("MALFORMED_DOCUMENT", "", str(exc))]) from exc
    if not isinstance(body, dict):
        raise SchemaViolationError(
            [Violation("MALFORMED_DOCUMENT", "", "top-level value must be an object")])
    return body


def _int_param(params, key: str, default: int) -> int:
    raw = params.get(key)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise QueryError(f"{key} must be an integer") from None


def _search_query(request: Request, kind: str) -> SearchQuery:
    params = request.query_params
    filters: dict[str, set[str]] = {}
    for key, value in params.multi_items():
        if key.startswith("filter."):
            filters.setdefault(key[len("filter."):], set()).add(value)
    return SearchQuery(
        doc_kind=kind,
        text=tuple((params.get("q") or "").split()),
        filters=filters,
        page=_int_param(params, "page", 1),
        page_size=_int_param(params, "page_size", 20),
    )


def _parse_inline(body: dict, key: str, from_dict):
    obj, violations = from_dict(body[key]) if isinstance(body[key], dict) else (None, [
        Violation("BAD_VALUE", key, "expected an object")])
    if violations:
        raise SchemaViolationError(violations)
    return obj


def _resolve_dataset(body: dict, catalog: Catalog):
    if "dataset" in body:
        return _parse_inline(body, "dataset", dataset_from_dict)
    if "dataset_id" in body:
        return catalog.view().get_dataset(body["dataset_id"])
    return None


def _resolve_problem(body: dict, catalog: Catalog):
    if "problem" in body:
        return _parse_inline(body, "problem", problem_from_dict)
    if "problem_id" in body:
        return catalog.view().get_problem(body["problem_id"])
    return None


def _pipeline_from_body(raw: dict):
    pipeline, violations = pipeline_from_dict(raw)
    if violations:
        raise SchemaViolationError(violations)
    return pipeline


def create_app(config: GatewayConfig) -> FastAPI:
    """Build the application; loading the catalog rebuilds the index from
    the store and fails fast on any corrupt file."""
    catalog = Catalog(config.store_root)
    app = FastAPI(title="primcat gateway", docs_url=None, redoc_url=None)
    app.state.catalog = catalog
    app.state.config = config

    @app.exception_handler(PrimcatError)
    async def _domain_error(_request, exc: PrimcatError):
        status = _STATUS_BY_CODE.get(exc.code, 500)
        violations = getattr(exc, "violations", None)
        return JSONResponse(
            status_code=status,
            content=_error_doc(status, exc.code, exc.detail, violations))

    @app.exception_handler(RequestValidationError)
    async def _request_error(_request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content=_error_doc(400, "INVALID_QUERY", str(exc)))

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok", "documents": catalog.document_count()}

    @app.get("/vocab")
    async def vocabularies():
        return {
            "condition_flags": sorted(vocab.SEED_CONDITION_FLAGS),
            "algorithm_types": sorted(vocab.SEED_ALGORITHM_TYPES),
            "primitive_families": sorted(vocab.SEED_PRIMITIVE_FAMILIES),
            "modalities": sorted(vocab.MODALITIES),
            "task_types": sorted(vocab.TASK_TYPES),
            "metrics": sorted(vocab.METRICS),
            "hyperparameter_kinds": sorted(vocab.HYPERPARAMETER_KINDS),
            "value_types": sorted(vocab.VALUE_TYPES),
            "facet_fields": {kind: list(FACET_FIELDS[kind]) for kind in KINDS},
        }

    for route, kind in _KIND_BY_ROUTE.items():

        def _bind(route: str, kind: str) -> None:
            @app.get(f"/{route}")
            async def search_docs(request: Request, kind: str = kind):
                return JSONResponse(catalog.search(_search_query(request, kind)).to_doc())

            @app.post(f"/{route}")
            async def ingest_doc(request: Request, kind: str = kind):
                raw = await request.body()
                receipt = catalog.ingest(raw.decode("utf-8"), kind)
                return JSONResponse(receipt.to_doc())

            @app.get(f"/{route}/{{doc_id}}")
            async def get_doc(doc_id: str, request: Request, kind: str = kind):
                version = request.query_params.get("version")
                doc = catalog.get(kind, doc_id, version)
                return Response(serialize_document(doc), media_type="application/json")

        _bind(route, kind)

    @app.post("/plan")
    async def plan_endpoint(request: Request):
        body = await _json_body(request)
        dataset = _resolve_dataset(body, catalog)
        if dataset is None:
            raise QueryError("plan requires dataset or dataset_id")
        problem = _resolve_problem(body, catalog)
        if problem is None:
            raise QueryError("plan requires problem or problem_id")
        try:
            max_depth = int(body.get("max_depth", 5))
            k = int(body.get("k", 1))
        except (TypeError, ValueError):
            raise QueryError("k and max_depth must be integers") from None
        outcome = plan_outcome(dataset, problem, catalog.view(),
                               max_depth=max_depth, k=k)
        doc: dict = {"pipelines": [pipeline_to_dict(p) for p in outcome.pipelines]}
        if not outcome.pipelines:
            doc["diagnostic"] = {
                "code": NoPipelineFoundError.code,
                "unmet": sorted(outcome.blocked_flags),
            }
        return JSONResponse(doc)

    @app.post("/pipelines/validate")
    async def validate_endpoint(request: Request):
        body = await _json_body(request)
        if "pipeline" not in body or not isinstance(body["pipeline"], dict):
            raise QueryError("validate requires a pipeline document")
        pipeline = _pipeline_from_body(body["pipeline"])
        dataset = _resolve_dataset(body, catalog)
        if dataset is None:
            dataset = catalog.view().get_dataset(pipeline.dataset_id)
        problem = _resolve_problem(body, catalog)
        result = validate_pipeline(pipeline, dataset, catalog.view(), problem)
        return JSONResponse(result.to_doc())

    @app.post("/pipelines/dockerfile")
    async def dockerfile_endpoint(request: Request):
        pipeline = _pipeline_from_body(await _json_body(request))
        text = generate_dockerfile(pipeline, catalog.view(), config.container)
        return PlainTextResponse(text)

    @app.post("/pipelines/manifest")
    async def manifest_endpoint(request: Request):
        pipeline = _pipeline_from_body(await _json_body(request))
        image_ref = request.query_params.get("image_ref")
        if not image_ref:
            image_ref = select_base_image(pipeline, catalog.view(), config.container).tag
        text = generate_pod_manifest(pipeline, image_ref, config.container)
        return PlainTextResponse(text)

    if config.ui_root and Path(config.ui_root).is_dir():
        app.mount("/ui", StaticFiles(directory=config.ui_root, html=True), name="ui")

    return app


def _check_port_free(host: str, port: int) -> None:
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        raise PortInUseError(f"port {port} on {host} is unavailable: {exc}") from exc
    finally:
        probe.close()


def serve(config: GatewayConfig) -> None:
    """Rebuild the index from the store, then serve until shutdown."""
    import uvicorn

    app = create_app(config)  # raises StoreCorruptError on bad store files
    _check_port_free(config.host, config.port)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
