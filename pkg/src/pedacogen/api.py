"""HTTP surface over the project service and the evaluation reports.

Every response is wrapped in one envelope: {"ok": true, "data": ...} or
{"ok": false, "error": {"code", "message", "detail"}}.  Error codes come
straight from the domain errors, so API clients see the same stable tokens
the library raises.

With mock gateways every operation completes synchronously.  With live
gateways the long-running operations (generate, review, render) return 202
plus a status URL to poll, and the work continues in the background.
"""

from __future__ import annotations

from fastapi import BackgroundTasks, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import evalreport as ev
from .blueprint import SceneDiff, serialize_blueprint
from .config import MODE_LIVE, AppConfig, build_gateways
from .errors import DomainError
from .gateways import GatewayError, RenderFailure, manifest_to_dict
from .project import CorruptFile, NotFound, Project, ProjectStore, project_to_dict
from .prompts import config_from_dict
from .review import report_to_dict, review_delta
from .service import InvalidRequest, ProjectService
from .workflow import IllegalTransition


class CreateProjectBody(BaseModel):
    content: str
    id: str | None = None
    gen_config: dict | None = None
    review_config: dict | None = None


class ReviewBody(BaseModel):
    extra: str | None = None


class ApplyBody(BaseModel):
    mode: str
    picks: list = []


class EditBody(BaseModel):
    blueprint: str


class ConfigBody(BaseModel):
    gen_config: dict | None = None
    review_config: dict | None = None


class RenderBody(BaseModel):
    per_scene_duration_s: float | None = None


def _ok(data, status_code: int = 200) -> JSONResponse:
    return JSONResponse({"ok": True, "data": data}, status_code=status_code)


def _error_body(code: str, message: str, detail=None) -> dict:
    return {"ok": False,
            "error": {"code": code, "message": message, "detail": detail}}


def _status_for(exc: DomainError) -> int:
    if isinstance(exc, NotFound):
        return 404
    if isinstance(exc, IllegalTransition):
        return 409
    if isinstance(exc, (GatewayError, RenderFailure)):
        return 502
    if isinstance(exc, CorruptFile):
        return 500
    return 422


def _state_dict(p: Project) -> dict:
    return {"name": p.state.name, "reason": p.state.reason,
            "prior": p.state.prior}


def _revision_id(p: Project) -> int | None:
    return p.current_blueprint.revision_id if p.revisions else None


def _mutation_data(p: Project, **extra) -> dict:
    data = {"id": p.id, "state": _state_dict(p), "revision_id": _revision_id(p)}
    data.update(extra)
    return data


def _diff_dict(d: SceneDiff) -> dict:
    return {"scene_index": d.scene_index, "kind": d.kind,
            "changed_fields": sorted(d.changed_fields)}


def _prompt_config(data: dict | None, label: str):
    if data is None:
        return None
    try:
        return config_from_dict(data)
    except (KeyError, TypeError) as exc:
        raise InvalidRequest(f"bad {label}: {exc}") from exc


def _decode_csv(raw: bytes) -> str:
    try:
        text = raw.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise InvalidRequest(f"upload is not valid UTF-8: {exc}") from exc
    if not text.strip():
        raise InvalidRequest("upload is empty")
    return text


def create_app(service: ProjectService | None = None,
               config: AppConfig | None = None) -> FastAPI:
    config = config or AppConfig()
    if service is None:
        text_gw, video_gw = build_gateways(config)
        service = ProjectService(
            ProjectStore(config.project_dir), text_gw, video_gw,
            retries=config.gateway.retries,
            render_parallelism=config.gateway.render_parallelism)
    app = FastAPI(title="pedacogen", docs_url=None, redoc_url=None)
    live = config.mode == MODE_LIVE
    evaldata: dict[str, tuple | None] = {
        "ratings": None, "usability": None, "demographics": None}
    app.state.service = service
    app.state.evaldata = evaldata

    if config.cors_origins:
        app.add_middleware(
            CORSMiddleware, allow_origins=list(config.cors_origins),
            allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(DomainError)
    async def on_domain_error(request: Request, exc: DomainError):
        return JSONResponse(
            _error_body(exc.code, exc.message, exc.detail),
            status_code=_status_for(exc))

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request,
                                  exc: RequestValidationError):
        return JSONResponse(
            _error_body("validation", "request body failed validation",
                        exc.errors()),
            status_code=422)

    @app.exception_handler(ValueError)
    async def on_value_error(request: Request, exc: ValueError):
        return JSONResponse(
            _error_body("validation", str(exc), None), status_code=422)

    def accepted(p: Project, task) -> JSONResponse:
        # Live gateways: acknowledge now, poll the status URL for the result.
        return _ok(_mutation_data(
            p, status="accepted", status_url=f"/projects/{p.id}/progress"),
            status_code=202)

    # projects

    @app.post("/projects")
    def create_project(body: CreateProjectBody):
        p = service.create(
            body.content,
            gen_config=_prompt_config(body.gen_config, "gen_config"),
            review_config=_prompt_config(body.review_config, "review_config"),
            project_id=body.id)
        return _ok(_mutation_data(p, created_at=p.created_at), status_code=201)

    @app.get("/projects")
    def list_projects():
        return _ok({"projects": service.list_ids()})

    @app.get("/projects/{project_id}")
    def get_project(project_id: str):
        p = service.get(project_id)
        data = {"project": project_to_dict(p)}
        if p.current_blueprint is not None:
            data["script"] = serialize_blueprint(p.current_blueprint)
        return _ok(data)

    @app.get("/projects/{project_id}/progress")
    def get_progress(project_id: str):
        return _ok(service.progress(project_id))

    @app.post("/projects/{project_id}/generate")
    def generate(project_id: str, background: BackgroundTasks):
        if live:
            p = service.get(project_id)
            background.add_task(service.generate, project_id)
            return accepted(p, None)
        p, outcome = service.generate(project_id)
        return _ok(_mutation_data(
            p,
            script=serialize_blueprint(p.current_blueprint),
            attempt=outcome.attempt))

    @app.post("/projects/{project_id}/review")
    def review(project_id: str, background: BackgroundTasks,
               body: ReviewBody | None = None):
        extra = body.extra if body else None
        if live:
            p = service.get(project_id)
            background.add_task(service.review, project_id, extra)
            return accepted(p, None)
        p, outcome = service.review(project_id, extra)
        report = outcome.report
        delta = review_delta(p.current_blueprint, report)
        return _ok(_mutation_data(
            p,
            review=report_to_dict(report),
            delta=[_diff_dict(d) for d in delta],
            attempt=outcome.attempt))

    @app.post("/projects/{project_id}/apply")
    def apply(project_id: str, body: ApplyBody):
        p = service.apply(project_id, body.mode, body.picks)
        return _ok(_mutation_data(
            p, script=serialize_blueprint(p.current_blueprint)))

    @app.patch("/projects/{project_id}/script")
    def edit_script(project_id: str, body: EditBody):
        p = service.edit(project_id, body.blueprint)
        return _ok(_mutation_data(
            p, script=serialize_blueprint(p.current_blueprint)))

    @app.patch("/projects/{project_id}/config")
    def edit_config(project_id: str, body: ConfigBody):
        p = service.set_config(
            project_id,
            gen_config=_prompt_config(body.gen_config, "gen_config"),
            review_config=_prompt_config(body.review_config, "review_config"))
        return _ok(_mutation_data(p))

    @app.post("/projects/{project_id}/finalize")
    def finalize(project_id: str):
        p = service.finalize(project_id)
        return _ok(_mutation_data(p))

    @app.post("/projects/{project_id}/render")
    def render(project_id: str, background: BackgroundTasks,
               body: RenderBody | None = None):
        duration = body.per_scene_duration_s if body else None
        if live:
            p = service.get(project_id)
            background.add_task(service.render, project_id, duration)
            return accepted(p, None)
        p = service.render(project_id, duration)
        return _ok(_mutation_data(p, manifest=manifest_to_dict(p.render)))

    @app.get("/projects/{project_id}/render")
    def render_status(project_id: str):
        status = service.render_status(project_id)
        if status.get("manifest") is not None:
            status = dict(status, manifest=manifest_to_dict(status["manifest"]))
        return _ok(status)

    @app.post("/projects/{project_id}/reopen")
    def reopen(project_id: str):
        p = service.reopen(project_id)
        return _ok(_mutation_data(p))

    # evaluation

    async def ingest_upload(request: Request, key: str, ingest) -> JSONResponse:
        records = ingest(_decode_csv(await request.body()))
        evaldata[key] = records
        return _ok({"dataset": key, "records": len(records)})

    @app.post("/eval/ratings")
    async def upload_ratings(request: Request):
        return await ingest_upload(request, "ratings", ev.ingest_ratings)

    @app.post("/eval/usability")
    async def upload_usability(request: Request):
        return await ingest_upload(request, "usability", ev.ingest_usability)

    @app.post("/eval/demographics")
    async def upload_demographics(request: Request):
        return await ingest_upload(request, "demographics",
                                   ev.ingest_demographics)

    def _dataset(key: str):
        records = evaldata[key]
        if records is None:
            raise InvalidRequest(f"no {key} uploaded; POST /eval/{key} first")
        return records

    @app.get("/eval/report")
    def eval_report(kind: str, partition: str = "gender",
                    dataset: str = "usability", item: str = "Q13"):
        if kind == "improvement":
            rows = ev.improvement_table(_dataset("ratings"))
            return _ok({"kind": kind,
                        "rows": ev.improvement_rows_json(rows),
                        "text": ev.render_improvement_table(rows)})
        if kind == "topics":
            rows = ev.topic_table(_dataset("ratings"), item=item)
            return _ok({"kind": kind,
                        "rows": ev.topic_rows_json(rows),
                        "text": ev.render_topic_table(rows)})
        if kind == "subgroup":
            if dataset == "usability":
                records = _dataset("usability")
            elif dataset == "ratings":
                records = _dataset("ratings")
            else:
                raise InvalidRequest(
                    f"dataset must be 'usability' or 'ratings', not {dataset!r}")
            rows = ev.subgroup_compare(records, _dataset("demographics"),
                                       partition)
            return _ok({"kind": kind, "partition": partition,
                        "dataset": dataset,
                        "rows": ev.subgroup_rows_json(rows),
                        "text": ev.render_subgroup_table(rows)})
        raise InvalidRequest(
            f"kind must be improvement, topics, or subgroup, not {kind!r}")

    return app
