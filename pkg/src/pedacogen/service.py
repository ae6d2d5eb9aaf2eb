"""Project orchestration shared by the CLI and the HTTP API.

Every mutating operation follows the same shape: load the project, prove the
workflow transition is legal, perform the side effect, then persist the new
state in one atomic write.  A gateway failure surfaces before anything is
saved, so a failed call never moves a project.

The clock and id factory are injectable so that identical operation
sequences driven through the CLI and the API produce identical project
files.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import replace
from datetime import datetime, timezone

from . import workflow as wf
from .blueprint import parse_blueprint
from .errors import DomainError
from .gateways import (
    GenerationOutcome,
    RenderFailure,
    RenderSettings,
    ReviewOutcome,
    generate_script,
    render_video,
    request_review,
)
from .project import (
    SOURCE_GENERATED,
    SOURCE_MANUAL_EDIT,
    SOURCE_REVIEW_APPLIED,
    Project,
    ProjectStore,
    record_review,
    record_revision,
    valid_id,
)
from .prompts import PromptConfig, default_generation_config, default_review_config
from .workflow import Event, transition
from .review import apply_all, apply_selective

APPLY_ALL = "all"
APPLY_SELECTIVE = "selective"


class InvalidRequest(DomainError):
    code = "validation"


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def new_project_id() -> str:
    return uuid.uuid4().hex[:12]


def coerce_picks(picks) -> set[tuple[int, str]]:
    """Accept picks as (index, field) pairs or {scene_index, field} mappings."""
    out: set[tuple[int, str]] = set()
    for item in picks or ():
        if isinstance(item, dict):
            if "scene_index" not in item or "field" not in item:
                raise InvalidRequest(
                    f"pick {item!r} needs scene_index and field")
            pair = (item["scene_index"], item["field"])
        else:
            pair = tuple(item)
        if (len(pair) != 2 or isinstance(pair[0], bool)
                or not isinstance(pair[0], int) or not isinstance(pair[1], str)):
            raise InvalidRequest(
                f"bad pick {item!r}; expected [scene_index, field]")
        out.add((pair[0], pair[1]))
    return out


class ProjectService:
    """Stateful facade over the store, the gateways, and the state machine."""

    def __init__(self, store: ProjectStore, text_gateway, video_gateway, *,
                 clock=None, id_factory=None,
                 retries: int = 1, render_parallelism: int = 4):
        self.store = store
        self.text_gateway = text_gateway
        self.video_gateway = video_gateway
        # None means "look up the module default at call time", so tests can
        # freeze time without constructing a new service.
        self.clock = clock
        self.id_factory = id_factory
        self.retries = retries
        self.render_parallelism = render_parallelism
        self._locks: dict[str, threading.Lock] = {}
        self._guard = threading.Lock()

    def _now(self) -> str:
        return (self.clock or utc_now)()

    def _new_id(self) -> str:
        return (self.id_factory or new_project_id)()

    def _lock(self, project_id: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(project_id, threading.Lock())

    # reads

    def get(self, project_id: str) -> Project:
        return self.store.load(project_id)

    def list_ids(self) -> list[str]:
        return self.store.list_ids()

    def progress(self, project_id: str) -> dict:
        p = self.get(project_id)
        phase, label = wf.progress(p.state)
        return {
            "state": p.state.name,
            "phase": phase,
            "label": label,
            "legal_events": wf.legal_events(p.state),
        }

    def render_status(self, project_id: str) -> dict:
        p = self.get(project_id)
        name = p.state.name
        if name == wf.COMPLETE and p.render is not None:
            return {"status": "complete", "manifest": p.render}
        if name == wf.RENDERING:
            return {"status": "rendering"}
        if name == wf.FAILED:
            return {"status": "failed", "reason": p.state.reason,
                    "prior": p.state.prior}
        return {"status": "not_started"}

    # mutations

    def create(self, content: str, gen_config: PromptConfig | None = None,
               review_config: PromptConfig | None = None,
               project_id: str | None = None) -> Project:
        if not isinstance(content, str) or not content.strip():
            raise InvalidRequest("content must be a non-empty string")
        if project_id is not None and not valid_id(project_id):
            raise InvalidRequest(f"invalid project id {project_id!r}")
        new_id = project_id or self._new_id()
        if new_id in self.store.list_ids():
            raise InvalidRequest(f"project {new_id!r} already exists")
        now = self._now()
        p = Project(
            id=new_id,
            content=content,
            gen_config=gen_config or default_generation_config(),
            review_config=review_config or default_review_config(),
            created_at=now,
            updated_at=now,
        )
        self.store.save(p)
        return p

    def generate(self, project_id: str) -> tuple[Project, GenerationOutcome]:
        with self._lock(project_id):
            p = self.get(project_id)
            pending = transition(p.state, wf.GENERATE_SCRIPT)
            outcome = generate_script(self.text_gateway, p.gen_config,
                                      p.content, retries=self.retries)
            state = transition(pending, wf.SCRIPT_ARRIVED)
            p = record_revision(replace(p, state=state), outcome.blueprint,
                                SOURCE_GENERATED, self._now())
            self.store.save(p)
            return p, outcome

    def review(self, project_id: str,
               extra: str | None = None) -> tuple[Project, ReviewOutcome]:
        with self._lock(project_id):
            p = self.get(project_id)
            pending = transition(p.state, wf.REQUEST_REVIEW)
            outcome = request_review(self.text_gateway, p.review_config,
                                     p.content, p.current_blueprint,
                                     extra=extra, iteration=len(p.reviews) + 1,
                                     retries=self.retries)
            state = transition(pending, wf.REVIEW_ARRIVED)
            p = record_review(replace(p, state=state), outcome.report,
                              self._now())
            self.store.save(p)
            return p, outcome

    def apply(self, project_id: str, mode: str, picks=None) -> Project:
        if mode == APPLY_ALL:
            event = wf.APPLY_FEEDBACK
        elif mode == APPLY_SELECTIVE:
            event = wf.APPLY_SELECTIVE
        else:
            raise InvalidRequest(f"unknown apply mode {mode!r}")
        with self._lock(project_id):
            p = self.get(project_id)
            state = transition(p.state, event)
            report = p.reviews[-1]
            if mode == APPLY_ALL:
                bp = apply_all(p.current_blueprint, report)
            else:
                bp = apply_selective(p.current_blueprint, report,
                                     coerce_picks(picks))
            p = record_revision(replace(p, state=state), bp,
                                SOURCE_REVIEW_APPLIED, self._now())
            self.store.save(p)
            return p

    def edit(self, project_id: str, blueprint_text: str) -> Project:
        with self._lock(project_id):
            p = self.get(project_id)
            state = transition(p.state, wf.EDIT_SCRIPT)
            bp = parse_blueprint(blueprint_text)
            p = record_revision(replace(p, state=state), bp,
                                SOURCE_MANUAL_EDIT, self._now())
            self.store.save(p)
            return p

    def set_config(self, project_id: str,
                   gen_config: PromptConfig | None = None,
                   review_config: PromptConfig | None = None) -> Project:
        with self._lock(project_id):
            p = self.get(project_id)
            if p.state.name not in wf.CONFIG_EDITABLE_STATES:
                raise wf.IllegalTransition(p.state.name, "edit_config")
            if gen_config is None and review_config is None:
                raise InvalidRequest("nothing to update")
            p = replace(p,
                        gen_config=gen_config or p.gen_config,
                        review_config=review_config or p.review_config,
                        updated_at=self._now())
            self.store.save(p)
            return p

    def finalize(self, project_id: str) -> Project:
        with self._lock(project_id):
            p = self.get(project_id)
            state = transition(p.state, wf.FINALIZE_SCRIPT)
            p = replace(p, state=state, updated_at=self._now())
            self.store.save(p)
            return p

    def render(self, project_id: str,
               per_scene_duration_s: float | None = None) -> Project:
        with self._lock(project_id):
            p = self.get(project_id)
            pending = transition(p.state, wf.CREATE_VIDEO)
            settings = (RenderSettings(per_scene_duration_s)
                        if per_scene_duration_s is not None else RenderSettings())
            try:
                manifest = render_video(self.video_gateway,
                                        p.current_blueprint, settings,
                                        parallelism=self.render_parallelism)
            except RenderFailure as exc:
                # The failure is part of the project history: persist the
                # failed state (with reason and interrupted prior) and
                # re-raise for the caller to report.
                state = transition(pending, Event(wf.RENDER_FAILED,
                                                  payload=exc.message))
                p = replace(p, state=state, updated_at=self._now())
                self.store.save(p)
                raise
            state = transition(pending, wf.RENDER_DONE)
            p = replace(p, state=state, render=manifest,
                        updated_at=self._now())
            self.store.save(p)
            return p

    def reopen(self, project_id: str) -> Project:
        with self._lock(project_id):
            p = self.get(project_id)
            state = transition(p.state, wf.REOPEN)
            p = replace(p, state=state, render=None, updated_at=self._now())
            self.store.save(p)
            return p
