"""Project record: configs, revision/review histories, render state, persistence.

Projects are immutable snapshots; every mutation returns a new value and the
store writes whole files.  The on-disk form is a versioned JSON document, one
file per project id.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from dataclasses import dataclass, replace
from pathlib import Path

from .blueprint import ScriptBlueprint, blueprint_from_dict, blueprint_to_dict
from .errors import DomainError
from .gateways import RenderManifest, manifest_from_dict, manifest_to_dict
from .prompts import PromptConfig, config_from_dict, config_to_dict
from .review import ReviewReport, report_from_dict, report_to_dict
from .workflow import SETUP, ProjectState

SCHEMA_VERSION = 1

SOURCE_GENERATED = "generated"
SOURCE_REVIEW_APPLIED = "review_applied"
SOURCE_MANUAL_EDIT = "manual_edit"
REVISION_SOURCES = (SOURCE_GENERATED, SOURCE_REVIEW_APPLIED, SOURCE_MANUAL_EDIT)

_ID_RE = re.compile(r"^[a-z0-9][a-z0-9-]{0,63}$")


def valid_id(project_id: str) -> bool:
    return bool(_ID_RE.match(project_id))


class NotFound(DomainError):
    code = "not_found"


class CorruptFile(DomainError):
    code = "corrupt_file"

    def __init__(self, version, cause: str):
        super().__init__(f"project file unusable (version {version!r}): {cause}",
                         detail={"version": version, "cause": cause})
        self.version = version
        self.cause = cause


@dataclass(frozen=True, slots=True)
class Revision:
    blueprint: ScriptBlueprint
    source: str
    recorded_at: str


@dataclass(frozen=True, slots=True)
class Project:
    id: str
    content: str
    gen_config: PromptConfig
    review_config: PromptConfig
    revisions: tuple[Revision, ...] = ()
    reviews: tuple[ReviewReport, ...] = ()
    render: RenderManifest | None = None
    state: ProjectState = ProjectState(SETUP)
    created_at: str = ""
    updated_at: str = ""

    @property
    def current_blueprint(self) -> ScriptBlueprint | None:
        return self.revisions[-1].blueprint if self.revisions else None


def record_revision(p: Project, bp: ScriptBlueprint, source: str,
                    now: str) -> Project:
    """Append a blueprint snapshot with the next revision id and a source tag."""
    if source not in REVISION_SOURCES:
        raise ValueError(f"unknown revision source {source!r}")
    next_id = p.revisions[-1].blueprint.revision_id + 1 if p.revisions else 0
    stamped = replace(bp, revision_id=next_id)
    return replace(
        p,
        revisions=p.revisions + (Revision(stamped, source, now),),
        updated_at=now,
    )


def record_review(p: Project, report: ReviewReport, now: str) -> Project:
    expected = len(p.reviews) + 1
    if report.iteration != expected:
        report = replace(report, iteration=expected)
    return replace(p, reviews=p.reviews + (report,), updated_at=now)


def project_to_dict(p: Project) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "id": p.id,
        "content": p.content,
        "gen_config": config_to_dict(p.gen_config),
        "review_config": config_to_dict(p.review_config),
        "revisions": [
            {
                "blueprint": blueprint_to_dict(r.blueprint),
                "source": r.source,
                "recorded_at": r.recorded_at,
            }
            for r in p.revisions
        ],
        "reviews": [report_to_dict(r) for r in p.reviews],
        "render": manifest_to_dict(p.render) if p.render else None,
        "state": {"name": p.state.name, "reason": p.state.reason,
                  "prior": p.state.prior},
        "created_at": p.created_at,
        "updated_at": p.updated_at,
    }


def project_from_dict(data: dict) -> Project:
    version = data.get("schema")
    if version != SCHEMA_VERSION:
        raise CorruptFile(version, "unsupported schema version")
    try:
        return Project(
            id=data["id"],
            content=data["content"],
            gen_config=config_from_dict(data["gen_config"]),
            review_config=config_from_dict(data["review_config"]),
            revisions=tuple(
                Revision(blueprint_from_dict(r["blueprint"]), r["source"],
                         r["recorded_at"])
                for r in data["revisions"]
            ),
            reviews=tuple(report_from_dict(r) for r in data["reviews"]),
            render=manifest_from_dict(data["render"]) if data.get("render") else None,
            state=ProjectState(
                name=data["state"]["name"],
                reason=data["state"].get("reason"),
                prior=data["state"].get("prior"),
            ),
            created_at=data["created_at"],
            updated_at=data["updated_at"],
        )
    except (KeyError, TypeError) as exc:
        raise CorruptFile(version, f"missing or malformed field: {exc}") from exc


class ProjectStore:
    """One JSON file per project under a directory; atomic whole-file writes."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, project_id: str) -> Path:
        if not _ID_RE.match(project_id):
            raise NotFound(f"no such project: {project_id!r}")
        return self.root / f"{project_id}.json"

    def save(self, p: Project) -> str:
        path = self._path(p.id)
        payload = json.dumps(project_to_dict(p), ensure_ascii=False, indent=2)
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(payload)
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)
        return p.id

    def load(self, project_id: str) -> Project:
        path = self._path(project_id)
        if not path.exists():
            raise NotFound(f"no such project: {project_id!r}")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise CorruptFile(None, f"invalid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise CorruptFile(None, "top level is not an object")
        return project_from_dict(data)

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.json"))


def save_project(p: Project, store: ProjectStore) -> str:
    return store.save(p)


def load_project(project_id: str, store: ProjectStore) -> Project:
    return store.load(project_id)
