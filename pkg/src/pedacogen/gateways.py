"""Backend gateways: text generation, video synthesis, render orchestration.

Only the mock adapters are exercised by the test suite; the HTTP adapters
implement the same interfaces against configurable endpoints.  The mock text
gateway resolves a prompt in this order: scripted responses, fixture table
keyed by prompt hash, then (unless strict) a deterministic synthesizer that
produces well-formed script or review output.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import httpx

from .blueprint import (
    EmptyBlueprint,
    BlueprintError,
    ScriptBlueprint,
    parse_blueprint,
    serialize_blueprint,
)
from .errors import DomainError
from .prompts import PromptConfig, assemble_generation_prompt, assemble_review_prompt
from .review import ReviewError, ReviewReport, parse_review

TIMEOUT = "timeout"
RATE_LIMITED = "rate_limited"
BACKEND_ERROR = "backend_error"
MALFORMED_OUTPUT = "malformed_output"

DEFAULT_SCENE_DURATION_S = 8.0

FORMAT_REMINDER = (
    "Your previous reply did not follow the required format. "
    "Reply again using exactly the structure shown in [Output Format], "
    "with no other text."
)


class GatewayError(DomainError):
    def __init__(self, kind: str, message: str, attempt: int = 1,
                 transcripts: list[str] | None = None):
        super().__init__(
            message,
            detail={"kind": kind, "attempt": attempt,
                    "transcripts": list(transcripts or [])},
        )
        self.kind = kind
        self.attempt = attempt
        self.transcripts = list(transcripts or [])
        self.code = kind


class RenderFailure(DomainError):
    """Some scene jobs failed; completed clips are retained for retry."""

    code = "render_failed"

    def __init__(self, failed_scenes: list[int], clips: list[Clip]):
        super().__init__(
            f"render failed for scenes {failed_scenes}",
            detail={
                "failed_scenes": list(failed_scenes),
                "clips": [clip_to_dict(c) for c in clips],
            },
        )
        self.failed_scenes = list(failed_scenes)
        self.clips = list(clips)


class IndexGap(DomainError):
    code = "index_gap"


class DuplicateClip(DomainError):
    code = "duplicate_clip"


@dataclass(frozen=True, slots=True)
class TextGenRequest:
    prompt: str
    temperature: float = 0.2
    max_output: int = 8192


@dataclass(frozen=True, slots=True)
class VideoJob:
    scene_index: int
    visual_prompt: str
    narration: str
    duration_s: float = DEFAULT_SCENE_DURATION_S


@dataclass(frozen=True, slots=True)
class Clip:
    scene_index: int
    clip_ref: str
    duration_s: float


@dataclass(frozen=True, slots=True)
class RenderSettings:
    per_scene_duration_s: float = DEFAULT_SCENE_DURATION_S


@dataclass(frozen=True, slots=True)
class RenderManifest:
    clips: tuple[Clip, ...]
    total_duration_s: float
    settings: RenderSettings


@dataclass(frozen=True, slots=True)
class GatewaySettings:
    text_endpoint: str = ""
    text_api_key: str = ""
    video_endpoint: str = ""
    video_api_key: str = ""
    timeout_s: float = 30.0
    retries: int = 1
    render_parallelism: int = 4


def gateway_settings_from_env(env: dict | None = None) -> GatewaySettings:
    env = os.environ if env is None else env
    return GatewaySettings(
        text_endpoint=env.get("TEXT_GEN_ENDPOINT", ""),
        text_api_key=env.get("TEXT_GEN_API_KEY", ""),
        video_endpoint=env.get("VIDEO_GEN_ENDPOINT", ""),
        video_api_key=env.get("VIDEO_GEN_API_KEY", ""),
        timeout_s=float(env.get("GATEWAY_TIMEOUT_S", "30")),
        retries=int(env.get("GATEWAY_RETRIES", "1")),
        render_parallelism=int(env.get("RENDER_PARALLELISM", "4")),
    )


def prompt_hash(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# text gateways

def _content_after(prompt: str, header: str) -> str:
    marker = f"{header}\n\n"
    start = prompt.rfind(marker)
    return prompt[start + len(marker):] if start >= 0 else prompt


def _synthesize_script(prompt: str) -> str:
    content = _content_after(prompt, "[Learning Content]")
    if "[Video Generation Script]" in content:
        content = content.split("[Video Generation Script]")[0].strip()
    topic = content.strip().split("\n")[0].strip() or "the topic"
    scenes = []
    beats = (
        ("A title card introducing the topic over a plain background.",
         f"Let's take a few minutes to understand {topic}"),
        ("A simple labeled diagram of the key terms, one at a time.",
         "First, here are the key terms we will use."),
        ("An animated overview of the whole process from start to finish.",
         "Here is the big picture before we zoom in."),
        ("A close-up animation of the first stage with an arrow cue.",
         "It all starts right here."),
        ("A close-up animation of the second stage with highlighted parts.",
         "Next comes the step most people miss."),
        ("A side-by-side comparison of before and after states.",
         "Compare these two and the change is clear."),
        ("A clean summary diagram repeating the key terms.",
         "And that is the whole story, step by step."),
    )
    for i, (vd, narration) in enumerate(beats, start=1):
        scenes.append(
            f"<Scene {i}>\nVisual Description: {vd}\nClear Narration: {narration}"
        )
    return "\n\n".join(scenes)


def _synthesize_review(prompt: str) -> str:
    script = _content_after(prompt, "[Video Generation Script]").strip()
    bp = parse_blueprint(script)
    first = bp.scenes[0]
    revised_first_narr = f"To recap the goal first: {first.narration}"
    revised = [
        f"<Scene {s.index}>\n"
        f"Visual Description: {s.visual_description}\n"
        f"Clear Narration: {revised_first_narr if s.index == 1 else s.narration}"
        for s in bp.scenes
    ]
    return (
        "Detailed Review Results:\n"
        "The script follows the visual and narration rules overall; the "
        "opening could state the learning goal sooner.\n\n"
        "Suggestions for Improvement:\n"
        "1. Scene 1: state the learning goal in the first narration sentence.\n\n"
        "Revised Script:\n" + "\n\n".join(revised)
    )


class MockTextGateway:
    """Deterministic stand-in for the text backend.

    fixtures: prompt-hash -> response table (strongest form of pinning).
    scripted: responses consumed in order before any other resolution.
    strict: unknown prompts become backend errors instead of synthesis.
    """

    def __init__(self, fixtures: dict[str, str] | None = None,
                 scripted: list[str] | None = None, strict: bool = False):
        self.fixtures = dict(fixtures or {})
        self.scripted = list(scripted or [])
        self.strict = strict
        self.calls = 0

    @classmethod
    def from_fixture_file(cls, path, **kwargs) -> "MockTextGateway":
        with open(path, encoding="utf-8") as fh:
            return cls(fixtures=json.load(fh), **kwargs)

    def generate(self, req: TextGenRequest) -> str:
        self.calls += 1
        if self.scripted:
            return self.scripted.pop(0)
        key = prompt_hash(req.prompt)
        if key in self.fixtures:
            return self.fixtures[key]
        if self.strict:
            raise GatewayError(BACKEND_ERROR, f"no fixture for prompt hash {key}")
        if "[Video Generation Script]" in req.prompt:
            return _synthesize_review(req.prompt)
        return _synthesize_script(req.prompt)


class HttpTextGateway:
    """POSTs {prompt, params} to the configured endpoint; returns body["text"]."""

    concurrency_safe = True

    def __init__(self, settings: GatewaySettings, transport=None):
        self.settings = settings
        self._client = httpx.Client(
            timeout=settings.timeout_s,
            transport=transport,
            headers={"authorization": f"Bearer {settings.text_api_key}"},
        )

    def generate(self, req: TextGenRequest) -> str:
        try:
            resp = self._client.post(
                self.settings.text_endpoint,
                json={
                    "prompt": req.prompt,
                    "params": {"temperature": req.temperature,
                               "max_output": req.max_output},
                },
            )
        except httpx.TimeoutException as exc:
            raise GatewayError(TIMEOUT, f"text backend timed out: {exc}") from exc
        except httpx.HTTPError as exc:
            raise GatewayError(BACKEND_ERROR, f"text backend unreachable: {exc}") from exc
        if resp.status_code == 429:
            raise GatewayError(RATE_LIMITED, "text backend rate limited")
        if resp.status_code >= 400:
            raise GatewayError(BACKEND_ERROR,
                               f"text backend returned {resp.status_code}")
        return resp.json()["text"]


def _call_with_retries(fn, retries: int):
    attempts = 1 + max(0, retries)
    for attempt in range(1, attempts + 1):
        try:
            return fn(), attempt
        except GatewayError as exc:
            if exc.kind not in (TIMEOUT, RATE_LIMITED) or attempt == attempts:
                raise GatewayError(exc.kind, exc.message, attempt=attempt,
                                   transcripts=exc.transcripts) from exc
    raise AssertionError("unreachable")


@dataclass(frozen=True, slots=True)
class GenerationOutcome:
    blueprint: ScriptBlueprint
    attempt: int
    raw: str


@dataclass(frozen=True, slots=True)
class ReviewOutcome:
    report: ReviewReport
    attempt: int
    raw: str


def generate_script(gateway, config: PromptConfig, content: str,
                    retries: int = 1) -> GenerationOutcome:
    """Assemble, call, parse; on a malformed reply, re-ask exactly once."""
    prompt = assemble_generation_prompt(config, content)
    raw, _ = _call_with_retries(
        lambda: gateway.generate(TextGenRequest(prompt=prompt)), retries)
    try:
        return GenerationOutcome(parse_blueprint(raw), attempt=1, raw=raw)
    except BlueprintError:
        pass
    retry_prompt = f"{prompt}\n\n{FORMAT_REMINDER}"
    raw2, _ = _call_with_retries(
        lambda: gateway.generate(TextGenRequest(prompt=retry_prompt)), retries)
    try:
        return GenerationOutcome(parse_blueprint(raw2), attempt=2, raw=raw2)
    except BlueprintError as exc:
        raise GatewayError(
            MALFORMED_OUTPUT,
            f"script output unparseable after re-ask: {exc}",
            attempt=2,
            transcripts=[raw, raw2],
        ) from exc


def request_review(gateway, config: PromptConfig, content: str,
                   bp: ScriptBlueprint, extra: str | None = None,
                   iteration: int = 1, retries: int = 1) -> ReviewOutcome:
    prompt = assemble_review_prompt(config, content, bp, extra)
    raw, _ = _call_with_retries(
        lambda: gateway.generate(TextGenRequest(prompt=prompt)), retries)
    try:
        return ReviewOutcome(parse_review(raw, iteration=iteration), attempt=1, raw=raw)
    except (ReviewError, BlueprintError):
        pass
    retry_prompt = f"{prompt}\n\n{FORMAT_REMINDER}"
    raw2, _ = _call_with_retries(
        lambda: gateway.generate(TextGenRequest(prompt=retry_prompt)), retries)
    try:
        return ReviewOutcome(parse_review(raw2, iteration=iteration), attempt=2, raw=raw2)
    except (ReviewError, BlueprintError) as exc:
        raise GatewayError(
            MALFORMED_OUTPUT,
            f"review output unparseable after re-ask: {exc}",
            attempt=2,
            transcripts=[raw, raw2],
        ) from exc


# ---------------------------------------------------------------------------
# video gateways

class MockVideoGateway:
    """Deterministic per-scene synthesis; optional scripted failures."""

    def __init__(self, fail_scenes: set[int] | None = None):
        self.fail_scenes = set(fail_scenes or ())
        self.calls = 0

    def synthesize(self, job: VideoJob) -> Clip:
        self.calls += 1
        if job.scene_index in self.fail_scenes:
            raise GatewayError(BACKEND_ERROR,
                               f"scene {job.scene_index} synthesis failed")
        digest = hashlib.sha256(
            f"{job.scene_index}|{job.visual_prompt}|{job.narration}".encode()
        ).hexdigest()[:12]
        return Clip(
            scene_index=job.scene_index,
            clip_ref=f"mock://scene/{job.scene_index}/{digest}",
            duration_s=job.duration_s,
        )


class HttpVideoGateway:
    concurrency_safe = True

    def __init__(self, settings: GatewaySettings, transport=None):
        self.settings = settings
        self._client = httpx.Client(
            timeout=settings.timeout_s,
            transport=transport,
            headers={"authorization": f"Bearer {settings.video_api_key}"},
        )

    def synthesize(self, job: VideoJob) -> Clip:
        try:
            resp = self._client.post(
                self.settings.video_endpoint,
                json={
                    "scene_index": job.scene_index,
                    "visual_prompt": job.visual_prompt,
                    "narration": job.narration,
                    "duration_s": job.duration_s,
                },
            )
        except httpx.TimeoutException as exc:
            raise GatewayError(TIMEOUT, f"video backend timed out: {exc}") from exc
        except httpx.HTTPError as exc:
            raise GatewayError(BACKEND_ERROR, f"video backend unreachable: {exc}") from exc
        if resp.status_code >= 400:
            raise GatewayError(BACKEND_ERROR,
                               f"video backend returned {resp.status_code}")
        body = resp.json()
        return Clip(job.scene_index, body["clip_ref"], job.duration_s)


def render_video(gateway, bp: ScriptBlueprint,
                 settings: RenderSettings = RenderSettings(),
                 parallelism: int = 4) -> RenderManifest:
    """Submit one job per scene, join by scene index, concat into a manifest."""
    if not bp.scenes:
        raise EmptyBlueprint("cannot render an empty script")
    if settings.per_scene_duration_s <= 0:
        raise ValueError("per_scene_duration_s must be positive")
    jobs = [
        VideoJob(
            scene_index=s.index,
            visual_prompt=s.visual_description,
            narration=s.narration,
            duration_s=settings.per_scene_duration_s,
        )
        for s in bp.scenes
    ]
    clips: list[Clip] = []
    failed: list[int] = []

    def run(job: VideoJob):
        try:
            return gateway.synthesize(job), None
        except GatewayError:
            return None, job.scene_index

    if parallelism > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            outcomes = list(pool.map(run, jobs))
    else:
        outcomes = [run(job) for job in jobs]
    for clip, failure in outcomes:
        if failure is None:
            clips.append(clip)
        else:
            failed.append(failure)
    if failed:
        raise RenderFailure(sorted(failed), clips)
    return concat_manifest(clips, settings)


def concat_manifest(clips: list[Clip],
                    settings: RenderSettings = RenderSettings()) -> RenderManifest:
    """Order clips by scene index; reject gaps and duplicates."""
    if not clips:
        raise EmptyBlueprint("no clips to combine")
    ordered = tuple(sorted(clips, key=lambda c: c.scene_index))
    indices = [c.scene_index for c in ordered]
    for a, b in zip(indices, indices[1:]):
        if a == b:
            raise DuplicateClip(f"scene {a} appears twice",
                                detail={"scene_index": a})
    if indices != list(range(1, len(indices) + 1)):
        raise IndexGap(f"clip indices {indices} are not contiguous from 1",
                       detail={"indices": indices})
    return RenderManifest(
        clips=ordered,
        total_duration_s=math.fsum(c.duration_s for c in ordered),
        settings=settings,
    )


def clip_to_dict(c: Clip) -> dict:
    return {"scene_index": c.scene_index, "clip_ref": c.clip_ref,
            "duration_s": c.duration_s}


def manifest_to_dict(m: RenderManifest) -> dict:
    return {
        "clips": [clip_to_dict(c) for c in m.clips],
        "total_duration_s": m.total_duration_s,
        "settings": {"per_scene_duration_s": m.settings.per_scene_duration_s},
    }


def manifest_from_dict(data: dict) -> RenderManifest:
    return RenderManifest(
        clips=tuple(
            Clip(c["scene_index"], c["clip_ref"], c["duration_s"])
            for c in data["clips"]
        ),
        total_duration_s=data["total_duration_s"],
        settings=RenderSettings(data["settings"]["per_scene_duration_s"]),
    )
