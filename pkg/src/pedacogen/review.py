"""Reviewer-response parsing and feedback application.

A reviewer response has three sections: detailed results, enumerated
suggestions, and a revised script.  Feedback can be applied wholesale
(adopt the revised script) or selectively (copy chosen scene fields,
accept chosen insertions/removals) onto the current blueprint.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .blueprint import (
    FIELD_NAMES,
    BlueprintError,
    SceneDiff,
    ScriptBlueprint,
    blueprint_from_dict,
    blueprint_to_dict,
    diff_blueprints,
    normalize_indices,
    parse_blueprint,
    serialize_blueprint,
)
from .errors import DomainError

SECTION_DETAILED = "Detailed Review Results"
SECTION_SUGGESTIONS = "Suggestions for Improvement"
SECTION_REVISED = "Revised Script"
_SECTIONS = (SECTION_DETAILED, SECTION_SUGGESTIONS, SECTION_REVISED)

_SCENE_REF_RE = re.compile(r"\bscenes?\s+(\d+)\b", re.IGNORECASE)
_ENUM_RE = re.compile(r"^\s*(?:\d+[.)]|[-*•])\s+")


class ReviewError(DomainError):
    code = "review_error"


class MissingSection(ReviewError):
    code = "missing_section"

    def __init__(self, section: str):
        super().__init__(f"reviewer response lacks a '{section}' section",
                         detail={"section": section})
        self.section = section


class RevisedScriptUnparseable(ReviewError):
    code = "revised_script_unparseable"

    def __init__(self, cause: BlueprintError):
        super().__init__(f"revised script did not parse: {cause}",
                         detail={"cause_code": cause.code, "cause": str(cause)})
        self.cause = cause


class UnknownSceneRef(ReviewError):
    code = "unknown_scene_ref"


class UnknownField(ReviewError):
    code = "unknown_field"


@dataclass(frozen=True, slots=True)
class Suggestion:
    ordinal: int
    scene_refs: frozenset[int]
    text: str


@dataclass(frozen=True, slots=True)
class ReviewReport:
    detailed_results: str
    suggestions: tuple[Suggestion, ...]
    revised_script: ScriptBlueprint
    iteration: int = 1


def extract_scene_refs(text: str) -> frozenset[int]:
    return frozenset(int(n) for n in _SCENE_REF_RE.findall(text))


def make_suggestion(ordinal: int, text: str) -> Suggestion:
    """Canonical constructor: scene references are derived from the text."""
    return Suggestion(ordinal=ordinal, scene_refs=extract_scene_refs(text), text=text)


def _header_re(section: str) -> re.Pattern:
    return re.compile(
        r"^\s*[*_#]*\s*" + re.escape(section) + r"\s*[*_]*\s*:?\s*[*_]*\s*(.*)$",
        re.IGNORECASE,
    )


def _split_suggestions(body: str) -> tuple[Suggestion, ...]:
    chunks: list[list[str]] = []
    current: list[str] | None = None
    for line in body.split("\n"):
        if _ENUM_RE.match(line):
            current = [_ENUM_RE.sub("", line, count=1)]
            chunks.append(current)
        elif current is not None:
            current.append(line)
        elif line.strip():
            # Un-enumerated lead-in counts as a suggestion of its own.
            current = [line]
            chunks.append(current)
    texts = [chunk_text for c in chunks if (chunk_text := "\n".join(c).strip())]
    return tuple(make_suggestion(i, t) for i, t in enumerate(texts, start=1))


def parse_review(text: str, iteration: int = 1) -> ReviewReport:
    """Parse a raw reviewer response into a ReviewReport.

    Headers are matched case-insensitively, tolerating bold markers and
    trailing colons; text after a header on the same line belongs to that
    section.  The revised-script section goes through parse_blueprint.
    """
    lines = text.replace("\r\n", "\n").replace("\r", "\n").split("\n")
    positions: dict[str, tuple[int, str]] = {}
    for section in _SECTIONS:
        pattern = _header_re(section)
        for lineno, line in enumerate(lines):
            if section not in positions:
                m = pattern.match(line)
                if m:
                    positions[section] = (lineno, m.group(1).strip())
    for section in _SECTIONS:
        if section not in positions:
            raise MissingSection(section)

    ordered = sorted(_SECTIONS, key=lambda s: positions[s][0])
    bodies: dict[str, str] = {}
    for pos, section in enumerate(ordered):
        start, inline = positions[section]
        end = positions[ordered[pos + 1]][0] if pos + 1 < len(ordered) else len(lines)
        body_lines = ([inline] if inline else []) + lines[start + 1 : end]
        bodies[section] = "\n".join(body_lines).strip()

    try:
        revised = parse_blueprint(bodies[SECTION_REVISED])
    except BlueprintError as exc:
        raise RevisedScriptUnparseable(exc) from exc

    return ReviewReport(
        detailed_results=bodies[SECTION_DETAILED],
        suggestions=_split_suggestions(bodies[SECTION_SUGGESTIONS]),
        revised_script=revised,
        iteration=iteration,
    )


def render_review(report: ReviewReport) -> str:
    """Canonical inverse of parse_review (for fixtures and transcripts)."""
    suggestion_lines = "\n".join(
        f"{s.ordinal}. {s.text}" for s in report.suggestions
    )
    return (
        f"{SECTION_DETAILED}:\n{report.detailed_results}\n\n"
        f"{SECTION_SUGGESTIONS}:\n{suggestion_lines}\n\n"
        f"{SECTION_REVISED}:\n{serialize_blueprint(report.revised_script)}"
    )


def apply_all(current: ScriptBlueprint, report: ReviewReport) -> ScriptBlueprint:
    """Adopt the revised script wholesale; bumps the revision id."""
    return replace(
        normalize_indices(report.revised_script),
        revision_id=current.revision_id + 1,
        topic_label=current.topic_label,
    )


def apply_selective(
    current: ScriptBlueprint,
    report: ReviewReport,
    picks: set[tuple[int, str]],
) -> ScriptBlueprint:
    """Apply only the picked (scene_index, field) changes.

    A pick whose scene exists in both blueprints copies that field from the
    revised scene.  A pick naming a scene present only in the revised script
    inserts the whole scene; one naming a scene present only in the current
    script accepts its removal.  Everything unpicked stays byte-identical.
    """
    cur = {s.index: s for s in normalize_indices(current).scenes}
    rev = {s.index: s for s in normalize_indices(report.revised_script).scenes}
    for index, field_name in picks:
        if field_name not in FIELD_NAMES:
            raise UnknownField(f"unknown field {field_name!r}",
                               detail={"field": field_name})
        if index not in cur and index not in rev:
            raise UnknownSceneRef(f"scene {index} exists in neither script",
                                  detail={"scene_index": index})

    picked_indices = {index for index, _ in picks}
    result = []
    for i in range(1, max(len(cur), len(rev)) + 1):
        if i in cur and i in rev:
            scene = cur[i]
            for field_name in FIELD_NAMES:
                if (i, field_name) in picks:
                    scene = replace(scene, **{field_name: rev[i].get_field(field_name)})
            result.append(scene)
        elif i in cur:
            if i not in picked_indices:
                result.append(cur[i])
        elif i in rev and i in picked_indices:
            result.append(rev[i])
    out = normalize_indices(ScriptBlueprint(scenes=tuple(result)))
    return replace(out, revision_id=current.revision_id + 1,
                   topic_label=current.topic_label)


def review_delta(current: ScriptBlueprint, report: ReviewReport) -> list[SceneDiff]:
    return diff_blueprints(current, report.revised_script)


def picks_from_diffs(diffs: list[SceneDiff]) -> set[tuple[int, str]]:
    """Translate a scene diff into the pick set covering every change."""
    picks: set[tuple[int, str]] = set()
    for diff in diffs:
        fields = diff.changed_fields if diff.kind == "modified" else FIELD_NAMES
        picks.update((diff.scene_index, f) for f in fields)
    return picks


def report_to_dict(report: ReviewReport) -> dict:
    return {
        "detailed_results": report.detailed_results,
        "suggestions": [
            {"ordinal": s.ordinal, "scene_refs": sorted(s.scene_refs), "text": s.text}
            for s in report.suggestions
        ],
        "revised_script": blueprint_to_dict(report.revised_script),
        "iteration": report.iteration,
    }


def report_from_dict(data: dict) -> ReviewReport:
    return ReviewReport(
        detailed_results=data["detailed_results"],
        suggestions=tuple(
            Suggestion(s["ordinal"], frozenset(s["scene_refs"]), s["text"])
            for s in data["suggestions"]
        ),
        revised_script=blueprint_from_dict(data["revised_script"]),
        iteration=data.get("iteration", 1),
    )
