"""Scene-script representation: parsing, serialization, normalization, diffing.

A script is an ordered list of scenes.  Each scene carries two text fields,
a visual description and a narration line, and the textual form looks like::

    <Scene 1>
    Visual Description: A slow pan over a coral reef.
    Clear Narration: Coral reefs shelter a quarter of all marine species.

The parser is deliberately tolerant of the kind of noise language models
produce around this shape (markdown bold, stray code fences, loose spacing
inside headers) while mapping every malformed input to exactly one declared
error.  The serializer emits the canonical form, and parsing a serialized
blueprint always returns an equal blueprint.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, replace

from .errors import DomainError

FIELD_NAMES = ("visual_description", "narration")

_FIELD_LABELS = {
    "visual description": "visual_description",
    "clear narration": "narration",
}

# Canonical labels, keyed by field name.
_LABEL_TEXT = {
    "visual_description": "Visual Description",
    "narration": "Clear Narration",
}

# `([*_]{1,3})?` captures an optional bold/italic run; the backreferences let
# us strip only a matching closing run, so values that start with `*` survive.
_HEADER_RE = re.compile(
    r"^\s*([*_]{1,3})?\s*<\s*scene\s*(\d+)\s*>\s*(?:\1)?\s*$", re.IGNORECASE
)
_HEADER_LOOSE_RE = re.compile(
    r"^\s*[*_]*\s*<\s*scene\b([^>]*)>\s*[*_]*\s*$", re.IGNORECASE
)
_LABEL_RE = re.compile(
    r"^\s*([*_]{1,3})?(Visual Description|Clear Narration)(?:\1)?\s*:(?:\1)?\s?(.*)$",
    re.IGNORECASE,
)
_FENCE_RE = re.compile(r"^\s*```[\w-]*\s*$")


class BlueprintError(DomainError):
    code = "blueprint_error"


class MissingHeader(BlueprintError):
    code = "missing_header"


class MissingField(BlueprintError):
    code = "missing_field"


class DuplicateIndex(BlueprintError):
    code = "duplicate_index"


class EmptyField(BlueprintError):
    code = "empty_field"


class HeaderNotInteger(BlueprintError):
    code = "header_not_integer"


class InvariantViolation(BlueprintError):
    code = "invariant_violation"


class EmptyBlueprint(BlueprintError):
    """Guard for operations that need at least one scene; parse never raises it."""

    code = "empty_blueprint"


class BlueprintWarning(UserWarning):
    """Recoverable oddity in accepted input, e.g. out-of-order scene numbers."""


@dataclass(frozen=True, slots=True)
class Scene:
    index: int
    visual_description: str
    narration: str

    def get_field(self, name: str) -> str:
        if name not in FIELD_NAMES:
            raise KeyError(name)
        return getattr(self, name)


@dataclass(frozen=True, slots=True)
class ScriptBlueprint:
    scenes: tuple[Scene, ...]
    revision_id: int = 0
    topic_label: str | None = None

    def __len__(self) -> int:
        return len(self.scenes)

    def scene(self, index: int) -> Scene:
        for s in self.scenes:
            if s.index == index:
                return s
        raise KeyError(index)


@dataclass(frozen=True, slots=True)
class SceneDiff:
    scene_index: int
    kind: str  # "added" | "removed" | "modified"
    changed_fields: frozenset[str] = frozenset()
    before: Scene | None = None
    after: Scene | None = None


def _is_header_line(line: str) -> bool:
    return bool(_HEADER_RE.match(line) or _HEADER_LOOSE_RE.match(line))


def _is_label_line(line: str) -> bool:
    return bool(_LABEL_RE.match(line))


def _strip_outer_fences(lines: list[str]) -> list[str]:
    # Only document-edge fences are markdown wrapping; interior ones are content.
    start, end = 0, len(lines)
    while start < end and not lines[start].strip():
        start += 1
    while end > start and not lines[end - 1].strip():
        end -= 1
    if start < end and _FENCE_RE.match(lines[start]):
        start += 1
    if start < end and _FENCE_RE.match(lines[end - 1]):
        end -= 1
    return lines[start:end]


def parse_blueprint(text: str) -> ScriptBlueprint:
    """Parse the textual scene-script form into a ScriptBlueprint.

    Tolerated noise: CRLF line endings, bold/italic marks wrapping headers or
    labels, a code fence around the whole document, and loose whitespace
    inside headers.  Scene numbers that are unique but not 1..N in order are
    accepted, renumbered, and reported via BlueprintWarning.

    Raises MissingHeader, MissingField, DuplicateIndex, EmptyField, or
    HeaderNotInteger; never anything else, for any input string.
    """
    lines = _strip_outer_fences(text.replace("\r\n", "\n").replace("\r", "\n").split("\n"))

    raw_scenes: list[tuple[int, dict[str, list[str]]]] = []
    cur_index: int | None = None
    cur_fields: dict[str, list[str]] = {}
    cur_field: str | None = None

    def finalize() -> None:
        if cur_index is None:
            return
        for name in FIELD_NAMES:
            if name not in cur_fields:
                raise MissingField(
                    f"scene {cur_index} lacks a '{_LABEL_TEXT[name]}' field",
                    detail={"scene_index": cur_index, "field": name},
                )
            if not "\n".join(cur_fields[name]).strip():
                raise EmptyField(
                    f"scene {cur_index}: '{_LABEL_TEXT[name]}' is empty",
                    detail={"scene_index": cur_index, "field": name},
                )
        raw_scenes.append((cur_index, cur_fields))

    for line in lines:
        m = _HEADER_RE.match(line)
        if m:
            finalize()
            cur_index = int(m.group(2))
            cur_fields = {}
            cur_field = None
            continue
        if _HEADER_LOOSE_RE.match(line):
            raise HeaderNotInteger(
                f"scene header without a positive integer: {line.strip()!r}",
                detail={"line": line.strip()},
            )
        m = _LABEL_RE.match(line)
        if m:
            name = _FIELD_LABELS[m.group(2).lower()]
            if cur_index is None:
                raise MissingHeader(
                    f"'{_LABEL_TEXT[name]}' appears before any scene header",
                    detail={"field": name},
                )
            if name in cur_fields:
                # A repeated label means a new scene started without its header.
                raise MissingHeader(
                    f"'{_LABEL_TEXT[name]}' repeats inside scene {cur_index}; "
                    "a scene header is missing",
                    detail={"scene_index": cur_index, "field": name},
                )
            cur_fields[name] = [m.group(3)]
            cur_field = name
            continue
        if cur_field is not None:
            cur_fields[cur_field].append(line)
            continue
        if not line.strip():
            continue
        if cur_index is None:
            raise MissingHeader(
                f"content before the first scene header: {line.strip()!r}",
                detail={"line": line.strip()},
            )
        raise MissingField(
            f"scene {cur_index}: expected a field label, found {line.strip()!r}",
            detail={"scene_index": cur_index, "line": line.strip()},
        )

    finalize()
    if not raw_scenes:
        raise MissingHeader("no scene headers found")

    seen: set[int] = set()
    for idx, _ in raw_scenes:
        if idx in seen:
            raise DuplicateIndex(f"scene index {idx} appears more than once",
                                 detail={"scene_index": idx})
        seen.add(idx)

    indices = [idx for idx, _ in raw_scenes]
    if indices != list(range(1, len(indices) + 1)):
        warnings.warn(
            f"scene numbers {indices} are not 1..{len(indices)}; renumbering",
            BlueprintWarning,
            stacklevel=2,
        )

    scenes = tuple(
        Scene(
            index=pos,
            visual_description="\n".join(fields["visual_description"]).strip(),
            narration="\n".join(fields["narration"]).strip(),
        )
        for pos, (_, fields) in enumerate(raw_scenes, start=1)
    )
    return ScriptBlueprint(scenes=scenes)


def _check_field_invariant(scene: Scene, name: str) -> None:
    value = scene.get_field(name)
    if not value.strip():
        raise InvariantViolation(
            f"scene {scene.index}: '{_LABEL_TEXT[name]}' is empty",
            detail={"scene_index": scene.index, "field": name},
        )
    if value != value.strip():
        raise InvariantViolation(
            f"scene {scene.index}: '{_LABEL_TEXT[name]}' has untrimmed whitespace",
            detail={"scene_index": scene.index, "field": name},
        )
    for ln in value.split("\n"):
        if _is_header_line(ln) or _is_label_line(ln):
            raise InvariantViolation(
                f"scene {scene.index}: '{_LABEL_TEXT[name]}' contains a "
                f"header or label token: {ln.strip()!r}",
                detail={"scene_index": scene.index, "field": name, "line": ln},
            )


def serialize_blueprint(bp: ScriptBlueprint) -> str:
    """Emit the canonical textual form; inverse of parse_blueprint.

    Raises InvariantViolation if indices are not exactly 1..N in order or a
    field would not survive the round trip.
    """
    indices = [s.index for s in bp.scenes]
    if indices != list(range(1, len(indices) + 1)):
        raise InvariantViolation(
            f"scene indices {indices} are not contiguous from 1",
            detail={"indices": indices},
        )
    blocks = []
    for scene in bp.scenes:
        for name in FIELD_NAMES:
            _check_field_invariant(scene, name)
        blocks.append(
            f"<Scene {scene.index}>\n"
            f"Visual Description: {scene.visual_description}\n"
            f"Clear Narration: {scene.narration}"
        )
    return "\n\n".join(blocks)


def normalize_indices(bp: ScriptBlueprint) -> ScriptBlueprint:
    """Renumber scenes to 1..N preserving order; content is untouched."""
    scenes = tuple(replace(s, index=i) for i, s in enumerate(bp.scenes, start=1))
    return replace(bp, scenes=scenes)


def diff_blueprints(old: ScriptBlueprint, new: ScriptBlueprint) -> list[SceneDiff]:
    """Positional scene-by-scene diff between two normalized blueprints."""
    old_by_index = {s.index: s for s in normalize_indices(old).scenes}
    new_by_index = {s.index: s for s in normalize_indices(new).scenes}
    diffs: list[SceneDiff] = []
    for i in range(1, max(len(old_by_index), len(new_by_index)) + 1):
        a, b = old_by_index.get(i), new_by_index.get(i)
        if a is not None and b is None:
            diffs.append(SceneDiff(i, "removed", frozenset(FIELD_NAMES), before=a))
        elif a is None and b is not None:
            diffs.append(SceneDiff(i, "added", frozenset(FIELD_NAMES), after=b))
        else:
            changed = frozenset(
                name for name in FIELD_NAMES if a.get_field(name) != b.get_field(name)
            )
            if changed:
                diffs.append(SceneDiff(i, "modified", changed, before=a, after=b))
    return diffs


def blueprint_to_dict(bp: ScriptBlueprint) -> dict:
    return {
        "scenes": [
            {
                "index": s.index,
                "visual_description": s.visual_description,
                "narration": s.narration,
            }
            for s in bp.scenes
        ],
        "revision_id": bp.revision_id,
        **({"topic_label": bp.topic_label} if bp.topic_label is not None else {}),
    }


def blueprint_from_dict(data: dict) -> ScriptBlueprint:
    scenes = tuple(
        Scene(
            index=int(s["index"]),
            visual_description=s["visual_description"],
            narration=s["narration"],
        )
        for s in data["scenes"]
    )
    return ScriptBlueprint(
        scenes=scenes,
        revision_id=int(data.get("revision_id", 0)),
        topic_label=data.get("topic_label"),
    )
