"""Principle registry and deterministic prompt assembly.

The registry holds the twelve multimedia-learning principles grouped by the
cognitive function they serve.  Prompt assembly compiles a PromptConfig into
the exact default prompt texts used for script generation and script review;
the defaults are frozen as checked-in fixtures and the assembler must
reproduce them byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .blueprint import EmptyBlueprint, ScriptBlueprint, serialize_blueprint
from .errors import DomainError

GENERATION = "generation"
REVIEW = "review"

CONTENT_SLOT = "<Insert the learning content here.>"
SCRIPT_SLOT = "<Insert the video generation script here.>"

REDUCE_EXTRANEOUS = "reduce_extraneous"
MANAGE_ESSENTIAL = "manage_essential"
FOSTER_GENERATIVE = "foster_generative"


class EmptyContent(DomainError):
    code = "empty_content"


@dataclass(frozen=True, slots=True)
class Principle:
    id: str
    name: str
    category: str
    guideline: str
    rationale: str


@dataclass(frozen=True, slots=True)
class DirectiveGroup:
    title: str
    directives: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class PromptConfig:
    mode: str
    preamble: str
    groups: tuple[DirectiveGroup, ...]
    constraints: tuple[str, ...]
    output_format: str
    custom_instructions: str | None = None


_PRINCIPLES = (
    Principle(
        "coherence", "Coherence", REDUCE_EXTRANEOUS,
        "Exclude extraneous, irrelevant material.",
        "Reduce cognitive load by preventing distraction from non-essential "
        "information.",
    ),
    Principle(
        "signaling", "Signaling", REDUCE_EXTRANEOUS,
        "Highlight essential information.",
        "Direct the learner's limited attention to critical elements.",
    ),
    Principle(
        "redundancy", "Redundancy", REDUCE_EXTRANEOUS,
        "Avoid presenting identical information simultaneously in text and "
        "narration.",
        "Prevent overload from processing redundant verbal information in two "
        "channels.",
    ),
    Principle(
        "spatial_contiguity", "Spatial Contiguity", REDUCE_EXTRANEOUS,
        "Place corresponding words and pictures near each other on the screen.",
        "Reduce the cognitive effort needed to mentally integrate related "
        "information.",
    ),
    Principle(
        "temporal_contiguity", "Temporal Contiguity", REDUCE_EXTRANEOUS,
        "Present corresponding words and pictures at the same time.",
        "Reduce the cognitive load of holding information in working memory "
        "while waiting for the other part.",
    ),
    Principle(
        "segmenting", "Segmenting", MANAGE_ESSENTIAL,
        "Break the lesson into smaller, learner-paced segments.",
        "Help manage the complexity of the material by allowing learners to "
        "process one at a time.",
    ),
    Principle(
        "pre_training", "Pre-training", MANAGE_ESSENTIAL,
        "Introduce key concepts and their names before the lesson.",
        "Activate relevant prior knowledge and reduce the load during the "
        "main lesson.",
    ),
    Principle(
        "modality", "Modality", MANAGE_ESSENTIAL,
        "Present words as narration rather than on-screen text, especially "
        "for complex visuals.",
        "Distribute cognitive processing across both visual and auditory "
        "channels, avoiding overload in the visual channel.",
    ),
    Principle(
        "multimedia", "Multimedia", FOSTER_GENERATIVE,
        "Present information using both words and pictures rather than words "
        "alone.",
        "Encourage learners to build connections between visual and verbal "
        "mental models.",
    ),
    Principle(
        "personalization", "Personalization", FOSTER_GENERATIVE,
        "Use a conversational and informal tone.",
        "Promote social engagement, which encourages deeper cognitive "
        "processing.",
    ),
    Principle(
        "voice", "Voice", FOSTER_GENERATIVE,
        "Use a human voice for narration rather than a machine voice.",
        "A human voice can better convey social cues so that learners engage "
        "with the material.",
    ),
    Principle(
        "image", "Image", FOSTER_GENERATIVE,
        "Use clear, high-quality visuals that are directly relevant to the "
        'content, and avoid extraneous or technically poor images (e.g., an '
        'unnecessary "talking head").',
        "Ensure the learner's cognitive resources are focused on "
        "understanding the content, rather than being diverted by processing "
        "irrelevant social cues (from an instructor's image) or deciphering "
        "technically poor visuals.",
    ),
)


def principle_registry() -> list[Principle]:
    return list(_PRINCIPLES)


_COHERENCE = DirectiveGroup(
    "Coherence",
    (
        "Background music should not be used.",
        "The learning content must be preserved in both the narration and the video.",
        "The content of the video and the learning content must be directly related.",
        "The content of the narration and the learning content must be directly related.",
    ),
)
_MODALITY_REDUNDANCY = DirectiveGroup(
    "Modality & Redundancy",
    (
        "Use images or voice-over narration instead of on-screen text.",
        "Educational content included in the narration should have minimal "
        "corresponding text displayed on the screen.",
    ),
)
_LEARNER_FRIENDLY = DirectiveGroup(
    "Learner-Friendly",
    (
        "The narration script should be written in a friendly and gentle "
        "conversational style.",
        "Use a first-person, informal, and conversational tone.",
        "Use a standard human voice rather than a machine voice.",
    ),
)
_CONTIGUITY = DirectiveGroup(
    "Contiguity",
    (
        "Write the script so that narration and visuals are synchronized in "
        "time and aligned in meaning.",
        "Place related text and graphics close to each other on the screen.",
    ),
)
# The review variant demands professional-quality scene descriptions; the
# generation variant only asks for clarity.  The two defaults differ on
# purpose and must not be reconciled.
_VISUALS_SHARED = (
    "Only describe scenes that directly aid in understanding the learning "
    "content; exclude decorative or irrelevant visuals.",
    "Use signaling cues (arrows, highlight colors, bold text, etc.) to "
    "direct attention to important information.",
    "Avoid displaying the speaker's face continuously; prioritize visuals "
    "that explain the content.",
)
_VISUALS_GENERATION = DirectiveGroup(
    "Visuals",
    ("Descriptions of video scenes should be clear.",) + _VISUALS_SHARED,
)
_VISUALS_REVIEW = DirectiveGroup(
    "Visuals",
    ("Descriptions of video scenes should be clear, specific, and of "
     "professional quality.",) + _VISUALS_SHARED,
)
_LEARNING_FLOW = DirectiveGroup(
    "Learning Flow",
    (
        "Avoid presenting too much information in a single scene; spread it "
        "out over multiple scenes.",
        "Introduce key terms and concepts early (e.g., in Scene 1-2) before "
        "presenting complex content.",
    ),
)

_GENERATION_PREAMBLE = "[Principles and Constraints for Educational Video Production]"
_REVIEW_PREAMBLE = (
    "You are an expert reviewer who meticulously examines and provides "
    "feedback on educational video scripts. Referring to all the "
    "instructions below, review the provided [Video Generation Script] to "
    "ensure it accurately reflects the [Learning Content] and complies with "
    "all [Constraints and Principles]. After a detailed review, write a "
    "revised script."
)

_GENERATION_OUTPUT_FORMAT = (
    "<Scene 1>\n"
    "Visual Description: ...\n"
    "Clear Narration: ...\n"
    "\n"
    "<Scene N>\n"
    "Visual Description: ...\n"
    "Clear Narration: ..."
)
_REVIEW_OUTPUT_FORMAT = (
    "Detailed Review Results:\n"
    "Suggestions for Improvement: (Point out specific scene numbers where "
    "the learning content is inadequately reflected or where principles are "
    "violated, and propose clear revision plans.)\n"
    "Revised Script: (Output the entire final script reflecting all the "
    "suggested improvements.)"
)

MAX_SCENES_DEFAULT_CONSTRAINT = "Maximum scene count: Make your own judgment."


def default_generation_config(max_scenes: int | None = None) -> PromptConfig:
    """Default script-generation prompt configuration.

    max_scenes, when given, replaces the judgment-based scene-count
    constraint with a hard numeric cap.
    """
    scene_constraint = (
        MAX_SCENES_DEFAULT_CONSTRAINT
        if max_scenes is None
        else f"Maximum scene count: {max_scenes}."
    )
    return PromptConfig(
        mode=GENERATION,
        preamble=_GENERATION_PREAMBLE,
        groups=(
            _COHERENCE,
            _MODALITY_REDUNDANCY,
            _LEARNER_FRIENDLY,
            _CONTIGUITY,
            _VISUALS_GENERATION,
            _LEARNING_FLOW,
        ),
        constraints=(
            "Assign a suitable length of narration to a scene.",
            scene_constraint,
        ),
        output_format=_GENERATION_OUTPUT_FORMAT,
    )


def default_review_config() -> PromptConfig:
    return PromptConfig(
        mode=REVIEW,
        preamble=_REVIEW_PREAMBLE,
        groups=(
            _COHERENCE,
            _MODALITY_REDUNDANCY,
            _LEARNER_FRIENDLY,
            _CONTIGUITY,
            _VISUALS_REVIEW,
            _LEARNING_FLOW,
        ),
        constraints=(
            "Assign only one narration sentence to a single scene.",
            MAX_SCENES_DEFAULT_CONSTRAINT,
        ),
        output_format=_REVIEW_OUTPUT_FORMAT,
    )


def add_constraint(config: PromptConfig, text: str) -> PromptConfig:
    return replace(config, constraints=config.constraints + (text,))


def add_directive(config: PromptConfig, group_title: str, text: str) -> PromptConfig:
    groups = tuple(
        replace(g, directives=g.directives + (text,)) if g.title == group_title else g
        for g in config.groups
    )
    return replace(config, groups=groups)


def _principles_chunks(groups: tuple[DirectiveGroup, ...]) -> list[str]:
    chunks = ["<Principles>"]
    for pos, group in enumerate(groups, start=1):
        lines = [f"{pos}. {group.title}"]
        lines.extend(f"- {d}" for d in group.directives)
        chunks.append("\n".join(lines))
    return chunks


def _constraints_chunk(constraints: tuple[str, ...]) -> str:
    return "\n".join(f"{pos}. {c}" for pos, c in enumerate(constraints, start=1))


def assemble_generation_prompt(config: PromptConfig, content: str) -> str:
    """Compile the script-generation prompt; ends with the learning content."""
    content = content.strip()
    if not content:
        raise EmptyContent("learning content is empty")
    chunks = [config.preamble]
    chunks.extend(_principles_chunks(config.groups))
    chunks.extend(["<Constraints>", _constraints_chunk(config.constraints)])
    if config.custom_instructions:
        chunks.extend(["<Additional Instructions>", config.custom_instructions.strip()])
    chunks.extend(["[Output Format]", config.output_format])
    chunks.extend(["[Learning Content]", content])
    return "\n\n".join(chunks)


def assemble_review_prompt(
    config: PromptConfig,
    content: str,
    bp: ScriptBlueprint,
    extra: str | None = None,
) -> str:
    """Compile the review prompt around the current script.

    `extra` carries per-request reviewer instructions; it joins any
    configured custom instructions in an additional criteria block.
    """
    content = content.strip()
    if not content:
        raise EmptyContent("learning content is empty")
    if not bp.scenes:
        raise EmptyBlueprint("cannot request a review of an empty script")
    return _review_prompt(config, content, serialize_blueprint(bp), extra)


def _review_prompt(
    config: PromptConfig, content: str, script: str, extra: str | None = None
) -> str:
    chunks = [config.preamble, "[Review Criteria]"]
    chunks.extend(_principles_chunks(config.groups))
    chunks.extend(["<Constraints>", _constraints_chunk(config.constraints)])
    additions = [
        text.strip()
        for text in (config.custom_instructions, extra)
        if text and text.strip()
    ]
    if additions:
        chunks.append("<Additional Review Criteria>")
        chunks.extend(additions)
    chunks.extend(["[Output Format]", config.output_format])
    chunks.extend(["[Learning Content]", content])
    chunks.extend(["[Video Generation Script]", script])
    return "\n\n".join(chunks)


def generation_prompt_template(config: PromptConfig | None = None) -> str:
    """The generation prompt with an unfilled learning-content slot."""
    return assemble_generation_prompt(config or default_generation_config(), CONTENT_SLOT)


def review_prompt_template(config: PromptConfig | None = None) -> str:
    """The review prompt with unfilled content and script slots."""
    return _review_prompt(config or default_review_config(), CONTENT_SLOT, SCRIPT_SLOT)


def config_to_dict(config: PromptConfig) -> dict:
    return {
        "mode": config.mode,
        "preamble": config.preamble,
        "groups": [
            {"title": g.title, "directives": list(g.directives)} for g in config.groups
        ],
        "constraints": list(config.constraints),
        "output_format": config.output_format,
        "custom_instructions": config.custom_instructions,
    }


def config_from_dict(data: dict) -> PromptConfig:
    return PromptConfig(
        mode=data["mode"],
        preamble=data["preamble"],
        groups=tuple(
            DirectiveGroup(g["title"], tuple(g["directives"])) for g in data["groups"]
        ),
        constraints=tuple(data["constraints"]),
        output_format=data["output_format"],
        custom_instructions=data.get("custom_instructions"),
    )
