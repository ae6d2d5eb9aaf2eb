"""Collaborative authoring pipeline for pedagogically constrained videos."""

from .blueprint import (
    Scene,
    ScriptBlueprint,
    parse_blueprint,
    serialize_blueprint,
)
from .prompts import (
    PromptConfig,
    assemble_generation_prompt,
    assemble_review_prompt,
    default_generation_config,
    default_review_config,
)
from .review import ReviewReport, apply_all, apply_selective, parse_review
from .service import ProjectService
from .workflow import ProjectState, legal_events, progress, transition

__version__ = "0.1.0"

__all__ = [
    "PromptConfig",
    "ProjectService",
    "ProjectState",
    "ReviewReport",
    "Scene",
    "ScriptBlueprint",
    "apply_all",
    "apply_selective",
    "assemble_generation_prompt",
    "assemble_review_prompt",
    "default_generation_config",
    "default_review_config",
    "legal_events",
    "parse_blueprint",
    "parse_review",
    "progress",
    "serialize_blueprint",
    "transition",
    "__version__",
]
