"""Shared hypothesis strategies for blueprint and review-pair generation."""

import re

from hypothesis import strategies as st

from pedacogen import blueprint as bp_mod
from pedacogen.blueprint import Scene, ScriptBlueprint

_SECTION_WORDS = re.compile(
    r"detailed review results|suggestions for improvement|revised script",
    re.IGNORECASE,
)
_ENUM = re.compile(r"^\s*(?:\d+[.)]|[-*•])\s+")


def clean_line(s: str) -> bool:
    return bool(
        s
        and s == s.strip()
        and not bp_mod._is_header_line(s)
        and not bp_mod._is_label_line(s)
        and not _SECTION_WORDS.search(s)
        and not _ENUM.match(s)
    )


line_st = (
    st.text(
        alphabet=st.characters(blacklist_categories=("Cs",), blacklist_characters="\r\n"),
        min_size=1,
        max_size=40,
    )
    .map(str.strip)
    .filter(clean_line)
)

field_st = st.lists(line_st, min_size=1, max_size=2).map("\n".join)


@st.composite
def blueprints(draw, min_scenes=1, max_scenes=6):
    n = draw(st.integers(min_value=min_scenes, max_value=max_scenes))
    scenes = tuple(
        Scene(index=i, visual_description=draw(field_st), narration=draw(field_st))
        for i in range(1, n + 1)
    )
    return ScriptBlueprint(scenes=scenes)


@st.composite
def revision_pairs(draw, max_scenes=6):
    """(current, revised): revised edits, removes, and appends scenes."""
    current = draw(blueprints(max_scenes=max_scenes))
    revised_scenes = []
    for scene in current.scenes:
        action = draw(st.sampled_from(("keep", "vd", "narr", "both", "drop")))
        if action == "drop":
            continue
        vd = draw(field_st) if action in ("vd", "both") else scene.visual_description
        narr = draw(field_st) if action in ("narr", "both") else scene.narration
        revised_scenes.append((vd, narr))
    for _ in range(draw(st.integers(min_value=0, max_value=2))):
        revised_scenes.append((draw(field_st), draw(field_st)))
    if not revised_scenes:
        revised_scenes.append((draw(field_st), draw(field_st)))
    revised = ScriptBlueprint(
        scenes=tuple(
            Scene(index=i, visual_description=vd, narration=narr)
            for i, (vd, narr) in enumerate(revised_scenes, start=1)
        )
    )
    return current, revised
