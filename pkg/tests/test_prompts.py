from pathlib import Path

import pytest

from pedacogen.blueprint import EmptyBlueprint, Scene, ScriptBlueprint, serialize_blueprint
from pedacogen.prompts import (
    EmptyContent,
    add_constraint,
    add_directive,
    assemble_generation_prompt,
    assemble_review_prompt,
    config_from_dict,
    config_to_dict,
    default_generation_config,
    default_review_config,
    principle_registry,
)

DATA = Path(__file__).parent / "data"
CONTENT_SLOT = "<Insert the learning content here.>"
SCRIPT_SLOT = "<Insert the video generation script here.>"

CONTENT = (
    "Photosynthesis converts light energy into chemical energy.\n"
    "Chlorophyll absorbs mostly red and blue light."
)

BP = ScriptBlueprint(
    scenes=(
        Scene(1, "A leaf backlit by the sun.", "Plants turn sunlight into food."),
        Scene(2, "Chloroplasts under a microscope.", "The work happens inside chloroplasts."),
    )
)


class TestRegistry:
    def test_twelve_principles(self):
        assert len(principle_registry()) == 12

    def test_category_counts(self):
        counts = {}
        for p in principle_registry():
            counts[p.category] = counts.get(p.category, 0) + 1
        assert counts == {
            "reduce_extraneous": 5,
            "manage_essential": 3,
            "foster_generative": 4,
        }

    def test_ids_unique(self):
        ids = [p.id for p in principle_registry()]
        assert len(set(ids)) == len(ids)

    def test_coherence_guideline(self):
        (coherence,) = [p for p in principle_registry() if p.id == "coherence"]
        assert coherence.guideline == "Exclude extraneous, irrelevant material."
        assert coherence.category == "reduce_extraneous"

    def test_names(self):
        names = {p.name for p in principle_registry()}
        assert names == {
            "Coherence", "Signaling", "Redundancy", "Spatial Contiguity",
            "Temporal Contiguity", "Segmenting", "Pre-training", "Modality",
            "Multimedia", "Personalization", "Voice", "Image",
        }


class TestDefaults:
    def test_generation_mode_and_constraints(self):
        config = default_generation_config()
        assert config.mode == "generation"
        assert config.constraints[0] == "Assign a suitable length of narration to a scene."
        assert config.constraints[1] == "Maximum scene count: Make your own judgment."

    def test_review_constraints_and_preamble(self):
        config = default_review_config()
        assert config.constraints[0] == "Assign only one narration sentence to a single scene."
        assert "an expert reviewer who meticulously examines" in config.preamble

    def test_six_groups_each(self):
        for config in (default_generation_config(), default_review_config()):
            assert [g.title for g in config.groups] == [
                "Coherence", "Modality & Redundancy", "Learner-Friendly",
                "Contiguity", "Visuals", "Learning Flow",
            ]

    def test_visuals_differ_between_modes(self):
        gen = {g.title: g for g in default_generation_config().groups}
        rev = {g.title: g for g in default_review_config().groups}
        assert gen["Visuals"].directives[0] == "Descriptions of video scenes should be clear."
        assert rev["Visuals"].directives[0] == (
            "Descriptions of video scenes should be clear, specific, and of "
            "professional quality."
        )
        for title in ("Coherence", "Modality & Redundancy", "Learner-Friendly",
                      "Contiguity", "Learning Flow"):
            assert gen[title] == rev[title]

    def test_signaling_cue_directive_present(self):
        gen = {g.title: g for g in default_generation_config().groups}
        assert any(
            "(arrows, highlight colors, bold text, etc.)" in d
            for d in gen["Visuals"].directives
        )

    def test_review_output_format_sections(self):
        fmt = default_review_config().output_format
        for section in ("Detailed Review Results", "Suggestions for Improvement",
                        "Revised Script"):
            assert section in fmt

    def test_max_scenes_override(self):
        config = default_generation_config(max_scenes=5)
        assert config.constraints[1] == "Maximum scene count: 5."
        assert config.constraints[0] == "Assign a suitable length of narration to a scene."


class TestFixtureFidelity:
    def test_generation_prompt_matches_fixture(self):
        expected = (DATA / "generation_prompt.txt").read_text().replace(
            CONTENT_SLOT, CONTENT
        )
        assert assemble_generation_prompt(default_generation_config(), CONTENT) == expected

    def test_review_prompt_matches_fixture(self):
        expected = (
            (DATA / "review_prompt.txt")
            .read_text()
            .replace(CONTENT_SLOT, CONTENT)
            .replace(SCRIPT_SLOT, serialize_blueprint(BP))
        )
        assert assemble_review_prompt(default_review_config(), CONTENT, BP) == expected

    def test_fixtures_contain_no_trailing_newline(self):
        # The assembler ends exactly at the last slot, so the fixtures must too.
        for name in ("generation_prompt.txt", "review_prompt.txt"):
            assert not (DATA / name).read_text().endswith("\n")


class TestAssembly:
    def test_deterministic(self):
        a = assemble_generation_prompt(default_generation_config(), CONTENT)
        b = assemble_generation_prompt(default_generation_config(), CONTENT)
        assert a == b

    def test_starts_with_title_ends_with_content(self):
        prompt = assemble_generation_prompt(default_generation_config(), CONTENT)
        assert prompt.startswith(
            "[Principles and Constraints for Educational Video Production]"
        )
        assert prompt.endswith(CONTENT)

    def test_no_unresolved_slots_and_content_once(self):
        prompt = assemble_generation_prompt(default_generation_config(), CONTENT)
        assert CONTENT_SLOT not in prompt
        assert prompt.count(CONTENT) == 1
        review = assemble_review_prompt(default_review_config(), CONTENT, BP)
        assert CONTENT_SLOT not in review
        assert SCRIPT_SLOT not in review
        assert review.count(CONTENT) == 1
        assert review.count(serialize_blueprint(BP)) == 1

    def test_empty_content_rejected(self):
        with pytest.raises(EmptyContent):
            assemble_generation_prompt(default_generation_config(), "   \n ")
        with pytest.raises(EmptyContent):
            assemble_review_prompt(default_review_config(), "", BP)

    def test_empty_blueprint_rejected(self):
        with pytest.raises(EmptyBlueprint):
            assemble_review_prompt(
                default_review_config(), CONTENT, ScriptBlueprint(scenes=())
            )

    def test_added_constraint_extends_numbering(self):
        base = assemble_generation_prompt(default_generation_config(), CONTENT)
        extended_config = add_constraint(
            default_generation_config(), "Target audience: 8th grade"
        )
        extended = assemble_generation_prompt(extended_config, CONTENT)
        assert "3. Target audience: 8th grade" in extended
        assert extended.count("\n") == base.count("\n") + 1

    def test_monotonic_extension_prefix_stable(self):
        base_config = default_generation_config()
        base = assemble_generation_prompt(base_config, CONTENT)
        extended = assemble_generation_prompt(
            add_constraint(base_config, "Keep it under two minutes."), CONTENT
        )
        insertion = base.index("2. Maximum scene count") + len(
            "2. Maximum scene count: Make your own judgment."
        )
        assert extended[:insertion] == base[:insertion]

    def test_added_directive_lands_in_group(self):
        config = add_directive(
            default_generation_config(), "Visuals", "Prefer diagrams over photos."
        )
        prompt = assemble_generation_prompt(config, CONTENT)
        assert "- Prefer diagrams over photos." in prompt

    def test_custom_instructions_block(self):
        from dataclasses import replace

        config = replace(
            default_generation_config(),
            custom_instructions="Use metric units throughout.",
        )
        prompt = assemble_generation_prompt(config, CONTENT)
        assert "<Additional Instructions>\n\nUse metric units throughout." in prompt

    def test_review_extra_appears_verbatim(self):
        prompt = assemble_review_prompt(
            default_review_config(), CONTENT, BP,
            extra="Check reading level for 10-year-olds",
        )
        assert "Check reading level for 10-year-olds" in prompt
        assert "<Additional Review Criteria>" in prompt
        base = assemble_review_prompt(default_review_config(), CONTENT, BP)
        assert "<Additional Review Criteria>" not in base

    def test_config_dict_round_trip(self):
        for config in (default_generation_config(), default_review_config()):
            assert config_from_dict(config_to_dict(config)) == config
