import pytest
from hypothesis import given, settings, strategies as st

from pedacogen import blueprint as bp
from pedacogen.blueprint import (
    DuplicateIndex,
    EmptyField,
    HeaderNotInteger,
    InvariantViolation,
    MissingField,
    MissingHeader,
    Scene,
    ScriptBlueprint,
    blueprint_from_dict,
    blueprint_to_dict,
    diff_blueprints,
    normalize_indices,
    parse_blueprint,
    serialize_blueprint,
)

TWO_SCENES = (
    "<Scene 1>\n"
    "Visual Description: A slow pan over a coral reef.\n"
    "Clear Narration: Coral reefs shelter a quarter of all marine species.\n"
    "\n"
    "<Scene 2>\n"
    "Visual Description: Bleached coral in harsh light.\n"
    "Clear Narration: Warming water strips the reef of its color."
)


def make_bp(*pairs):
    scenes = tuple(
        Scene(index=i, visual_description=vd, narration=n)
        for i, (vd, n) in enumerate(pairs, start=1)
    )
    return ScriptBlueprint(scenes=scenes)


class TestParse:
    def test_two_scene_example(self):
        parsed = parse_blueprint(TWO_SCENES)
        assert len(parsed) == 2
        assert parsed.scene(1).visual_description == "A slow pan over a coral reef."
        assert parsed.scene(2).narration == "Warming water strips the reef of its color."
        assert parsed.revision_id == 0

    def test_serialize_is_canonical(self):
        assert serialize_blueprint(parse_blueprint(TWO_SCENES)) == TWO_SCENES

    def test_crlf_normalized(self):
        parsed = parse_blueprint(TWO_SCENES.replace("\n", "\r\n"))
        assert serialize_blueprint(parsed) == TWO_SCENES

    def test_bold_markers_stripped(self):
        noisy = (
            "**<Scene 1>**\n"
            "**Visual Description:** A cat.\n"
            "**Clear Narration**: It sits.\n"
        )
        parsed = parse_blueprint(noisy)
        assert parsed.scene(1).visual_description == "A cat."
        assert parsed.scene(1).narration == "It sits."

    def test_code_fence_stripped_at_edges(self):
        assert parse_blueprint("```\n" + TWO_SCENES + "\n```") == parse_blueprint(TWO_SCENES)

    def test_loose_header_spacing_and_case(self):
        parsed = parse_blueprint(
            "< scene 1 >\nvisual description: A dog.\nCLEAR NARRATION: It barks."
        )
        assert parsed.scene(1).narration == "It barks."

    def test_value_starting_with_asterisk_survives(self):
        src = "<Scene 1>\nVisual Description: A stage.\nClear Narration: *whisper* Look up."
        parsed = parse_blueprint(src)
        assert parsed.scene(1).narration == "*whisper* Look up."
        assert serialize_blueprint(parsed) == src

    def test_multiline_field_preserved(self):
        src = (
            "<Scene 1>\n"
            "Visual Description: First line.\n"
            "Second line.\n"
            "Clear Narration: One sentence."
        )
        parsed = parse_blueprint(src)
        assert parsed.scene(1).visual_description == "First line.\nSecond line."
        assert serialize_blueprint(parsed) == src

    def test_interior_blank_line_preserved(self):
        src = (
            "<Scene 1>\n"
            "Visual Description: Above.\n"
            "\n"
            "Below.\n"
            "Clear Narration: One sentence."
        )
        parsed = parse_blueprint(src)
        assert parsed.scene(1).visual_description == "Above.\n\nBelow."
        assert parse_blueprint(serialize_blueprint(parsed)) == parsed

    def test_out_of_order_indices_renumbered_with_warning(self):
        src = (
            "<Scene 2>\nVisual Description: b\nClear Narration: bb\n"
            "<Scene 1>\nVisual Description: a\nClear Narration: aa"
        )
        with pytest.warns(bp.BlueprintWarning):
            parsed = parse_blueprint(src)
        assert [s.index for s in parsed.scenes] == [1, 2]
        assert parsed.scene(1).visual_description == "b"

    def test_gapped_indices_renumbered_with_warning(self):
        src = (
            "<Scene 1>\nVisual Description: a\nClear Narration: aa\n"
            "<Scene 3>\nVisual Description: c\nClear Narration: cc"
        )
        with pytest.warns(bp.BlueprintWarning):
            parsed = parse_blueprint(src)
        assert [s.index for s in parsed.scenes] == [1, 2]


class TestParseErrors:
    def test_empty_input(self):
        with pytest.raises(MissingHeader):
            parse_blueprint("")

    def test_whitespace_only(self):
        with pytest.raises(MissingHeader):
            parse_blueprint("  \n\n\t ")

    def test_content_before_first_header(self):
        with pytest.raises(MissingHeader):
            parse_blueprint("Here is your script!\n" + TWO_SCENES)

    def test_label_before_any_header(self):
        with pytest.raises(MissingHeader):
            parse_blueprint("Visual Description: orphaned")

    def test_repeated_label_means_lost_header(self):
        src = (
            "<Scene 1>\n"
            "Visual Description: a\n"
            "Clear Narration: aa\n"
            "Visual Description: b\n"
            "Clear Narration: bb"
        )
        with pytest.raises(MissingHeader):
            parse_blueprint(src)

    def test_missing_narration(self):
        with pytest.raises(MissingField):
            parse_blueprint("<Scene 1>\nVisual Description: only this")

    def test_missing_visual_description(self):
        with pytest.raises(MissingField):
            parse_blueprint("<Scene 1>\nClear Narration: only this")

    def test_unattributed_text_after_header(self):
        with pytest.raises(MissingField):
            parse_blueprint("<Scene 1>\njunk\nVisual Description: a\nClear Narration: b")

    def test_duplicate_index(self):
        src = (
            "<Scene 1>\nVisual Description: a\nClear Narration: aa\n"
            "<Scene 1>\nVisual Description: b\nClear Narration: bb"
        )
        with pytest.raises(DuplicateIndex):
            parse_blueprint(src)

    def test_empty_field(self):
        with pytest.raises(EmptyField):
            parse_blueprint("<Scene 1>\nVisual Description:\nClear Narration: ok")

    @pytest.mark.parametrize("header", ["<Scene one>", "<Scene 1.5>", "<Scene >"])
    def test_header_not_integer(self, header):
        with pytest.raises(HeaderNotInteger):
            parse_blueprint(f"{header}\nVisual Description: a\nClear Narration: b")

    def test_error_carries_code_and_detail(self):
        with pytest.raises(MissingField) as exc:
            parse_blueprint("<Scene 1>\nVisual Description: only this")
        assert exc.value.code == "missing_field"
        assert exc.value.detail["scene_index"] == 1


class TestSerializeInvariants:
    def test_noncontiguous_indices_rejected(self):
        scenes = (Scene(1, "a", "b"), Scene(3, "c", "d"))
        with pytest.raises(InvariantViolation):
            serialize_blueprint(ScriptBlueprint(scenes=scenes))

    def test_untrimmed_field_rejected(self):
        with pytest.raises(InvariantViolation):
            serialize_blueprint(make_bp((" padded ", "ok")))

    def test_empty_field_rejected(self):
        with pytest.raises(InvariantViolation):
            serialize_blueprint(make_bp(("", "ok")))

    def test_embedded_label_rejected(self):
        with pytest.raises(InvariantViolation):
            serialize_blueprint(make_bp(("a\nClear Narration: sneaky", "ok")))

    def test_embedded_header_rejected(self):
        with pytest.raises(InvariantViolation):
            serialize_blueprint(make_bp(("a\n<Scene 9>", "ok")))


class TestNormalizeAndDiff:
    def test_normalize_renumbers_only(self):
        scenes = (Scene(3, "a", "b"), Scene(7, "c", "d"))
        out = normalize_indices(ScriptBlueprint(scenes=scenes, revision_id=4))
        assert [s.index for s in out.scenes] == [1, 2]
        assert out.scenes[0].visual_description == "a"
        assert out.revision_id == 4

    def test_diff_equal_is_empty(self):
        a = make_bp(("a", "b"), ("c", "d"))
        assert diff_blueprints(a, a) == []

    def test_diff_modified_field(self):
        a = make_bp(("a", "b"))
        b = make_bp(("a", "changed"))
        (d,) = diff_blueprints(a, b)
        assert d.kind == "modified"
        assert d.scene_index == 1
        assert d.changed_fields == frozenset({"narration"})
        assert d.before.narration == "b"
        assert d.after.narration == "changed"

    def test_diff_added_and_removed(self):
        a = make_bp(("a", "b"))
        b = make_bp(("a", "b"), ("c", "d"))
        (d,) = diff_blueprints(a, b)
        assert (d.kind, d.scene_index) == ("added", 2)
        (d,) = diff_blueprints(b, a)
        assert (d.kind, d.scene_index) == ("removed", 2)

    def test_dict_round_trip(self):
        a = make_bp(("a", "b"), ("c", "d"))
        assert blueprint_from_dict(blueprint_to_dict(a)) == a
        form = blueprint_to_dict(a)
        assert form["scenes"][0] == {
            "index": 1,
            "visual_description": "a",
            "narration": "b",
        }
        assert form["revision_id"] == 0


# Valid-field generator: stripped, nonempty, and free of header/label tokens,
# mirroring the serializer's stated preconditions.
def _clean_line(s):
    return s and s == s.strip() and not bp._is_header_line(s) and not bp._is_label_line(s)


line_st = (
    st.text(
        alphabet=st.characters(blacklist_categories=("Cs",), blacklist_characters="\r\n"),
        min_size=1,
        max_size=40,
    )
    .map(str.strip)
    .filter(_clean_line)
)
field_st = st.lists(line_st, min_size=1, max_size=3).map("\n".join)


@st.composite
def blueprints(draw):
    n = draw(st.integers(min_value=1, max_value=6))
    scenes = tuple(
        Scene(index=i, visual_description=draw(field_st), narration=draw(field_st))
        for i in range(1, n + 1)
    )
    return ScriptBlueprint(scenes=scenes)


DECLARED = (MissingHeader, MissingField, DuplicateIndex, EmptyField, HeaderNotInteger)


class TestProperties:
    @given(blueprints())
    @settings(max_examples=200)
    def test_round_trip_identity(self, original):
        assert parse_blueprint(serialize_blueprint(original)) == original

    @given(st.text(max_size=300))
    @settings(max_examples=300)
    def test_parser_total_over_arbitrary_text(self, text):
        try:
            out = parse_blueprint(text)
        except DECLARED:
            return
        assert isinstance(out, ScriptBlueprint)

    @given(blueprints(), st.randoms(use_true_random=False))
    @settings(max_examples=200)
    def test_parser_total_over_corrupted_scripts(self, original, rng):
        lines = serialize_blueprint(original).split("\n")
        op = rng.choice(("drop", "dup", "swap", "inject"))
        i = rng.randrange(len(lines))
        if op == "drop":
            del lines[i]
        elif op == "dup":
            lines.insert(i, lines[i])
        elif op == "swap" and len(lines) > 1:
            j = rng.randrange(len(lines))
            lines[i], lines[j] = lines[j], lines[i]
        else:
            lines.insert(i, rng.choice(("<Scene x>", "garbage", "Visual Description:", "")))
        try:
            out = parse_blueprint("\n".join(lines))
        except DECLARED:
            return
        assert isinstance(out, ScriptBlueprint)

    @given(blueprints(), blueprints())
    @settings(max_examples=100)
    def test_diff_symmetry_of_kinds(self, a, b):
        forward = {(d.scene_index, d.kind) for d in diff_blueprints(a, b)}
        backward = {(d.scene_index, d.kind) for d in diff_blueprints(b, a)}
        flip = {"added": "removed", "removed": "added", "modified": "modified"}
        assert {(i, flip[k]) for i, k in forward} == backward
