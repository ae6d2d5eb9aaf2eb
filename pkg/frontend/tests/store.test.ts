import { describe, expect, it } from "vitest";
import {
  currentBlueprint,
  hasUnsavedEdits,
  initialView,
  latestReview,
  pendingDelta,
  reduceView,
} from "../src/store";
import type { UiProjectView } from "../src/store";
import type {
  BlueprintJson,
  ProjectJson,
  PromptConfigJson,
  ReviewJson,
} from "../src/types";

const config: PromptConfigJson = {
  mode: "generation",
  preamble: "p",
  groups: [{ title: "G1", directives: ["d1"] }],
  constraints: ["c1"],
  output_format: "f",
  custom_instructions: null,
};

function bp(narrations: string[], revisionId: number): BlueprintJson {
  return {
    scenes: narrations.map((narration, i) => ({
      index: i + 1,
      visual_description: `visual ${i + 1}`,
      narration,
    })),
    revision_id: revisionId,
  };
}

function project(overrides: Partial<ProjectJson> = {}): ProjectJson {
  return {
    schema: 1,
    id: "p1",
    content: "the content",
    gen_config: config,
    review_config: { ...config, mode: "review" },
    revisions: [],
    reviews: [],
    render: null,
    state: { name: "setup", reason: null, prior: null },
    created_at: "2026-01-01T00:00:00+00:00",
    updated_at: "2026-01-01T00:00:00+00:00",
    ...overrides,
  };
}

function review(revised: BlueprintJson): ReviewJson {
  return {
    detailed_results: "looks fine overall",
    suggestions: [{ ordinal: 1, scene_refs: [1], text: "tighten the intro" }],
    revised_script: revised,
    iteration: 1,
  };
}

describe("selectors", () => {
  it("reads the latest revision and review", () => {
    const p = project({
      revisions: [
        { blueprint: bp(["a"], 0), source: "generated", recorded_at: "t0" },
        { blueprint: bp(["b"], 1), source: "manual_edit", recorded_at: "t1" },
      ],
      reviews: [review(bp(["c"], 0))],
    });
    expect(currentBlueprint(p)?.revision_id).toBe(1);
    expect(latestReview(p)?.iteration).toBe(1);
    expect(currentBlueprint(project())).toBeNull();
    expect(latestReview(project())).toBeNull();
  });
});

describe("pendingDelta", () => {
  it("diffs the stored script against the review only while review-ready", () => {
    const stored = bp(["alpha", "beta"], 0);
    const revised = bp(["alpha improved", "beta"], 0);
    const ready = project({
      state: { name: "review_ready", reason: null, prior: null },
      revisions: [{ blueprint: stored, source: "generated", recorded_at: "t" }],
      reviews: [review(revised)],
    });
    expect(pendingDelta(ready)).toEqual([
      { scene_index: 1, kind: "modified", changed_fields: ["narration"] },
    ]);
    const drafted = project({
      ...ready,
      state: { name: "drafted", reason: null, prior: null },
    });
    expect(pendingDelta(drafted)).toEqual([]);
  });
});

describe("reduceView", () => {
  const drafted = project({
    state: { name: "drafted", reason: null, prior: null },
    revisions: [
      { blueprint: bp(["one", "two"], 0), source: "generated", recorded_at: "t" },
    ],
  });

  it("loads the edit buffer from the stored revision", () => {
    const view = reduceView(initialView, { type: "loaded", project: drafted });
    expect(view.editBuffer.map((s) => s.narration)).toEqual(["one", "two"]);
    expect(view.pending).toBe(false);
    expect(hasUnsavedEdits(view)).toBe(false);
  });

  it("tracks unsaved edits without touching the project record", () => {
    let view = reduceView(initialView, { type: "loaded", project: drafted });
    view = reduceView(view, {
      type: "editField",
      sceneIndex: 2,
      field: "narration",
      value: "two, reworded",
    });
    expect(hasUnsavedEdits(view)).toBe(true);
    expect(view.project).toBe(drafted);
    expect(view.editBuffer[1].narration).toBe("two, reworded");
    expect(view.editBuffer[0].narration).toBe("one");

    const discarded = reduceView(view, { type: "discardEdits" });
    expect(hasUnsavedEdits(discarded)).toBe(false);
    expect(discarded.editBuffer[1].narration).toBe("two");
  });

  it("resets buffer, accepts and delta on every server response", () => {
    let view = reduceView(initialView, { type: "loaded", project: drafted });
    view = reduceView(view, { type: "toggleAccept", key: "1:narration" });
    view = reduceView(view, {
      type: "editField",
      sceneIndex: 1,
      field: "narration",
      value: "local only",
    });
    const next = project({
      ...drafted,
      revisions: [
        ...drafted.revisions,
        {
          blueprint: bp(["one", "two", "three"], 1),
          source: "manual_edit",
          recorded_at: "t2",
        },
      ],
    });
    view = reduceView(view, { type: "mutated", project: next });
    expect(view.editBuffer).toHaveLength(3);
    expect(view.editBuffer[0].narration).toBe("one");
    expect(view.accepted.size).toBe(0);
    expect(view.delta).toEqual([]);
  });

  it("prefers the delta carried by a review response", () => {
    const ready = project({
      ...drafted,
      state: { name: "review_ready", reason: null, prior: null },
      reviews: [review(bp(["one better", "two"], 0))],
    });
    const carried = [
      {
        scene_index: 1,
        kind: "modified" as const,
        changed_fields: ["narration" as const],
      },
    ];
    const view = reduceView(initialView, {
      type: "mutated",
      project: ready,
      delta: carried,
    });
    expect(view.delta).toBe(carried);
    // Without the carried delta it derives the same rows from the record.
    const derived = reduceView(initialView, { type: "mutated", project: ready });
    expect(derived.delta).toEqual(carried);
  });

  it("keeps failures local: pending cleared, banner set, project kept", () => {
    let view = reduceView(initialView, { type: "loaded", project: drafted });
    view = reduceView(view, { type: "requestStarted" });
    expect(view.pending).toBe(true);
    view = reduceView(view, {
      type: "requestFailed",
      message: "malformed_output: model returned prose",
    });
    expect(view.pending).toBe(false);
    expect(view.banner).toEqual({
      tone: "error",
      text: "malformed_output: model returned prose",
    });
    expect(view.project).toBe(drafted);
  });

  it("stores review instructions verbatim", () => {
    const view = reduceView(initialView, {
      type: "setReviewInstructions",
      value: "focus on scene 2",
    });
    expect(view.reviewInstructions).toBe("focus on scene 2");
  });
});

describe("hasUnsavedEdits", () => {
  it("is false with no project and true for a buffer without a revision", () => {
    expect(hasUnsavedEdits(initialView)).toBe(false);
    const view: UiProjectView = {
      ...initialView,
      project: project(),
      editBuffer: [{ index: 1, visual_description: "v", narration: "n" }],
    };
    expect(hasUnsavedEdits(view)).toBe(true);
  });
});
