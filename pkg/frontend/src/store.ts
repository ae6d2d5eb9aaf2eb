/** Client-side project view and its reducer.
 *
 * The view never invents project facts: workflow state, revisions, reviews
 * and render results only ever come from the last server response. The
 * reducer owns strictly local concerns: the unsaved edit buffer, accept
 * checkboxes, the pending flag while a request is in flight, and the banner.
 */

import type { SceneDraft } from "./editor";
import { draftFromBlueprint, draftsEqual } from "./editor";
import type { AcceptKey } from "./picks";
import { deltaRows, toggleAccept } from "./picks";
import type {
  BlueprintJson,
  DeltaRowJson,
  FieldName,
  ProjectJson,
  ReviewJson,
} from "./types";

export interface Banner {
  tone: "info" | "error";
  text: string;
}

export interface UiProjectView {
  project: ProjectJson | null;
  /** Delta rows from the most recent review response, if any. */
  delta: DeltaRowJson[];
  editBuffer: SceneDraft[];
  accepted: Set<AcceptKey>;
  reviewInstructions: string;
  pending: boolean;
  banner: Banner | null;
}

export const initialView: UiProjectView = {
  project: null,
  delta: [],
  editBuffer: [],
  accepted: new Set(),
  reviewInstructions: "",
  pending: false,
  banner: null,
};

export function currentBlueprint(project: ProjectJson): BlueprintJson | null {
  const n = project.revisions.length;
  return n === 0 ? null : project.revisions[n - 1].blueprint;
}

export function latestReview(project: ProjectJson): ReviewJson | null {
  const n = project.reviews.length;
  return n === 0 ? null : project.reviews[n - 1];
}

export function hasUnsavedEdits(view: UiProjectView): boolean {
  if (view.project === null) return false;
  const blueprint = currentBlueprint(view.project);
  if (blueprint === null) return view.editBuffer.length > 0;
  return !draftsEqual(view.editBuffer, draftFromBlueprint(blueprint));
}

/** Delta between the stored script and the pending review's revision.
 *
 * Empty outside review-ready so stale checkboxes cannot linger after an
 * apply or a manual edit consumed the review.
 */
export function pendingDelta(project: ProjectJson): DeltaRowJson[] {
  if (project.state.name !== "review_ready") return [];
  const review = latestReview(project);
  const blueprint = currentBlueprint(project);
  if (review === null || blueprint === null) return [];
  return deltaRows(blueprint, review.revised_script);
}

export type ViewAction =
  | { type: "loaded"; project: ProjectJson }
  | { type: "mutated"; project: ProjectJson; delta?: DeltaRowJson[] }
  | { type: "requestStarted" }
  | { type: "requestFailed"; message: string }
  | { type: "editField"; sceneIndex: number; field: FieldName; value: string }
  | { type: "discardEdits" }
  | { type: "toggleAccept"; key: AcceptKey }
  | { type: "clearAccepts" }
  | { type: "setReviewInstructions"; value: string }
  | { type: "setBanner"; banner: Banner | null };

function resetBufferFrom(project: ProjectJson): SceneDraft[] {
  const blueprint = currentBlueprint(project);
  return blueprint === null ? [] : draftFromBlueprint(blueprint);
}

export function reduceView(
  view: UiProjectView,
  action: ViewAction,
): UiProjectView {
  switch (action.type) {
    case "loaded":
      return {
        ...view,
        project: action.project,
        editBuffer: resetBufferFrom(action.project),
        accepted: new Set(),
        delta: pendingDelta(action.project),
        pending: false,
        banner: null,
      };
    case "mutated":
      return {
        ...view,
        project: action.project,
        editBuffer: resetBufferFrom(action.project),
        accepted: new Set(),
        delta: action.delta ?? pendingDelta(action.project),
        pending: false,
        banner: null,
      };
    case "requestStarted":
      return { ...view, pending: true, banner: null };
    case "requestFailed":
      return {
        ...view,
        pending: false,
        banner: { tone: "error", text: action.message },
      };
    case "editField":
      return {
        ...view,
        editBuffer: view.editBuffer.map((scene) =>
          scene.index === action.sceneIndex
            ? { ...scene, [action.field]: action.value }
            : scene,
        ),
      };
    case "discardEdits":
      return {
        ...view,
        editBuffer: view.project === null ? [] : resetBufferFrom(view.project),
      };
    case "toggleAccept":
      return { ...view, accepted: toggleAccept(view.accepted, action.key) };
    case "clearAccepts":
      return { ...view, accepted: new Set() };
    case "setReviewInstructions":
      return { ...view, reviewInstructions: action.value };
    case "setBanner":
      return { ...view, banner: action.banner };
  }
}
