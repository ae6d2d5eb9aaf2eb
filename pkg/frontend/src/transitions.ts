/** Workflow transition table, shipped as data so the UI can decide button
 * availability locally. Must stay in lockstep with the server's table: the
 * set of enabled actions for a state is exactly the server's legal events.
 */

import type { EventName, StateName } from "./types";

export const STATES: readonly StateName[] = [
  "setup",
  "drafted",
  "review_pending",
  "review_ready",
  "finalized",
  "rendering",
  "complete",
  "failed",
];

export const EVENTS: readonly EventName[] = [
  "generate_script",
  "script_arrived",
  "request_review",
  "review_arrived",
  "apply_feedback",
  "apply_selective",
  "edit_script",
  "finalize_script",
  "create_video",
  "render_done",
  "render_failed",
  "reopen",
];

export const TRANSITIONS: readonly (readonly [
  StateName,
  EventName,
  StateName,
])[] = [
  ["setup", "generate_script", "setup"],
  ["setup", "script_arrived", "drafted"],
  ["drafted", "request_review", "review_pending"],
  ["review_pending", "review_arrived", "review_ready"],
  ["review_ready", "apply_feedback", "drafted"],
  ["review_ready", "apply_selective", "drafted"],
  ["review_ready", "edit_script", "drafted"],
  ["drafted", "edit_script", "drafted"],
  ["drafted", "finalize_script", "finalized"],
  ["finalized", "create_video", "rendering"],
  ["rendering", "render_done", "complete"],
  ["rendering", "render_failed", "failed"],
  ["failed", "reopen", "finalized"],
  ["complete", "reopen", "drafted"],
];

const PHASES: Record<StateName, number> = {
  setup: 1,
  drafted: 2,
  review_pending: 2,
  review_ready: 2,
  finalized: 3,
  rendering: 3,
  complete: 3,
  failed: 3,
};

export const CONFIG_EDITABLE_STATES: readonly StateName[] = [
  "setup",
  "drafted",
];

export function legalEvents(state: StateName): EventName[] {
  const allowed = new Set(
    TRANSITIONS.filter(([from]) => from === state).map(([, event]) => event),
  );
  return EVENTS.filter((event) => allowed.has(event));
}

export function phaseOf(state: StateName): number {
  return PHASES[state];
}

export function stateLabel(state: StateName): string {
  return state.replace(/_/g, "-");
}

/** UI buttons, each firing one workflow event. */
export type ActionName =
  | "generate"
  | "review"
  | "applyAll"
  | "applySelected"
  | "saveEdit"
  | "finalize"
  | "createVideo"
  | "reopen";

export const ACTION_EVENTS: Record<ActionName, EventName> = {
  generate: "generate_script",
  review: "request_review",
  applyAll: "apply_feedback",
  applySelected: "apply_selective",
  saveEdit: "edit_script",
  finalize: "finalize_script",
  createVideo: "create_video",
  reopen: "reopen",
};

export const ACTION_NAMES = Object.keys(ACTION_EVENTS) as ActionName[];

export function enabledActions(state: StateName): Set<ActionName> {
  const legal = new Set(legalEvents(state));
  const enabled = new Set<ActionName>();
  for (const action of ACTION_NAMES) {
    if (legal.has(ACTION_EVENTS[action])) {
      enabled.add(action);
    }
  }
  return enabled;
}

export function configEditable(state: StateName): boolean {
  return CONFIG_EDITABLE_STATES.includes(state);
}

/** Tooltip for a disabled button, naming the blocked event and current phase. */
export function disabledReason(action: ActionName, state: StateName): string {
  const event = ACTION_EVENTS[action];
  return `${event} is not available in the ${stateLabel(state)} state (phase ${phaseOf(state)})`;
}
