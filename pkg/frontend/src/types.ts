/** JSON shapes exchanged with the studio API, mirrored field for field. */

export type StateName =
  | "setup"
  | "drafted"
  | "review_pending"
  | "review_ready"
  | "finalized"
  | "rendering"
  | "complete"
  | "failed";

export type EventName =
  | "generate_script"
  | "script_arrived"
  | "request_review"
  | "review_arrived"
  | "apply_feedback"
  | "apply_selective"
  | "edit_script"
  | "finalize_script"
  | "create_video"
  | "render_done"
  | "render_failed"
  | "reopen";

export type FieldName = "visual_description" | "narration";

export interface ProjectStateJson {
  name: StateName;
  reason: string | null;
  prior: string | null;
}

export interface SceneJson {
  index: number;
  visual_description: string;
  narration: string;
}

export interface BlueprintJson {
  scenes: SceneJson[];
  revision_id: number;
  topic_label?: string | null;
}

export interface RevisionJson {
  blueprint: BlueprintJson;
  source: "generated" | "review_applied" | "manual_edit";
  recorded_at: string;
}

export interface SuggestionJson {
  ordinal: number;
  scene_refs: number[];
  text: string;
}

export interface ReviewJson {
  detailed_results: string;
  suggestions: SuggestionJson[];
  revised_script: BlueprintJson;
  iteration: number;
}

export interface DirectiveGroupJson {
  title: string;
  directives: string[];
}

export interface PromptConfigJson {
  mode: string;
  preamble: string;
  groups: DirectiveGroupJson[];
  constraints: string[];
  output_format: string;
  custom_instructions: string | null;
}

export interface ClipJson {
  scene_index: number;
  clip_ref: string;
  duration_s: number;
}

export interface ManifestJson {
  clips: ClipJson[];
  total_duration_s: number;
  settings: { per_scene_duration_s: number };
}

export interface ProjectJson {
  schema: number;
  id: string;
  content: string;
  gen_config: PromptConfigJson;
  review_config: PromptConfigJson;
  revisions: RevisionJson[];
  reviews: ReviewJson[];
  render: ManifestJson | null;
  state: ProjectStateJson;
  created_at: string;
  updated_at: string;
}

export interface DeltaRowJson {
  scene_index: number;
  kind: "added" | "removed" | "modified";
  changed_fields: FieldName[];
}

export interface ProgressJson {
  state: StateName;
  phase: number;
  label: string;
  legal_events: EventName[];
}

export interface MutationJson {
  id: string;
  state: ProjectStateJson;
  revision_id: number | null;
  script?: string;
  attempt?: number;
  review?: ReviewJson;
  delta?: DeltaRowJson[];
  manifest?: ManifestJson;
  created_at?: string;
}

export interface RenderStatusJson {
  status: "not_started" | "rendering" | "complete" | "failed";
  manifest?: ManifestJson;
  reason?: string | null;
  prior?: string | null;
}

/** 202 body returned by live-mode generate/review/render. */
export interface AcceptedJson {
  status: "accepted";
  status_url: string;
}

export function isAccepted(data: unknown): data is AcceptedJson {
  return (
    typeof data === "object" &&
    data !== null &&
    (data as { status?: unknown }).status === "accepted"
  );
}

export interface ApiErrorJson {
  code: string;
  message: string;
  detail: unknown;
}

export type Envelope<T> =
  | { ok: true; data: T }
  | { ok: false; error: ApiErrorJson };

/** (scene index, field) pair accepted for selective application. */
export type Pick = [number, FieldName];
