/** Accept-checkbox bookkeeping for selective feedback application.
 *
 * The review panel shows one checkbox per changed (scene, field) pair taken
 * from the server's delta. Accepted pairs are keyed "index:field" and turned
 * back into pick tuples for the apply call.
 */

import type {
  BlueprintJson,
  DeltaRowJson,
  FieldName,
  Pick,
  SceneJson,
} from "./types";

export const FIELD_LABELS: Record<FieldName, string> = {
  visual_description: "Visual Description",
  narration: "Narration",
};

export type AcceptKey = `${number}:${FieldName}`;

export function acceptKey(sceneIndex: number, field: FieldName): AcceptKey {
  return `${sceneIndex}:${field}`;
}

const BOTH_FIELDS: FieldName[] = ["narration", "visual_description"];

/** Positional scene diff between the stored script and a revised one.
 *
 * Matches the server's delta: scenes are compared by position (1-based),
 * added/removed scenes list both fields, modified scenes list the changed
 * subset sorted alphabetically.
 */
export function deltaRows(
  current: BlueprintJson,
  revised: BlueprintJson,
): DeltaRowJson[] {
  const a = current.scenes;
  const b = revised.scenes;
  const rows: DeltaRowJson[] = [];
  const span = Math.max(a.length, b.length);
  for (let pos = 0; pos < span; pos += 1) {
    const index = pos + 1;
    const before: SceneJson | undefined = a[pos];
    const after: SceneJson | undefined = b[pos];
    if (before !== undefined && after === undefined) {
      rows.push({ scene_index: index, kind: "removed", changed_fields: BOTH_FIELDS });
    } else if (before === undefined && after !== undefined) {
      rows.push({ scene_index: index, kind: "added", changed_fields: BOTH_FIELDS });
    } else if (before !== undefined && after !== undefined) {
      const changed = BOTH_FIELDS.filter(
        (field) => before[field] !== after[field],
      );
      if (changed.length > 0) {
        rows.push({ scene_index: index, kind: "modified", changed_fields: changed });
      }
    }
  }
  return rows;
}

export interface PickOption {
  sceneIndex: number;
  field: FieldName;
  key: AcceptKey;
  kind: DeltaRowJson["kind"];
}

/** Flatten delta rows into one option per acceptable scene-field pair.
 *
 * Delta rows already list both fields for added and removed scenes, so every
 * row expands to one checkbox per listed field.
 */
export function pickOptions(delta: DeltaRowJson[]): PickOption[] {
  const options: PickOption[] = [];
  for (const row of delta) {
    for (const field of row.changed_fields) {
      options.push({
        sceneIndex: row.scene_index,
        field,
        key: acceptKey(row.scene_index, field),
        kind: row.kind,
      });
    }
  }
  return options;
}

export function toggleAccept(
  accepted: ReadonlySet<AcceptKey>,
  key: AcceptKey,
): Set<AcceptKey> {
  const next = new Set(accepted);
  if (next.has(key)) {
    next.delete(key);
  } else {
    next.add(key);
  }
  return next;
}

/** Convert accepted keys back to picks, ordered by scene then field. */
export function picksFromAccepted(accepted: ReadonlySet<AcceptKey>): Pick[] {
  const picks: Pick[] = [];
  for (const key of accepted) {
    const colon = key.indexOf(":");
    const index = Number(key.slice(0, colon));
    const field = key.slice(colon + 1) as FieldName;
    picks.push([index, field]);
  }
  picks.sort((a, b) =>
    a[0] === b[0] ? a[1].localeCompare(b[1]) : a[0] - b[0],
  );
  return picks;
}
