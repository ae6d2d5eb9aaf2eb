/** Script editor buffer: scene cards the user can edit in place, plus the
 * serializer that turns the buffer back into script text for the PATCH call.
 */

import type { BlueprintJson, FieldName, SceneJson } from "./types";

export interface SceneDraft {
  index: number;
  visual_description: string;
  narration: string;
}

export function draftFromBlueprint(blueprint: BlueprintJson): SceneDraft[] {
  return blueprint.scenes.map((scene) => ({
    index: scene.index,
    visual_description: scene.visual_description,
    narration: scene.narration,
  }));
}

/** Render drafts in the script grammar the server parses.
 *
 * One block per scene, blank line between blocks, no trailing newline.
 * This matches the server's canonical serialization, so an untouched buffer
 * round-trips byte for byte.
 */
export function serializeDraft(scenes: readonly SceneDraft[]): string {
  const blocks = scenes.map(
    (scene) =>
      `<Scene ${scene.index}>\n` +
      `Visual Description: ${scene.visual_description}\n` +
      `Clear Narration: ${scene.narration}`,
  );
  return blocks.join("\n\n");
}

export function setDraftField(
  scenes: readonly SceneDraft[],
  sceneIndex: number,
  field: FieldName,
  value: string,
): SceneDraft[] {
  return scenes.map((scene) =>
    scene.index === sceneIndex ? { ...scene, [field]: value } : scene,
  );
}

export function draftsEqual(
  a: readonly SceneDraft[],
  b: readonly SceneDraft[],
): boolean {
  if (a.length !== b.length) return false;
  return a.every(
    (scene, i) =>
      scene.index === b[i].index &&
      scene.visual_description === b[i].visual_description &&
      scene.narration === b[i].narration,
  );
}

export interface SceneHighlight {
  sceneIndex: number;
  changed: FieldName[];
  added: boolean;
}

/** Which scene fields differ from the previous revision, for card badges. */
export function highlightsAgainst(
  current: BlueprintJson,
  previous: BlueprintJson | null,
): SceneHighlight[] {
  if (previous === null) return [];
  const before = new Map<number, SceneJson>(
    previous.scenes.map((scene) => [scene.index, scene]),
  );
  const highlights: SceneHighlight[] = [];
  for (const scene of current.scenes) {
    const old = before.get(scene.index);
    if (old === undefined) {
      highlights.push({
        sceneIndex: scene.index,
        changed: ["visual_description", "narration"],
        added: true,
      });
      continue;
    }
    const changed: FieldName[] = [];
    if (old.visual_description !== scene.visual_description) {
      changed.push("visual_description");
    }
    if (old.narration !== scene.narration) {
      changed.push("narration");
    }
    if (changed.length > 0) {
      highlights.push({ sceneIndex: scene.index, changed, added: false });
    }
  }
  return highlights;
}
