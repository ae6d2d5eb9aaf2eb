import { describe, expect, it } from "vitest";
import {
  ACTION_EVENTS,
  ACTION_NAMES,
  CONFIG_EDITABLE_STATES,
  configEditable,
  disabledReason,
  enabledActions,
  EVENTS,
  legalEvents,
  phaseOf,
  STATES,
  stateLabel,
  TRANSITIONS,
} from "../src/transitions";
import type { EventName, StateName } from "../src/types";

// Events the server fires itself; no button may ever map to these.
const SYSTEM_EVENTS: EventName[] = [
  "script_arrived",
  "review_arrived",
  "render_done",
  "render_failed",
];

describe("transition table", () => {
  it("declares exactly the fourteen legal transitions", () => {
    expect(TRANSITIONS).toHaveLength(14);
    const keys = TRANSITIONS.map(([from, event]) => `${from}/${event}`);
    expect(new Set(keys).size).toBe(14);
  });

  it("only uses declared states and events", () => {
    for (const [from, event, to] of TRANSITIONS) {
      expect(STATES).toContain(from);
      expect(STATES).toContain(to);
      expect(EVENTS).toContain(event);
    }
  });

  it("orders legal events by the canonical event list", () => {
    for (const state of STATES) {
      const events = legalEvents(state);
      const positions = events.map((e) => EVENTS.indexOf(e));
      expect(positions).toEqual([...positions].sort((a, b) => a - b));
    }
  });
});

describe("enabledActions", () => {
  it("matches the legal-transition set in every state", () => {
    for (const state of STATES) {
      const legal = new Set(legalEvents(state));
      const enabled = enabledActions(state);
      // Soundness: every enabled button fires a legal event.
      for (const action of enabled) {
        expect(legal.has(ACTION_EVENTS[action])).toBe(true);
      }
      // Completeness: every legal user-fireable event has its button enabled.
      for (const event of legal) {
        if (SYSTEM_EVENTS.includes(event)) continue;
        const action = ACTION_NAMES.find((a) => ACTION_EVENTS[a] === event);
        expect(action, `no button for ${event}`).toBeDefined();
        expect(enabled.has(action!)).toBe(true);
      }
    }
  });

  it("covers exactly the non-system events with buttons", () => {
    const buttonEvents = new Set(Object.values(ACTION_EVENTS));
    for (const event of EVENTS) {
      if (SYSTEM_EVENTS.includes(event)) {
        expect(buttonEvents.has(event)).toBe(false);
      } else {
        expect(buttonEvents.has(event)).toBe(true);
      }
    }
  });

  it("disables video creation until the script is finalized", () => {
    const before: StateName[] = ["setup", "drafted", "review_pending", "review_ready"];
    for (const state of before) {
      expect(enabledActions(state).has("createVideo")).toBe(false);
    }
    expect(enabledActions("finalized").has("createVideo")).toBe(true);
  });
});

describe("phases", () => {
  it("assigns each state to one of three phases", () => {
    expect(STATES.map(phaseOf)).toEqual([1, 2, 2, 2, 3, 3, 3, 3]);
  });

  it("labels states with hyphens", () => {
    expect(stateLabel("review_ready")).toBe("review-ready");
    expect(stateLabel("setup")).toBe("setup");
  });
});

describe("config editability", () => {
  it("allows config edits only while drafting", () => {
    expect(CONFIG_EDITABLE_STATES).toEqual(["setup", "drafted"]);
    for (const state of STATES) {
      expect(configEditable(state)).toBe(
        state === "setup" || state === "drafted",
      );
    }
  });
});

describe("disabledReason", () => {
  it("names the blocked event and the current phase", () => {
    const reason = disabledReason("createVideo", "drafted");
    expect(reason).toContain("create_video");
    expect(reason).toContain("drafted");
    expect(reason).toContain("phase 2");
  });
});
