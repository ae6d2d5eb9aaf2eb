"""Three-phase authoring state machine.

Phase 1 (setup) collects content and configuration; phase 2 (refinement)
cycles draft, review, and feedback application; phase 3 (output) pins the
script and renders it.  transition() is total: every (state, event) pair
either maps through the table below or raises IllegalTransition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .errors import DomainError

SETUP = "setup"
DRAFTED = "drafted"
REVIEW_PENDING = "review_pending"
REVIEW_READY = "review_ready"
FINALIZED = "finalized"
RENDERING = "rendering"
COMPLETE = "complete"
FAILED = "failed"

STATES = (SETUP, DRAFTED, REVIEW_PENDING, REVIEW_READY, FINALIZED, RENDERING,
          COMPLETE, FAILED)

GENERATE_SCRIPT = "generate_script"
SCRIPT_ARRIVED = "script_arrived"
REQUEST_REVIEW = "request_review"
REVIEW_ARRIVED = "review_arrived"
APPLY_FEEDBACK = "apply_feedback"
APPLY_SELECTIVE = "apply_selective"
EDIT_SCRIPT = "edit_script"
FINALIZE_SCRIPT = "finalize_script"
CREATE_VIDEO = "create_video"
RENDER_DONE = "render_done"
RENDER_FAILED = "render_failed"
REOPEN = "reopen"

EVENTS = (GENERATE_SCRIPT, SCRIPT_ARRIVED, REQUEST_REVIEW, REVIEW_ARRIVED,
          APPLY_FEEDBACK, APPLY_SELECTIVE, EDIT_SCRIPT, FINALIZE_SCRIPT,
          CREATE_VIDEO, RENDER_DONE, RENDER_FAILED, REOPEN)

# Gateways are asynchronous in spirit, so each backend call is a pair of
# events: the user-triggered request and the arrival of its result.
TRANSITIONS: dict[tuple[str, str], str] = {
    (SETUP, GENERATE_SCRIPT): SETUP,
    (SETUP, SCRIPT_ARRIVED): DRAFTED,
    (DRAFTED, REQUEST_REVIEW): REVIEW_PENDING,
    (REVIEW_PENDING, REVIEW_ARRIVED): REVIEW_READY,
    (REVIEW_READY, APPLY_FEEDBACK): DRAFTED,
    (REVIEW_READY, APPLY_SELECTIVE): DRAFTED,
    (REVIEW_READY, EDIT_SCRIPT): DRAFTED,
    (DRAFTED, EDIT_SCRIPT): DRAFTED,
    (DRAFTED, FINALIZE_SCRIPT): FINALIZED,
    (FINALIZED, CREATE_VIDEO): RENDERING,
    (RENDERING, RENDER_DONE): COMPLETE,
    (RENDERING, RENDER_FAILED): FAILED,
    (FAILED, REOPEN): FINALIZED,
    (COMPLETE, REOPEN): DRAFTED,
}

_PHASES = {
    SETUP: 1,
    DRAFTED: 2,
    REVIEW_PENDING: 2,
    REVIEW_READY: 2,
    FINALIZED: 3,
    RENDERING: 3,
    COMPLETE: 3,
    FAILED: 3,
}

# States in which the prompt configuration may still be edited.
CONFIG_EDITABLE_STATES = (SETUP, DRAFTED)


class IllegalTransition(DomainError):
    code = "illegal_transition"

    def __init__(self, state: str, event: str):
        super().__init__(f"event {event!r} is not allowed in state {state!r}",
                         detail={"state": state, "event": event})
        self.state = state
        self.event = event


@dataclass(frozen=True, slots=True)
class ProjectState:
    name: str
    reason: str | None = None  # set when name == FAILED
    prior: str | None = None   # state the failure interrupted


@dataclass(frozen=True, slots=True)
class Event:
    kind: str
    payload: Any = None


def transition(state: ProjectState | str, event: Event | str) -> ProjectState:
    """Total transition function over the declared table."""
    state_name = state.name if isinstance(state, ProjectState) else state
    event_kind = event.kind if isinstance(event, Event) else event
    target = TRANSITIONS.get((state_name, event_kind))
    if target is None:
        raise IllegalTransition(state_name, event_kind)
    if target == FAILED:
        payload = event.payload if isinstance(event, Event) else None
        return ProjectState(FAILED, reason=str(payload or "render failed"),
                            prior=state_name)
    return ProjectState(target)


def legal_events(state: ProjectState | str) -> list[str]:
    state_name = state.name if isinstance(state, ProjectState) else state
    return [event for event in EVENTS if (state_name, event) in TRANSITIONS]


def progress(state: ProjectState | str) -> tuple[int, str]:
    """(phase, step label) for the UI stepper; labels are stable tokens."""
    state_name = state.name if isinstance(state, ProjectState) else state
    if state_name not in _PHASES:
        raise KeyError(state_name)
    return _PHASES[state_name], state_name.replace("_", "-")
