import { describe, expect, it } from "vitest";

import {
  CONTROL_CHOICES,
  KEY_CONTROLS,
  applyServerState,
  beginAnswer,
  controlsEnabled,
  failRequest,
  initialState,
  massNonincreasing
} from "../src/state.js";
import { SessionResponse } from "../src/types.js";
import replay from "./fixtures/session-replay.json";

const fixtureResponses = replay.responses as SessionResponse[];

describe("control-to-choice mapping", () => {
  it("the three controls emit exactly x, y and unsure", () => {
    expect(CONTROL_CHOICES).toEqual({ left: "x", right: "y", unsure: "unsure" });
  });

  it("keyboard shortcuts map onto the three controls", () => {
    expect(KEY_CONTROLS["ArrowLeft"]).toBe("left");
    expect(KEY_CONTROLS["ArrowRight"]).toBe("right");
    expect(KEY_CONTROLS[" "]).toBe("unsure");
  });
});

describe("session replay through the reducer", () => {
  it("progress mass is nonincreasing across the full recorded session", () => {
    let state = initialState();
    state = applyServerState(state, fixtureResponses[0]);
    for (let i = 1; i < fixtureResponses.length; i++) {
      state = beginAnswer(state, replay.answers[i - 1] as "x" | "y" | "unsure");
      state = applyServerState(state, fixtureResponses[i]);
    }
    expect(state.status).toBe("done");
    expect(state.result?.id).toBe(replay.expected_result_id);
    expect(massNonincreasing(state.massHistory)).toBe(true);
    expect(state.massHistory.length).toBe(fixtureResponses.length);
  });

  it("history grows by one entry per answer", () => {
    let state = applyServerState(initialState(), fixtureResponses[0]);
    state = beginAnswer(state, replay.answers[0] as "x");
    expect(state.history).toHaveLength(1);
    expect(state.history[0].x).toBe(fixtureResponses[0].query!.x.id);
    expect(state.history[0].y).toBe(fixtureResponses[0].query!.y.id);
  });

  it("terminal state disables the controls", () => {
    let state = initialState();
    for (const [i, resp] of fixtureResponses.entries()) {
      if (i > 0) state = beginAnswer(state, replay.answers[i - 1] as "x");
      state = applyServerState(state, resp);
    }
    expect(controlsEnabled(state)).toBe(false);
  });
});

describe("reducer mechanics", () => {
  const pending: SessionResponse = {
    session_id: "abc",
    status: "pending",
    query: {
      x: { id: "a", label: "A", features: [0] },
      y: { id: "b", label: "B", features: [1] }
    },
    progress: { vs_size: 10, vs_mass: 1.0 }
  };

  it("buttons stay disabled while a request is in flight", () => {
    let state = applyServerState(initialState(), pending);
    expect(controlsEnabled(state)).toBe(true);
    state = beginAnswer(state, "x");
    expect(state.inFlight).toBe(true);
    expect(controlsEnabled(state)).toBe(false);
  });

  it("answers are ignored when no query is pending", () => {
    const state = initialState();
    expect(beginAnswer(state, "x")).toBe(state);
  });

  it("unsure is recorded as ? in the history", () => {
    let state = applyServerState(initialState(), pending);
    state = beginAnswer(state, "unsure");
    expect(state.history[0].answer).toBe("?");
  });

  it("a server error surfaces in the banner state", () => {
    const state = failRequest(initialState(), "unknown dataset 'mnist'");
    expect(state.status).toBe("error");
    expect(state.error).toMatch(/mnist/);
  });

  it("a GET payload with history restores the sequence counter", () => {
    const restored = applyServerState(initialState(), {
      ...pending,
      history: [
        { x: "a", y: "b", answer: "x" },
        { x: "a", y: "c", answer: "?" }
      ]
    }, "abc");
    expect(restored.answersSent).toBe(2);
    expect(restored.sessionId).toBe("abc");
  });

  it("mass monotonicity check flags increases", () => {
    expect(massNonincreasing([1.0, 0.6, 0.6, 0.2])).toBe(true);
    expect(massNonincreasing([1.0, 0.5, 0.7])).toBe(false);
  });
});
