// Pure session-state handling. Rendering and network code stay out of
// this module so the answer mapping and progress bookkeeping are directly
// testable.

import { Choice, HistoryEntry, ItemCard, Progress, QueryPair, SessionResponse } from "./types.js";

// The three on-screen controls and the exact wire choices they emit.
export const CONTROL_CHOICES = {
  left: "x",
  right: "y",
  unsure: "unsure"
} as const satisfies Record<string, Choice>;

export type Control = keyof typeof CONTROL_CHOICES;

export const KEY_CONTROLS: Record<string, Control> = {
  ArrowLeft: "left",
  ArrowRight: "right",
  " ": "unsure"
};

export interface UiSessionState {
  sessionId: string | null;
  status: "idle" | "pending" | "done" | "error";
  pair: QueryPair | null;
  result: ItemCard | null;
  progress: Progress | null;
  massHistory: number[];
  history: HistoryEntry[];
  answersSent: number;
  inFlight: boolean;
  error: string | null;
}

export function initialState(): UiSessionState {
  return {
    sessionId: null,
    status: "idle",
    pair: null,
    result: null,
    progress: null,
    massHistory: [],
    history: [],
    answersSent: 0,
    inFlight: false,
    error: null
  };
}

/** Merge a server response into the state. Every rendered state comes
 * through here, so a refreshed page fed the GET payload reconstructs the
 * same view. */
export function applyServerState(
  state: UiSessionState,
  resp: SessionResponse,
  sessionId?: string
): UiSessionState {
  const next: UiSessionState = {
    ...state,
    sessionId: resp.session_id ?? sessionId ?? state.sessionId,
    status: resp.status,
    pair: resp.query ?? null,
    result: resp.result ?? null,
    progress: resp.progress,
    massHistory: [...state.massHistory, resp.progress.vs_mass],
    inFlight: false,
    error: null
  };
  if (resp.history !== undefined) {
    next.history = resp.history;
    next.answersSent = resp.history.length;
  }
  return next;
}

/** Record that an answer for the current pair is on the wire. */
export function beginAnswer(state: UiSessionState, choice: Choice): UiSessionState {
  if (state.status !== "pending" || state.pair === null || state.inFlight) {
    return state;
  }
  const answer = choice === "unsure" ? "?" : choice;
  return {
    ...state,
    inFlight: true,
    history: [...state.history, { x: state.pair.x.id, y: state.pair.y.id, answer }],
    answersSent: state.answersSent + 1
  };
}

export function failRequest(state: UiSessionState, message: string): UiSessionState {
  return { ...state, inFlight: false, status: "error", error: message };
}

export function controlsEnabled(state: UiSessionState): boolean {
  return state.status === "pending" && !state.inFlight;
}

export function massNonincreasing(history: number[], tol = 1e-12): boolean {
  for (let i = 1; i < history.length; i++) {
    if (history[i] > history[i - 1] + tol) {
      return false;
    }
  }
  return true;
}
