import { createSession, getSession, listDatasets, postAnswer } from "./api.js";
import {
  CONTROL_CHOICES,
  Control,
  UiSessionState,
  applyServerState,
  beginAnswer,
  controlsEnabled,
  failRequest,
  initialState
} from "./state.js";
import { bindControls, render } from "./ui.js";

let state: UiSessionState = initialState();

function update(next: UiSessionState): void {
  state = next;
  render(state);
}

function sessionIdFromHash(): string | null {
  const match = window.location.hash.match(/^#s=(\w+)$/);
  return match ? match[1] : null;
}

async function submitAnswer(control: Control): Promise<void> {
  if (!controlsEnabled(state) || !state.sessionId) return;
  const choice = CONTROL_CHOICES[control];
  const seq = state.answersSent;
  update(beginAnswer(state, choice));
  try {
    const resp = await postAnswer(state.sessionId, choice, seq);
    update(applyServerState(state, resp));
  } catch (err) {
    update(failRequest(state, err instanceof Error ? err.message : String(err)));
  }
}

async function startSession(): Promise<void> {
  const dataset = (document.getElementById("dataset") as HTMLSelectElement).value;
  const strategy = (document.getElementById("strategy") as HTMLSelectElement).value;
  const alpha = parseFloat((document.getElementById("alpha") as HTMLInputElement).value);
  try {
    const resp = await createSession(dataset, strategy, alpha);
    window.location.hash = `s=${resp.session_id}`;
    update(applyServerState(initialState(), resp));
  } catch (err) {
    update(failRequest(state, err instanceof Error ? err.message : String(err)));
  }
}

async function restoreSession(sessionId: string): Promise<void> {
  try {
    const resp = await getSession(sessionId);
    update(applyServerState(initialState(), resp, sessionId));
  } catch (err) {
    window.location.hash = "";
    update(failRequest(initialState(), err instanceof Error ? err.message : String(err)));
  }
}

async function boot(): Promise<void> {
  bindControls((control) => void submitAnswer(control));
  document.getElementById("start")!.addEventListener("click", () => void startSession());
  try {
    const { datasets } = await listDatasets();
    const select = document.getElementById("dataset") as HTMLSelectElement;
    select.innerHTML = datasets
      .map((d) => `<option value="${d.id}">${d.id} (${d.n} items)</option>`)
      .join("");
  } catch (err) {
    update(failRequest(state, err instanceof Error ? err.message : String(err)));
    return;
  }
  const existing = sessionIdFromHash();
  if (existing) {
    await restoreSession(existing);
  } else {
    render(state);
  }
}

void boot();
