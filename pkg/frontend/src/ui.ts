// DOM rendering and input wiring. All decisions about what to show live
// in the state module; this file only paints it.

import { CONTROL_CHOICES, Control, KEY_CONTROLS, UiSessionState, controlsEnabled } from "./state.js";
import { ItemCard } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function renderCard(target: HTMLElement, item: ItemCard | null): void {
  if (!item) {
    target.innerHTML = "";
    return;
  }
  const features = item.features.map((v) => v.toPrecision(4)).join(", ");
  target.innerHTML = `
    <div class="card-label">${item.label}</div>
    <div class="card-id">${item.id}</div>
    <div class="card-features">[${features}]</div>`;
}

export function render(state: UiSessionState): void {
  el("start-panel").hidden = state.status !== "idle" && state.status !== "error";
  el("session-panel").hidden = state.status === "idle";

  const banner = el("error-banner");
  banner.hidden = state.error === null;
  banner.textContent = state.error ?? "";

  renderCard(el("card-x"), state.pair?.x ?? null);
  renderCard(el("card-y"), state.pair?.y ?? null);
  el("query-row").hidden = state.pair === null;

  const enabled = controlsEnabled(state);
  for (const control of Object.keys(CONTROL_CHOICES) as Control[]) {
    (el(`btn-${control}`) as HTMLButtonElement).disabled = !enabled;
  }

  if (state.progress) {
    const { vs_size, vs_mass } = state.progress;
    el("progress-text").textContent =
      `${vs_size} candidate${vs_size === 1 ? "" : "s"} left, mass ${vs_mass.toFixed(4)}`;
    (el("mass-bar") as HTMLElement).style.width = `${Math.max(1, vs_mass * 100)}%`;
  }

  const historyList = el("history");
  historyList.innerHTML = state.history
    .map((h) => `<li><code>${h.x}</code> vs <code>${h.y}</code> &rarr; ${h.answer}</li>`)
    .join("");

  const resultPanel = el("result-panel");
  resultPanel.hidden = !(state.status === "done");
  if (state.status === "done") {
    renderCard(el("result-card"), state.result);
    el("result-title").textContent = state.result
      ? "Found it"
      : "Search ended without a single candidate";
  }
}

export function bindControls(onAnswer: (control: Control) => void): void {
  for (const control of Object.keys(CONTROL_CHOICES) as Control[]) {
    el(`btn-${control}`).addEventListener("click", () => onAnswer(control));
  }
  document.addEventListener("keydown", (event) => {
    const control = KEY_CONTROLS[event.key];
    if (control) {
      event.preventDefault();
      onAnswer(control);
    }
  });
}
