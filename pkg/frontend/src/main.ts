// DOM wiring for the hot-seat interface. All game numbers shown here are
// copied verbatim from API responses; this file only formats and places them.

import { createApi, type StrategyWire, type Variant, type Backend } from "./api.js";
import {
  cumulativeScores,
  distributionBars,
  formatPayoff,
  initialState,
  lastRound,
  sampledSummary,
  submitRound,
  type SessionState,
} from "./state.js";
import { buildHeatmap, markerCell, type HeatmapGrid } from "./heatmap.js";
import { debounce, mixedOverlay, noiseOverlay } from "./whatif.js";

const api = createApi("");
let session: SessionState = initialState();
let heatmap: HeatmapGrid | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

interface PickerState {
  named: string | null;
  p: number;
}

const pickers: Record<"a" | "b", PickerState> = {
  a: { named: "c", p: 0 },
  b: { named: "c", p: 0 },
};

function pickerStrategy(which: "a" | "b"): StrategyWire {
  const picker = pickers[which];
  return picker.named ?? { p: picker.p };
}

function renderPicker(which: "a" | "b") {
  const picker = pickers[which];
  for (const name of ["c", "d", "q", "m"]) {
    el<HTMLButtonElement>(`${which}-${name}`).classList.toggle(
      "selected",
      picker.named === name,
    );
  }
  el<HTMLSpanElement>(`${which}-p-value`).textContent =
    picker.named === null ? picker.p.toFixed(2) : "-";
}

function wirePicker(which: "a" | "b") {
  for (const name of ["c", "d", "q", "m"]) {
    el<HTMLButtonElement>(`${which}-${name}`).addEventListener("click", () => {
      pickers[which].named = name;
      renderPicker(which);
      void refreshMarker();
    });
  }
  const slider = el<HTMLInputElement>(`${which}-p`);
  slider.addEventListener("input", () => {
    pickers[which].named = null;
    pickers[which].p = Number(slider.value);
    renderPicker(which);
    void refreshMarker();
  });
}

function currentVariant(): Variant {
  return el<HTMLSelectElement>("variant").value as Variant;
}

function currentBackend(): Backend {
  return el<HTMLSelectElement>("backend").value as Backend;
}

function renderSession() {
  const scores = cumulativeScores(session.history);
  el("score-a").textContent = formatPayoff(scores.a);
  el("score-b").textContent = formatPayoff(scores.b);
  el("error").textContent = session.error ?? "";

  const round = lastRound(session);
  const result = el("round-result");
  if (!round) {
    result.hidden = true;
    return;
  }
  result.hidden = false;
  el("payoff-a").textContent = formatPayoff(round.response.payoffs.a);
  el("payoff-b").textContent = formatPayoff(round.response.payoffs.b);
  el("sampled").textContent = sampledSummary(round.response);
  el("postselection").textContent =
    round.response.postselection_probability === null
      ? ""
      : `postselection ${round.response.postselection_probability.toFixed(4)}`;

  const bars = el("bars");
  bars.replaceChildren();
  for (const bar of distributionBars(round.response)) {
    const rowEl = document.createElement("div");
    rowEl.className = "bar-row";
    const label = document.createElement("span");
    label.textContent = bar.label;
    const track = document.createElement("div");
    track.className = "bar-track";
    const fill = document.createElement("div");
    fill.className = "bar-fill";
    fill.style.width = `${(bar.probability * 100).toFixed(1)}%`;
    track.appendChild(fill);
    const value = document.createElement("span");
    value.textContent = bar.probability.toFixed(4);
    rowEl.append(label, track, value);
    bars.appendChild(rowEl);
  }

  const history = el("history");
  history.replaceChildren();
  session.history.forEach((entry, index) => {
    const li = document.createElement("li");
    li.textContent =
      `#${index + 1} ${JSON.stringify(entry.settings.strategyA)} vs ` +
      `${JSON.stringify(entry.settings.strategyB)} -> ` +
      `${formatPayoff(entry.response.payoffs.a)} / ${formatPayoff(entry.response.payoffs.b)}`;
    history.appendChild(li);
  });
}

async function onSubmitRound() {
  const shots = Number(el<HTMLInputElement>("shots").value) || 0;
  const seedText = el<HTMLInputElement>("seed").value.trim();
  session = await submitRound(
    session,
    {
      strategyA: pickerStrategy("a"),
      strategyB: pickerStrategy("b"),
      variant: currentVariant(),
      backend: currentBackend(),
      shots,
      seed: seedText === "" ? undefined : Number(seedText),
    },
    api,
  );
  renderSession();
}

async function refreshHeatmap() {
  const variant = currentVariant();
  const container = el("heatmap");
  try {
    const surface = await api.surface(21, variant);
    heatmap = buildHeatmap(surface);
  } catch (err) {
    container.textContent = `surface unavailable: ${String(err)}`;
    heatmap = null;
    return;
  }
  container.replaceChildren();
  container.style.gridTemplateColumns = `repeat(${heatmap.steps}, 1fr)`;
  for (const line of heatmap.cells) {
    for (const cell of line) {
      const div = document.createElement("div");
      div.className = "cell";
      const level = Math.round(cell.brightness * 255);
      div.style.background = `rgb(${level}, ${Math.round(level * 0.85)}, ${60 + Math.round(level * 0.6)})`;
      div.title = `p_a=${cell.pA.toFixed(2)} p_b=${cell.pB.toFixed(2)} -> ${cell.payoffA.toFixed(3)}`;
      div.dataset.pa = cell.pA.toFixed(2);
      div.dataset.pb = cell.pB.toFixed(2);
      container.appendChild(div);
    }
  }
  await refreshMarker();
}

async function refreshMarker() {
  if (!heatmap) return;
  const strategyOf = (which: "a" | "b") => {
    const picker = pickers[which];
    if (picker.named === "d") return 1;
    if (picker.named === "q") return -1;
    if (picker.named === "c") return 0;
    if (picker.named === "m") return null;
    return picker.p;
  };
  const pA = strategyOf("a");
  const pB = strategyOf("b");
  document.querySelectorAll("#heatmap .cell.marked").forEach((cell) =>
    cell.classList.remove("marked"),
  );
  el("marker-info").textContent = "";
  if (pA === null || pB === null) return;
  const cell = markerCell(heatmap, pA, pB);
  const selector = `#heatmap .cell[data-pa="${cell.pA.toFixed(2)}"][data-pb="${cell.pB.toFixed(2)}"]`;
  document.querySelector(selector)?.classList.add("marked");
  el("marker-info").textContent =
    `marked cell payoff_a = ${cell.payoffA.toFixed(3)}`;
}

const noiseUpdate = debounce(async (sigma: number) => {
  try {
    const overlay = await noiseOverlay(api, pickerStrategy("a"), pickerStrategy("b"), sigma);
    el("noise-overlay").textContent =
      `sigma=${overlay.sigma.toFixed(2)}: average payoff ${overlay.averagePayoffA.toFixed(4)}, ` +
      `gap ${overlay.gap.toFixed(4)}, resource negativity ${overlay.negativity.toFixed(4)}`;
  } catch (err) {
    el("noise-overlay").textContent = String(err);
  }
}, 250);

const mixedUpdate = debounce(async (x: number) => {
  try {
    const overlay = await mixedOverlay(api, pickerStrategy("a"), pickerStrategy("b"), x);
    el("mixed-overlay").textContent =
      `x=${overlay.x.toFixed(2)}: payoffs ${overlay.payoffA.toFixed(4)} / ` +
      `${overlay.payoffB.toFixed(4)} [${overlay.badge}]`;
  } catch (err) {
    el("mixed-overlay").textContent = String(err);
  }
}, 250);

function wire() {
  wirePicker("a");
  wirePicker("b");
  renderPicker("a");
  renderPicker("b");
  el<HTMLButtonElement>("submit").addEventListener("click", () => void onSubmitRound());
  el<HTMLSelectElement>("variant").addEventListener("change", () => void refreshHeatmap());
  el<HTMLInputElement>("sigma").addEventListener("input", (e) =>
    noiseUpdate.call(Number((e.target as HTMLInputElement).value)),
  );
  el<HTMLInputElement>("mixed-x").addEventListener("input", (e) =>
    mixedUpdate.call(Number((e.target as HTMLInputElement).value)),
  );
  void refreshHeatmap();
}

document.addEventListener("DOMContentLoaded", wire);
