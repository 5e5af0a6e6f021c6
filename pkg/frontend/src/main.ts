/** View wiring: upload, parameters, graph, with guarded navigation.
 *
 * The graph step is reachable only once an analysis has succeeded, and the
 * parameter step only once a binary is stored.
 */

import { ServiceClient } from "./api.js";
import { closeModal } from "./modal.js";
import { initialState } from "./state.js";
import { renderFormView } from "./views/form.js";
import { renderGraphView } from "./views/graph.js";
import { renderUploadView } from "./views/upload.js";

type ViewName = "upload" | "params" | "graph";

const client = new ServiceClient("");
const state = initialState();
let view: ViewName = "upload";

function reachable(name: ViewName): boolean {
  if (name === "upload") return true;
  if (name === "params") return state.binaryId !== null;
  return state.binaryId !== null && state.lastResult !== null;
}

function go(next: ViewName): void {
  if (!reachable(next)) {
    next = next === "graph" && reachable("params") ? "params" : "upload";
  }
  view = next;
  render();
}

function renderCrumbs(): void {
  const crumbs = document.getElementById("crumbs");
  if (!crumbs) return;
  crumbs.textContent = "";
  const steps: [ViewName, string][] = [
    ["upload", "1. upload"],
    ["params", "2. parameters"],
    ["graph", "3. graph"],
  ];
  const order: ViewName[] = ["upload", "params", "graph"];
  for (const [name, label] of steps) {
    const span = document.createElement("span");
    span.textContent = label;
    if (name === view) span.className = "active";
    else if (order.indexOf(name) < order.indexOf(view)) span.className = "done";
    if (reachable(name)) {
      span.addEventListener("click", () => go(name));
    }
    crumbs.appendChild(span);
  }
}

function render(): void {
  closeModal();
  renderCrumbs();
  const app = document.getElementById("app");
  if (!app) return;
  app.textContent = "";
  if (view === "upload") {
    renderUploadView(app, { client, state, onUploaded: () => go("params") });
  } else if (view === "params") {
    renderFormView(app, { client, state, onAnalyzed: () => go("graph") });
  } else {
    renderGraphView(app, { client, state });
  }
}

render();
