/** Parameter form, run history, and the sweep panel.
 *
 * The form validates locally with the exact rules the service applies and
 * refuses to send anything it knows would be rejected.  Values are sent as
 * typed: integer fields go over the wire as strings, which the service parses
 * with the same grammar the client checks.
 */

import { ServiceClient, ServiceError } from "../api.js";
import { renderLineChart } from "../chart.js";
import type { HistoryEntry, SessionState } from "../state.js";
import type { FieldError } from "../types.js";
import { ENDIANNESS_WIRE, parseWireInt, validateParams } from "../validate.js";

export interface FormCtx {
  client: ServiceClient;
  state: SessionState;
  onAnalyzed: () => void;
}

type FieldKind = "int" | "bool" | "endianness" | "range";

interface FieldSpec {
  wire: string;
  label: string;
  kind: FieldKind;
  required?: boolean;
  placeholder?: string;
  hint?: string;
}

export const FIELD_SPECS: FieldSpec[] = [
  { wire: "instructionLength", label: "instructionLength", kind: "int", required: true, placeholder: "32", hint: "bits per instruction, multiple of 8" },
  { wire: "retOpcodeLength", label: "retOpcodeLength", kind: "int", required: true, placeholder: "32" },
  { wire: "callOpcodeLength", label: "callOpcodeLength", kind: "int", required: true, placeholder: "6" },
  { wire: "fileOffset", label: "fileOffset", kind: "int", placeholder: "0" },
  { wire: "fileOffsetEnd", label: "fileOffsetEnd", kind: "int", placeholder: "end of file" },
  { wire: "pcOffset", label: "pcOffset", kind: "int", placeholder: "0", hint: "decimal or 0x hex" },
  { wire: "pcIncPerInstr", label: "pcIncPerInstr", kind: "int", placeholder: "1" },
  { wire: ENDIANNESS_WIRE, label: "endiannes", kind: "endianness" },
  { wire: "nrCandidates", label: "nrCandidates", kind: "int", placeholder: "5" },
  { wire: "callCandidateRange", label: "callCandidateRange", kind: "range", placeholder: "0, 20" },
  { wire: "retCandidateRange", label: "retCandidateRange", kind: "range", placeholder: "0, 10" },
  { wire: "returnToFunctionPrologueDistance", label: "returnToFunctionPrologueDistance", kind: "int", placeholder: "3" },
  { wire: "unknownCodeEntry", label: "unknownCodeEntry", kind: "bool" },
  { wire: "includeInstructions", label: "includeInstructions", kind: "bool" },
  { wire: "isRelativeAddressing", label: "isRelativeAddressing", kind: "bool" },
];

const SWEEPABLE = [
  "instructionLength",
  "callOpcodeLength",
  "retOpcodeLength",
  "pcOffset",
  "returnToFunctionPrologueDistance",
];

const FIELDSETS: [string, string[]][] = [
  ["Opcode geometry", ["instructionLength", "retOpcodeLength", "callOpcodeLength"]],
  ["Code region", ["fileOffset", "fileOffsetEnd", "pcOffset", "pcIncPerInstr", ENDIANNESS_WIRE]],
  ["Ranking", ["nrCandidates", "callCandidateRange", "retCandidateRange", "returnToFunctionPrologueDistance"]],
  ["Switches", ["unknownCodeEntry", "includeInstructions", "isRelativeAddressing"]],
];

/** Read the form into a wire object, leaving blank optional fields out. */
export function collectParams(root: HTMLElement): Record<string, unknown> {
  const params: Record<string, unknown> = {};
  for (const spec of FIELD_SPECS) {
    const holder = root.querySelector<HTMLElement>(`[data-field="${spec.wire}"]`);
    if (!holder) continue;
    if (spec.kind === "bool") {
      const box = holder.querySelector<HTMLInputElement>("input[type=checkbox]")!;
      if (box.checked) params[spec.wire] = true;
    } else if (spec.kind === "endianness") {
      const select = holder.querySelector<HTMLSelectElement>("select")!;
      params[spec.wire] = select.value;
    } else if (spec.kind === "range") {
      const parts = holder.querySelectorAll<HTMLInputElement>("input[type=text]");
      const a = parts[0].value.trim();
      const b = parts[1].value.trim();
      if (a !== "" || b !== "") params[spec.wire] = [a, b];
    } else {
      const input = holder.querySelector<HTMLInputElement>("input[type=text]")!;
      const text = input.value.trim();
      if (text !== "") params[spec.wire] = text;
    }
  }
  return params;
}

function restoreParams(root: HTMLElement, params: Record<string, unknown>): void {
  for (const spec of FIELD_SPECS) {
    const holder = root.querySelector<HTMLElement>(`[data-field="${spec.wire}"]`);
    if (!holder) continue;
    const value = params[spec.wire];
    if (spec.kind === "bool") {
      holder.querySelector<HTMLInputElement>("input[type=checkbox]")!.checked = value === true;
    } else if (spec.kind === "endianness") {
      const select = holder.querySelector<HTMLSelectElement>("select")!;
      select.value = value === "little" ? "little" : "big";
    } else if (spec.kind === "range") {
      const parts = holder.querySelectorAll<HTMLInputElement>("input[type=text]");
      if (Array.isArray(value) && value.length === 2) {
        parts[0].value = String(value[0]);
        parts[1].value = String(value[1]);
      } else {
        parts[0].value = "";
        parts[1].value = "";
      }
    } else {
      const input = holder.querySelector<HTMLInputElement>("input[type=text]")!;
      input.value = value === undefined || value === null ? "" : String(value);
    }
  }
}

function showFieldErrors(root: HTMLElement, banner: HTMLElement, errors: FieldError[]): void {
  root.querySelectorAll(".field.invalid").forEach((f) => f.classList.remove("invalid"));
  root.querySelectorAll<HTMLElement>(".field-error").forEach((e) => {
    e.textContent = "";
    e.hidden = true;
  });
  const stray: string[] = [];
  for (const err of errors) {
    const holder = root.querySelector<HTMLElement>(`[data-field="${err.field}"]`);
    if (!holder) {
      stray.push(`${err.field}: ${err.message}`);
      continue;
    }
    holder.classList.add("invalid");
    const slot = holder.querySelector<HTMLElement>(".field-error")!;
    slot.textContent = slot.textContent === "" ? err.message : `${slot.textContent}; ${err.message}`;
    slot.hidden = false;
  }
  banner.textContent = stray.join("; ");
  banner.hidden = stray.length === 0;
}

function buildField(spec: FieldSpec): HTMLElement {
  const holder = document.createElement("div");
  holder.className = "field";
  holder.dataset.field = spec.wire;

  const label = document.createElement("label");
  label.textContent = spec.required ? `${spec.label} *` : spec.label;
  holder.appendChild(label);

  if (spec.kind === "bool") {
    const box = document.createElement("input");
    box.type = "checkbox";
    holder.appendChild(box);
  } else if (spec.kind === "endianness") {
    const select = document.createElement("select");
    for (const option of ["big", "little"]) {
      const el = document.createElement("option");
      el.value = option;
      el.textContent = option;
      select.appendChild(el);
    }
    holder.appendChild(select);
  } else if (spec.kind === "range") {
    for (const part of ["start", "end"]) {
      const input = document.createElement("input");
      input.type = "text";
      input.placeholder = part;
      input.setAttribute("aria-label", `${spec.wire} ${part}`);
      holder.appendChild(input);
    }
  } else {
    const input = document.createElement("input");
    input.type = "text";
    input.placeholder = spec.placeholder ?? "";
    holder.appendChild(input);
  }

  if (spec.hint) {
    const hint = document.createElement("span");
    hint.className = "hint";
    hint.textContent = spec.hint;
    holder.appendChild(hint);
  }

  const slot = document.createElement("span");
  slot.className = "field-error";
  slot.hidden = true;
  holder.appendChild(slot);
  return holder;
}

export function renderFormView(root: HTMLElement, ctx: FormCtx): void {
  let analyzeAbort: AbortController | null = null;
  let sweepAbort: AbortController | null = null;

  const layout = document.createElement("div");
  layout.className = "form-layout";

  const formPanel = document.createElement("section");
  formPanel.className = "panel";
  const heading = document.createElement("h2");
  heading.textContent = "Analysis parameters";
  formPanel.appendChild(heading);

  const fileLine = document.createElement("p");
  fileLine.className = "hint";
  fileLine.textContent = `${ctx.state.binaryName ?? "binary"} (${ctx.state.binarySize ?? "?"} bytes), id ${
    ctx.state.binaryId?.slice(0, 12) ?? "?"
  }`;
  formPanel.appendChild(fileLine);

  const form = document.createElement("form");
  for (const [legendText, wires] of FIELDSETS) {
    const fieldset = document.createElement("fieldset");
    const legend = document.createElement("legend");
    legend.textContent = legendText;
    fieldset.appendChild(legend);
    for (const wire of wires) {
      const spec = FIELD_SPECS.find((s) => s.wire === wire)!;
      fieldset.appendChild(buildField(spec));
    }
    form.appendChild(fieldset);
  }

  const banner = document.createElement("div");
  banner.className = "error-banner";
  banner.hidden = true;
  form.appendChild(banner);

  const status = document.createElement("p");
  status.className = "hint";
  status.hidden = true;
  form.appendChild(status);

  const submit = document.createElement("button");
  submit.type = "submit";
  submit.textContent = "Analyze";
  form.appendChild(submit);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const params = collectParams(form);
    const errors = validateParams(params);
    if (errors.length > 0) {
      showFieldErrors(form, banner, errors);
      return;
    }
    showFieldErrors(form, banner, []);
    analyzeAbort?.abort();
    const controller = new AbortController();
    analyzeAbort = controller;
    status.textContent = "analyzing";
    status.hidden = false;
    void ctx.client
      .analyze(ctx.state.binaryId!, params, controller.signal)
      .then((result) => {
        if (controller.signal.aborted) return;
        ctx.state.lastResult = result;
        ctx.state.selectedRank = 0;
        ctx.state.history.unshift({
          params,
          topScore: result.candidates[0]?.ocpScore ?? null,
          when: new Date().toLocaleTimeString(),
        });
        ctx.onAnalyzed();
      })
      .catch((err) => {
        if (controller.signal.aborted) return;
        status.hidden = true;
        if (err instanceof ServiceError && err.details.length > 0) {
          showFieldErrors(form, banner, err.details);
        } else {
          banner.textContent = err instanceof Error ? err.message : String(err);
          banner.hidden = false;
        }
        ctx.state.history.unshift({
          params,
          topScore: null,
          when: new Date().toLocaleTimeString(),
        });
        renderHistory();
      });
  });

  formPanel.appendChild(form);

  const side = document.createElement("div");

  const historyPanel = document.createElement("section");
  historyPanel.className = "panel";
  const historyHeading = document.createElement("h2");
  historyHeading.textContent = "History";
  historyPanel.appendChild(historyHeading);
  const historyList = document.createElement("div");
  historyPanel.appendChild(historyList);

  const renderHistory = () => {
    historyList.textContent = "";
    if (ctx.state.history.length === 0) {
      const empty = document.createElement("p");
      empty.className = "hint";
      empty.textContent = "No runs yet.";
      historyList.appendChild(empty);
      return;
    }
    for (const entry of ctx.state.history) {
      historyList.appendChild(historyRow(entry));
    }
  };

  const historyRow = (entry: HistoryEntry) => {
    const row = document.createElement("div");
    row.className = "history-entry";
    const score = document.createElement("span");
    score.className = entry.topScore === null ? "score failed" : "score";
    score.textContent = entry.topScore === null ? "failed" : entry.topScore.toFixed(3);
    const when = document.createElement("span");
    when.textContent = entry.when;
    row.appendChild(score);
    row.appendChild(when);
    row.title = "click to restore these parameters";
    row.addEventListener("click", () => {
      restoreParams(form, entry.params);
      showFieldErrors(form, banner, []);
    });
    return row;
  };
  renderHistory();

  const sweepPanel = document.createElement("section");
  sweepPanel.className = "panel";
  const sweepHeading = document.createElement("h2");
  sweepHeading.textContent = "Parameter sweep";
  sweepPanel.appendChild(sweepHeading);
  const sweepHint = document.createElement("p");
  sweepHint.className = "hint";
  sweepHint.textContent =
    "Re-scores the binary once per value, holding the other parameters at the form values.";
  sweepPanel.appendChild(sweepHint);

  const sweepControls = document.createElement("div");
  sweepControls.className = "field";
  const sweepSelect = document.createElement("select");
  for (const name of SWEEPABLE) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name;
    sweepSelect.appendChild(option);
  }
  const sweepValues = document.createElement("input");
  sweepValues.type = "text";
  sweepValues.placeholder = "values, e.g. 8, 16, 32";
  const sweepRun = document.createElement("button");
  sweepRun.type = "button";
  sweepRun.textContent = "Run sweep";
  sweepControls.appendChild(sweepSelect);
  sweepControls.appendChild(sweepValues);
  sweepControls.appendChild(sweepRun);
  sweepPanel.appendChild(sweepControls);

  const sweepBanner = document.createElement("div");
  sweepBanner.className = "error-banner";
  sweepBanner.hidden = true;
  sweepPanel.appendChild(sweepBanner);
  const sweepOut = document.createElement("div");
  sweepPanel.appendChild(sweepOut);

  sweepRun.addEventListener("click", () => {
    sweepBanner.hidden = true;
    sweepOut.textContent = "";
    const params = collectParams(form);
    const errors = validateParams(params);
    if (errors.length > 0) {
      showFieldErrors(form, banner, errors);
      sweepBanner.textContent = "fix the form errors first; the sweep reuses those parameters";
      sweepBanner.hidden = false;
      return;
    }
    const parameter = sweepSelect.value;
    const raw = sweepValues.value
      .split(",")
      .map((v) => v.trim())
      .filter((v) => v !== "");
    if (raw.length === 0) {
      sweepBanner.textContent = "give at least one value to sweep over";
      sweepBanner.hidden = false;
      return;
    }
    for (const value of raw) {
      const parsed = parseWireInt(value, parameter);
      if (!parsed.ok) {
        sweepBanner.textContent = parsed.error.message;
        sweepBanner.hidden = false;
        return;
      }
    }
    sweepAbort?.abort();
    const controller = new AbortController();
    sweepAbort = controller;
    void ctx.client
      .sweep(ctx.state.binaryId!, parameter, raw, params, 1, controller.signal)
      .then((result) => {
        if (controller.signal.aborted) return;
        const points = result.points.map((p) => ({
          label: String(p.value),
          y: p.error !== undefined ? null : (p.pairs?.[0]?.ocpScore ?? null),
        }));
        sweepOut.appendChild(renderLineChart(points, "top score"));
        const failures = result.points.filter((p) => p.error !== undefined);
        if (failures.length > 0) {
          const list = document.createElement("ul");
          list.className = "hint";
          for (const p of failures) {
            const item = document.createElement("li");
            item.textContent = `${p.value}: ${p.error}`;
            list.appendChild(item);
          }
          sweepOut.appendChild(list);
        }
      })
      .catch((err) => {
        if (controller.signal.aborted) return;
        sweepBanner.textContent = err instanceof Error ? err.message : String(err);
        sweepBanner.hidden = false;
      });
  });

  side.appendChild(historyPanel);
  side.appendChild(sweepPanel);
  layout.appendChild(formPanel);
  layout.appendChild(side);
  root.appendChild(layout);
}
