/** Node detail modal.
 *
 * Shows exactly what the service reported for the function: its entry
 * address, the instruction index span, and the captured instruction words
 * when the analysis ran with includeInstructions.  No address arithmetic
 * happens here.
 */

import type { GraphNodeWire } from "./types.js";

export function closeModal(): void {
  document.querySelectorAll(".modal-backdrop").forEach((node) => node.remove());
}

export function openNodeModal(node: GraphNodeWire): HTMLElement {
  closeModal();

  const backdrop = document.createElement("div");
  backdrop.className = "modal-backdrop";
  backdrop.addEventListener("click", (event) => {
    if (event.target === backdrop) closeModal();
  });

  const modal = document.createElement("div");
  modal.className = "modal";

  const heading = document.createElement("h3");
  heading.textContent = node.label;
  modal.appendChild(heading);

  const dl = document.createElement("dl");
  const row = (term: string, detail: string) => {
    const dt = document.createElement("dt");
    dt.textContent = term;
    const dd = document.createElement("dd");
    dd.textContent = detail;
    dl.appendChild(dt);
    dl.appendChild(dd);
  };
  row("entry address", node.entryAddress);
  row("instruction span", `[${node.entryIndex}, ${node.endIndex})`);
  modal.appendChild(dl);

  if (node.instructions && node.instructions.length > 0) {
    const list = document.createElement("ol");
    list.className = "instructions";
    for (const [address, word] of node.instructions) {
      const item = document.createElement("li");
      const code = document.createElement("code");
      code.textContent = `${address}  ${word}`;
      item.appendChild(code);
      list.appendChild(item);
    }
    modal.appendChild(list);
  } else {
    const note = document.createElement("p");
    note.className = "hint";
    note.textContent =
      "Instruction words were not captured; re-run the analysis with includeInstructions to list them.";
    modal.appendChild(note);
  }

  const closeRow = document.createElement("div");
  closeRow.className = "close-row";
  const button = document.createElement("button");
  button.type = "button";
  button.textContent = "Close";
  button.addEventListener("click", closeModal);
  closeRow.appendChild(button);
  modal.appendChild(closeRow);

  backdrop.appendChild(modal);
  document.body.appendChild(backdrop);

  const onKey = (event: KeyboardEvent) => {
    if (event.key === "Escape") {
      closeModal();
      document.removeEventListener("keydown", onKey);
    }
  };
  document.addEventListener("keydown", onKey);

  return backdrop;
}
