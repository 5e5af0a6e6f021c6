/** Candidate ranking table and the call graph for the selected pair. */

import { ServiceClient } from "../api.js";
import { renderCallGraph } from "../graphRender.js";
import { closeModal, openNodeModal } from "../modal.js";
import type { SessionState } from "../state.js";
import type { CandidateWire } from "../types.js";

export interface GraphCtx {
  client: ServiceClient;
  state: SessionState;
}

function candidateRow(
  candidate: CandidateWire,
  index: number,
  selected: boolean,
  onSelect: (index: number) => void,
): HTMLTableRowElement {
  const row = document.createElement("tr");
  row.className = selected ? "selectable selected" : "selectable";
  const cells = [
    String(candidate.rank),
    candidate.callOpcode,
    candidate.retOpcode,
    candidate.ocpScore.toFixed(4),
    String(candidate.validEdges),
    String(candidate.potentialEdges),
    String(candidate.callCount),
  ];
  for (const text of cells) {
    const cell = document.createElement("td");
    cell.textContent = text;
    row.appendChild(cell);
  }
  row.addEventListener("click", () => onSelect(index));
  return row;
}

export function renderGraphView(root: HTMLElement, ctx: GraphCtx): void {
  const result = ctx.state.lastResult;
  if (!result) return;
  const candidates = result.candidates;
  if (ctx.state.selectedRank >= candidates.length) ctx.state.selectedRank = 0;

  const tablePanel = document.createElement("section");
  tablePanel.className = "panel";
  const tableHeading = document.createElement("h2");
  tableHeading.textContent = "Ranked opcode pairs";
  tablePanel.appendChild(tableHeading);

  const table = document.createElement("table");
  table.className = "pairs";
  const thead = document.createElement("thead");
  const headRow = document.createElement("tr");
  for (const name of ["rank", "call", "ret", "score", "valid", "potential", "calls"]) {
    const th = document.createElement("th");
    th.textContent = name;
    headRow.appendChild(th);
  }
  thead.appendChild(headRow);
  table.appendChild(thead);

  const tbody = document.createElement("tbody");
  const rerender = () => {
    closeModal();
    root.textContent = "";
    renderGraphView(root, ctx);
  };
  candidates.forEach((candidate, i) => {
    tbody.appendChild(
      candidateRow(candidate, i, i === ctx.state.selectedRank, (index) => {
        ctx.state.selectedRank = index;
        rerender();
      }),
    );
  });
  table.appendChild(tbody);
  const scroller = document.createElement("div");
  scroller.style.overflowX = "auto";
  scroller.appendChild(table);
  tablePanel.appendChild(scroller);
  root.appendChild(tablePanel);

  const selected = candidates[ctx.state.selectedRank];
  if (!selected) {
    const empty = document.createElement("p");
    empty.className = "hint";
    empty.textContent = "No candidate pairs were ranked for these parameters.";
    tablePanel.appendChild(empty);
    return;
  }

  const graphPanel = document.createElement("section");
  graphPanel.className = "panel graph-shell";
  const graphHeading = document.createElement("h2");
  graphHeading.textContent = `Call graph for rank ${selected.rank}`;
  graphPanel.appendChild(graphHeading);

  const summary = document.createElement("p");
  summary.className = "hint";
  summary.textContent =
    `${selected.graph.nodes.length} functions, ${selected.graph.edges.length} call edges. ` +
    "Click a node for details.";
  const dotLink = document.createElement("a");
  dotLink.href = ctx.client.graphUrl(ctx.state.binaryId!, ctx.state.selectedRank, "dot");
  dotLink.textContent = "DOT export";
  dotLink.target = "_blank";
  summary.appendChild(dotLink);
  graphPanel.appendChild(summary);

  const shell = document.createElement("div");
  shell.style.overflowX = "auto";
  shell.appendChild(
    renderCallGraph(selected.graph, {
      onNodeClick: (index) => {
        const node = selected.graph.nodes[index];
        if (node) openNodeModal(node);
      },
    }),
  );
  graphPanel.appendChild(shell);
  root.appendChild(graphPanel);
}
