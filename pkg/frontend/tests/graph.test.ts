// @vitest-environment happy-dom
/** Graph view rendering against fixed JSON graphs.
 *
 * For each fixture the rendered SVG must contain exactly one node group per
 * JSON node and one edge path per JSON edge, and clicking a node must open
 * the modal showing that node's address span.
 */

import { beforeEach, describe, expect, it } from "vitest";

import { ServiceClient } from "../src/api.js";
import { initialState, type SessionState } from "../src/state.js";
import type { AnalysisResultWire, CandidateWire, GraphWire } from "../src/types.js";
import { renderGraphView } from "../src/views/graph.js";

function node(i: number, entryIndex: number, endIndex: number, instructions?: [string, string][]) {
  return {
    label: `function ${i}`,
    entryAddress: "0x" + (0x1000 + entryIndex * 4).toString(16),
    entryIndex,
    endIndex,
    ...(instructions !== undefined ? { instructions } : {}),
  };
}

const FIXTURES: { name: string; graph: GraphWire }[] = [
  {
    name: "two nodes, one call",
    graph: {
      nodes: [node(0, 0, 8), node(1, 8, 20)],
      edges: [{ from: 0, to: 1, multiplicity: 1 }],
    },
  },
  {
    name: "four-node chain with repeated calls",
    graph: {
      nodes: [node(0, 0, 4), node(1, 4, 9), node(2, 9, 15), node(3, 15, 30)],
      edges: [
        { from: 0, to: 1, multiplicity: 2 },
        { from: 1, to: 2, multiplicity: 1 },
        { from: 2, to: 3, multiplicity: 3 },
      ],
    },
  },
  {
    name: "cycle plus self recursion",
    graph: {
      nodes: [node(0, 0, 6), node(1, 6, 11), node(2, 11, 19)],
      edges: [
        { from: 0, to: 1, multiplicity: 1 },
        { from: 1, to: 2, multiplicity: 1 },
        { from: 2, to: 0, multiplicity: 1 },
        { from: 1, to: 1, multiplicity: 2 },
      ],
    },
  },
  {
    name: "star with cross edges and an unreachable node",
    graph: {
      nodes: [
        node(0, 0, 3),
        node(1, 3, 6),
        node(2, 6, 9),
        node(3, 9, 12),
        node(4, 12, 15),
        node(5, 15, 18),
        node(6, 18, 24),
      ],
      edges: [
        { from: 0, to: 1, multiplicity: 1 },
        { from: 0, to: 2, multiplicity: 1 },
        { from: 0, to: 3, multiplicity: 4 },
        { from: 0, to: 4, multiplicity: 1 },
        { from: 2, to: 5, multiplicity: 1 },
        { from: 3, to: 5, multiplicity: 1 },
        { from: 6, to: 2, multiplicity: 1 },
      ],
    },
  },
  {
    name: "captured instructions and a back edge",
    graph: {
      nodes: [
        node(0, 0, 2, [
          ["0x1000", "0x0c000001"],
          ["0x1004", "0x03e00008"],
        ]),
        node(1, 2, 5),
      ],
      edges: [
        { from: 0, to: 1, multiplicity: 1 },
        { from: 1, to: 0, multiplicity: 1 },
      ],
    },
  },
];

function candidateFor(graph: GraphWire, rank = 0): CandidateWire {
  return {
    rank,
    callOpcode: "0x0C000000",
    retOpcode: "0x03E00008",
    ocpScore: 0.75,
    callCount: 4,
    potentialEdges: 3,
    validEdges: 3,
    graph,
  };
}

function resultWith(candidates: CandidateWire[]): AnalysisResultWire {
  return {
    params: { instructionLength: 32, retOpcodeLength: 32, callOpcodeLength: 6 },
    diagnostics: {
      instructionCount: 64,
      droppedBytes: 0,
      codeRegion: { fileOffset: 0, fileOffsetEnd: 256 },
      scoreConstants: { validEdgeWeight: 2, normalizationFactor: 3 },
    },
    candidates,
  };
}

function mount(candidates: CandidateWire[]): { root: HTMLElement; state: SessionState } {
  document.body.innerHTML = "";
  const root = document.createElement("div");
  document.body.appendChild(root);
  const state = initialState();
  state.binaryId = "ab".repeat(32);
  state.lastResult = resultWith(candidates);
  renderGraphView(root, { client: new ServiceClient("http://127.0.0.1:9"), state });
  return { root, state };
}

function click(target: Element): void {
  target.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

describe("graph view node and edge counts", () => {
  it.each(FIXTURES)("$name", ({ graph }) => {
    const { root } = mount([candidateFor(graph)]);
    const svg = root.querySelector("svg.callgraph");
    expect(svg).not.toBeNull();
    expect(svg!.querySelectorAll("g.node").length).toBe(graph.nodes.length);
    expect(svg!.querySelectorAll("path.edge").length).toBe(graph.edges.length);
  });
});

describe("node modal", () => {
  beforeEach(() => {
    document.body.innerHTML = "";
  });

  it("opens with the clicked node's address span", () => {
    const graph = FIXTURES[1].graph;
    const { root } = mount([candidateFor(graph)]);
    click(root.querySelector('[data-node="1"]')!);
    const modal = document.querySelector(".modal");
    expect(modal).not.toBeNull();
    const text = modal!.textContent ?? "";
    expect(text).toContain("function 1");
    expect(text).toContain(graph.nodes[1].entryAddress);
    expect(text).toContain("[4, 9)");
  });

  it("lists captured instruction words when present", () => {
    const graph = FIXTURES[4].graph;
    const { root } = mount([candidateFor(graph)]);
    click(root.querySelector('[data-node="0"]')!);
    const items = document.querySelectorAll(".modal ol.instructions li");
    expect(items.length).toBe(graph.nodes[0].instructions!.length);
    expect(items[0].textContent).toContain("0x1000");
  });

  it("falls back to the span note when instructions were not captured", () => {
    const graph = FIXTURES[0].graph;
    const { root } = mount([candidateFor(graph)]);
    click(root.querySelector('[data-node="1"]')!);
    expect(document.querySelector(".modal ol.instructions")).toBeNull();
    expect(document.querySelector(".modal .hint")).not.toBeNull();
    expect(document.querySelector(".modal")!.textContent).toContain("[8, 20)");
  });

  it("closes from the backdrop and replaces an open modal on the next click", () => {
    const graph = FIXTURES[0].graph;
    const { root } = mount([candidateFor(graph)]);
    click(root.querySelector('[data-node="0"]')!);
    expect(document.querySelectorAll(".modal-backdrop").length).toBe(1);
    click(root.querySelector('[data-node="1"]')!);
    expect(document.querySelectorAll(".modal-backdrop").length).toBe(1);
    expect(document.querySelector(".modal")!.textContent).toContain("function 1");
    const backdrop = document.querySelector(".modal-backdrop")!;
    click(backdrop);
    expect(document.querySelector(".modal-backdrop")).toBeNull();
  });
});

describe("candidate selector", () => {
  it("switches the rendered graph when another rank is selected", () => {
    const first = candidateFor(FIXTURES[0].graph, 0);
    const second = candidateFor(FIXTURES[3].graph, 1);
    const { root, state } = mount([first, second]);
    expect(root.querySelectorAll("svg.callgraph g.node").length).toBe(2);

    const rows = root.querySelectorAll("table.pairs tbody tr");
    expect(rows.length).toBe(2);
    click(rows[1]);
    expect(state.selectedRank).toBe(1);
    expect(root.querySelectorAll("svg.callgraph g.node").length).toBe(7);
    expect(root.querySelector("table.pairs tbody tr.selected")).toBe(
      root.querySelectorAll("table.pairs tbody tr")[1],
    );
  });
});
