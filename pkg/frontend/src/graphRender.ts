/** SVG rendering for reconstructed call graphs.
 *
 * Nodes are laid out in columns by call depth from the entry node; anything
 * unreachable over forward edges lands in a trailing column so it stays
 * visible.  All geometry is display-only, derived from node indices the
 * service assigned.  Built with createElementNS throughout, no markup
 * strings.
 */

import type { GraphWire } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const NODE_W = 120;
const NODE_H = 44;
const COL_GAP = 190;
const ROW_GAP = 70;
const MARGIN = 30;

export interface RenderHooks {
  onNodeClick?: (nodeIndex: number) => void;
}

interface Pos {
  x: number;
  y: number;
  col: number;
}

let markerSerial = 0;

function el<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

function layout(graph: GraphWire): Pos[] {
  const n = graph.nodes.length;
  const forward: number[][] = Array.from({ length: n }, () => []);
  for (const edge of graph.edges) {
    if (edge.from >= 0 && edge.from < n && edge.to >= 0 && edge.to < n) {
      forward[edge.from].push(edge.to);
    }
  }
  const depth = new Array<number>(n).fill(-1);
  if (n > 0) {
    depth[0] = 0;
    const queue = [0];
    while (queue.length > 0) {
      const at = queue.shift()!;
      for (const next of forward[at]) {
        if (depth[next] === -1) {
          depth[next] = depth[at] + 1;
          queue.push(next);
        }
      }
    }
  }
  const spare = Math.max(0, ...depth) + 1;
  const rows = new Map<number, number>();
  return depth.map((d) => {
    const col = d === -1 ? spare : d;
    const row = rows.get(col) ?? 0;
    rows.set(col, row + 1);
    return { x: MARGIN + col * COL_GAP, y: MARGIN + row * ROW_GAP, col };
  });
}

function edgePath(from: Pos, to: Pos): string {
  if (from === to) {
    // self call, loop out the right side
    const x = from.x + NODE_W;
    return (
      `M ${x} ${from.y + 12} ` +
      `C ${x + 48} ${from.y - 14}, ${x + 48} ${from.y + NODE_H + 14}, ` +
      `${x} ${from.y + NODE_H - 12}`
    );
  }
  let sx: number;
  let sy: number;
  let tx: number;
  let ty: number;
  if (to.col > from.col) {
    sx = from.x + NODE_W;
    sy = from.y + NODE_H / 2;
    tx = to.x;
    ty = to.y + NODE_H / 2;
  } else if (to.col < from.col) {
    sx = from.x;
    sy = from.y + NODE_H / 2;
    tx = to.x + NODE_W;
    ty = to.y + NODE_H / 2;
  } else if (to.y > from.y) {
    sx = from.x + NODE_W / 2;
    sy = from.y + NODE_H;
    tx = to.x + NODE_W / 2;
    ty = to.y;
  } else {
    sx = from.x + NODE_W / 2;
    sy = from.y;
    tx = to.x + NODE_W / 2;
    ty = to.y + NODE_H;
  }
  const mx = (sx + tx) / 2;
  const my = (sy + ty) / 2;
  return `M ${sx} ${sy} Q ${mx} ${my} ${tx} ${ty}`;
}

export function renderCallGraph(graph: GraphWire, hooks: RenderHooks = {}): SVGSVGElement {
  const positions = layout(graph);
  const cols = positions.length > 0 ? Math.max(...positions.map((p) => p.col)) + 1 : 1;
  const rowsPerCol = new Map<number, number>();
  for (const p of positions) rowsPerCol.set(p.col, (rowsPerCol.get(p.col) ?? 0) + 1);
  const maxRows = Math.max(1, ...rowsPerCol.values());
  const width = MARGIN * 2 + (cols - 1) * COL_GAP + NODE_W + 60;
  const height = MARGIN * 2 + (maxRows - 1) * ROW_GAP + NODE_H;

  const svg = el("svg", {
    class: "callgraph",
    width: String(width),
    height: String(height),
    viewBox: `0 0 ${width} ${height}`,
  });

  const markerId = `cg-arrow-${markerSerial++}`;
  const defs = el("defs");
  const marker = el("marker", {
    id: markerId,
    viewBox: "0 0 10 10",
    refX: "9",
    refY: "5",
    markerWidth: "7",
    markerHeight: "7",
    orient: "auto-start-reverse",
  });
  marker.appendChild(el("path", { d: "M 0 0 L 10 5 L 0 10 z" }));
  defs.appendChild(marker);
  svg.appendChild(defs);

  graph.edges.forEach((edge, i) => {
    const from = positions[edge.from];
    const to = positions[edge.to];
    if (from === undefined || to === undefined) return;
    const path = el("path", {
      class: "edge",
      "data-edge": String(i),
      d: edgePath(from, to),
      "marker-end": `url(#${markerId})`,
    });
    svg.appendChild(path);
    if (edge.multiplicity > 1) {
      const isLoop = from === to;
      const lx = isLoop ? from.x + NODE_W + 56 : (from.x + to.x + NODE_W) / 2;
      const ly = isLoop ? from.y + NODE_H / 2 : (from.y + to.y + NODE_H) / 2 - 6;
      const label = el("text", {
        class: "edge-label",
        x: String(lx),
        y: String(ly),
        "text-anchor": "middle",
      });
      label.textContent = `${edge.multiplicity}x`;
      svg.appendChild(label);
    }
  });

  graph.nodes.forEach((node, i) => {
    const pos = positions[i];
    const group = el("g", {
      class: "node",
      "data-node": String(i),
      transform: `translate(${pos.x}, ${pos.y})`,
    });
    group.appendChild(el("rect", { width: String(NODE_W), height: String(NODE_H), rx: "6" }));
    const text = el("text", {
      x: String(NODE_W / 2),
      y: String(NODE_H / 2 + 5),
      "text-anchor": "middle",
    });
    text.textContent = node.label;
    group.appendChild(text);
    const title = el("title");
    title.textContent = `${node.label} @ ${node.entryAddress}`;
    group.appendChild(title);
    group.addEventListener("click", () => hooks.onNodeClick?.(i));
    svg.appendChild(group);
  });

  return svg;
}
