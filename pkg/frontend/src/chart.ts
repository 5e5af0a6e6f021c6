/** Minimal line chart for sweep results.
 *
 * X positions are evenly spaced in input order (swept values need not be
 * numeric or uniform); Y is the score axis, fixed to [0, 1].  Errored points
 * break the line rather than plotting a fake zero.
 */

const SVG_NS = "http://www.w3.org/2000/svg";

const WIDTH = 560;
const HEIGHT = 220;
const PAD_LEFT = 44;
const PAD_RIGHT = 16;
const PAD_TOP = 14;
const PAD_BOTTOM = 34;

export interface ChartPoint {
  label: string;
  /** null marks a point the service could not score */
  y: number | null;
}

function el<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

export function renderLineChart(points: ChartPoint[], yLabel = "score"): SVGSVGElement {
  const svg = el("svg", {
    class: "sweep-chart",
    width: String(WIDTH),
    height: String(HEIGHT),
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
  });

  const plotW = WIDTH - PAD_LEFT - PAD_RIGHT;
  const plotH = HEIGHT - PAD_TOP - PAD_BOTTOM;
  const xAt = (i: number) =>
    points.length <= 1 ? PAD_LEFT + plotW / 2 : PAD_LEFT + (i * plotW) / (points.length - 1);
  const yAt = (v: number) => PAD_TOP + (1 - v) * plotH;

  for (const tick of [0, 0.5, 1]) {
    svg.appendChild(
      el("line", {
        class: "axis",
        x1: String(PAD_LEFT),
        y1: String(yAt(tick)),
        x2: String(WIDTH - PAD_RIGHT),
        y2: String(yAt(tick)),
      }),
    );
    const label = el("text", {
      class: "axis",
      x: String(PAD_LEFT - 8),
      y: String(yAt(tick) + 4),
      "text-anchor": "end",
    });
    label.textContent = tick.toFixed(1);
    svg.appendChild(label);
  }

  let d = "";
  let pen = false;
  points.forEach((point, i) => {
    if (point.y === null) {
      pen = false;
      return;
    }
    d += `${pen ? " L" : " M"} ${xAt(i).toFixed(1)} ${yAt(point.y).toFixed(1)}`;
    pen = true;
  });
  if (d !== "") svg.appendChild(el("path", { class: "curve", d: d.trim() }));

  points.forEach((point, i) => {
    const x = xAt(i);
    if (point.y !== null) {
      const dot = el("circle", {
        class: "pt",
        cx: x.toFixed(1),
        cy: yAt(point.y).toFixed(1),
        r: "3.5",
      });
      const tip = el("title");
      tip.textContent = `${point.label}: ${point.y}`;
      dot.appendChild(tip);
      svg.appendChild(dot);
    }
    const label = el("text", {
      class: "axis",
      x: x.toFixed(1),
      y: String(HEIGHT - PAD_BOTTOM + 18),
      "text-anchor": "middle",
    });
    label.textContent = point.label;
    svg.appendChild(label);
  });

  const axisName = el("text", {
    class: "axis",
    x: "12",
    y: String(PAD_TOP + plotH / 2),
    transform: `rotate(-90, 12, ${PAD_TOP + plotH / 2})`,
    "text-anchor": "middle",
  });
  axisName.textContent = yLabel;
  svg.appendChild(axisName);

  return svg;
}
