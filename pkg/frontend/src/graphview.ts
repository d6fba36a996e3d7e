/**
 * Force-directed SVG rendering of a signed subgraph.
 *
 * The layout is presentation only (a small spring/repulsion simulation run
 * to a fixed iteration budget); no analytic output depends on node
 * positions. Nodes are colored by partition group, edges by sign, and node
 * radius scales with the served degree-centrality value.
 */

export interface ViewNode {
  id: number;
  label: string;
  group: number;
  /** degree centrality in [0,1] from the report; drives the radius */
  size: number;
}

export interface ViewEdge {
  u: number;
  v: number;
  sign: "positive" | "negative" | "neutral";
}

export const GROUP_COLORS = [
  "#4c78a8", "#e45756", "#72b7b2", "#f58518", "#54a24b",
  "#eeca3b", "#b279a2", "#9d755d",
];

export const SIGN_COLORS: Record<ViewEdge["sign"], string> = {
  positive: "#2e8540",
  negative: "#c62828",
  neutral: "#9e9e9e",
};

const SVG_NS = "http://www.w3.org/2000/svg";

interface Body {
  x: number;
  y: number;
  vx: number;
  vy: number;
}

function layout(nodes: ViewNode[], edges: ViewEdge[], width: number,
                height: number): Map<number, Body> {
  const bodies = new Map<number, Body>();
  const n = nodes.length;
  nodes.forEach((node, i) => {
    // deterministic start: evenly spaced on a circle
    const angle = (2 * Math.PI * i) / Math.max(n, 1);
    bodies.set(node.id, {
      x: width / 2 + (width / 4) * Math.cos(angle),
      y: height / 2 + (height / 4) * Math.sin(angle),
      vx: 0,
      vy: 0,
    });
  });
  const spring = 0.04;
  const springLength = Math.min(width, height) / 4;
  const repulsion = (width * height) / Math.max(n * 8, 8);
  for (let step = 0; step < 300; step++) {
    const damping = 0.85;
    for (const a of nodes) {
      const pa = bodies.get(a.id)!;
      for (const b of nodes) {
        if (a.id >= b.id) continue;
        const pb = bodies.get(b.id)!;
        let dx = pa.x - pb.x;
        let dy = pa.y - pb.y;
        let dist2 = dx * dx + dy * dy;
        if (dist2 < 1) {
          // identical positions: nudge apart deterministically
          dx = 0.5 + (a.id % 7) * 0.1;
          dy = 0.5 + (b.id % 5) * 0.1;
          dist2 = dx * dx + dy * dy;
        }
        const force = repulsion / dist2;
        const dist = Math.sqrt(dist2);
        const fx = (dx / dist) * force;
        const fy = (dy / dist) * force;
        pa.vx += fx;
        pa.vy += fy;
        pb.vx -= fx;
        pb.vy -= fy;
      }
    }
    for (const e of edges) {
      const pu = bodies.get(e.u);
      const pv = bodies.get(e.v);
      if (!pu || !pv) continue;
      const dx = pv.x - pu.x;
      const dy = pv.y - pu.y;
      const dist = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
      const stretch = spring * (dist - springLength);
      pu.vx += (dx / dist) * stretch;
      pu.vy += (dy / dist) * stretch;
      pv.vx -= (dx / dist) * stretch;
      pv.vy -= (dy / dist) * stretch;
    }
    for (const body of bodies.values()) {
      body.vx = (body.vx + 0.005 * (width / 2 - body.x)) * damping;
      body.vy = (body.vy + 0.005 * (height / 2 - body.y)) * damping;
      body.x = Math.min(Math.max(body.x + body.vx, 20), width - 20);
      body.y = Math.min(Math.max(body.y + body.vy, 20), height - 20);
    }
  }
  return bodies;
}

export function renderGraphView(nodes: ViewNode[], edges: ViewEdge[],
                                width = 640, height = 420): SVGSVGElement {
  const positions = layout(nodes, edges, width, height);
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
  svg.classList.add("graph-view");

  for (const e of edges) {
    const pu = positions.get(e.u);
    const pv = positions.get(e.v);
    if (!pu || !pv) continue;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", pu.x.toFixed(1));
    line.setAttribute("y1", pu.y.toFixed(1));
    line.setAttribute("x2", pv.x.toFixed(1));
    line.setAttribute("y2", pv.y.toFixed(1));
    line.setAttribute("stroke", SIGN_COLORS[e.sign]);
    line.setAttribute("stroke-width", e.sign === "neutral" ? "1" : "2");
    if (e.sign === "negative") line.setAttribute("stroke-dasharray", "6 3");
    line.dataset.sign = e.sign;
    line.dataset.edge = `${e.u}-${e.v}`;
    svg.appendChild(line);
  }

  for (const node of nodes) {
    const pos = positions.get(node.id)!;
    const color = GROUP_COLORS[node.group % GROUP_COLORS.length];
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", pos.x.toFixed(1));
    circle.setAttribute("cy", pos.y.toFixed(1));
    circle.setAttribute("r", (8 + 14 * Math.min(Math.max(node.size, 0), 1)).toFixed(1));
    circle.setAttribute("fill", color);
    circle.dataset.node = String(node.id);
    circle.dataset.group = String(node.group);
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${node.label} (group ${node.group})`;
    circle.appendChild(title);
    svg.appendChild(circle);

    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", pos.x.toFixed(1));
    text.setAttribute("y", (pos.y - 12 - 14 * Math.min(node.size, 1)).toFixed(1));
    text.setAttribute("text-anchor", "middle");
    text.classList.add("node-label");
    text.textContent = node.label;
    svg.appendChild(text);
  }
  return svg;
}
