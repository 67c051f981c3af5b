/** SVG rendering of a context network.
 *
 * The server owns the layout; this side only applies a uniform scale into
 * the viewport (aspect preserved, so the geometry is untouched) and nudges
 * exactly-coincident nodes apart far enough to stay clickable.
 */

import { nodeColor } from "./colors.js";
import type { NetworkNode, NetworkPayload } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface Viewport {
  width: number;
  height: number;
  margin: number;
}

export const DEFAULT_VIEWPORT: Viewport = { width: 800, height: 560, margin: 60 };

const NODE_RADIUS = 7;
const JITTER = 9; // px between stacked nodes after scaling

export interface ScaledNode {
  node: NetworkNode;
  index: number;
  px: number;
  py: number;
}

/** Map layout coordinates into pixels with one shared scale factor. */
export function scaleToViewport(nodes: NetworkNode[], vp: Viewport): ScaledNode[] {
  if (nodes.length === 0) return [];
  const xs = nodes.map((n) => n.x);
  const ys = nodes.map((n) => n.y);
  const cx = (Math.min(...xs) + Math.max(...xs)) / 2;
  const cy = (Math.min(...ys) + Math.max(...ys)) / 2;
  const spanX = Math.max(...xs) - Math.min(...xs);
  const spanY = Math.max(...ys) - Math.min(...ys);
  const span = Math.max(spanX, spanY);
  const usableW = vp.width - 2 * vp.margin;
  const usableH = vp.height - 2 * vp.margin;
  const scale = span > 0 ? Math.min(usableW, usableH) / span : 1;

  const scaled = nodes.map((node, index) => ({
    node,
    index,
    px: vp.width / 2 + (node.x - cx) * scale,
    py: vp.height / 2 + (node.y - cy) * scale,
  }));
  return jitterOverlaps(scaled);
}

/** Deterministically fan out nodes that landed on the same pixel. */
export function jitterOverlaps(scaled: ScaledNode[]): ScaledNode[] {
  const seen = new Map<string, number>();
  for (const s of scaled) {
    const key = `${s.px.toFixed(1)}:${s.py.toFixed(1)}`;
    const count = seen.get(key) ?? 0;
    seen.set(key, count + 1);
    if (count > 0) {
      const angle = (count * Math.PI * 2) / 7;
      s.px += JITTER * count * Math.cos(angle);
      s.py += JITTER * count * Math.sin(angle);
    }
  }
  return scaled;
}

export interface RenderHandlers {
  onNodeClick?: (node: NetworkNode) => void;
}

/** Build the SVG scene for a payload. Pure DOM construction, no fetches. */
export function renderNetwork(
  doc: Document,
  payload: NetworkPayload,
  handlers: RenderHandlers = {},
  vp: Viewport = DEFAULT_VIEWPORT,
): SVGSVGElement {
  const svg = doc.createElementNS(SVG_NS, "svg") as SVGSVGElement;
  svg.setAttribute("viewBox", `0 0 ${vp.width} ${vp.height}`);
  svg.setAttribute("class", "network");
  svg.setAttribute("role", "img");

  const scaled = scaleToViewport(payload.nodes, vp);

  const edgeGroup = doc.createElementNS(SVG_NS, "g");
  edgeGroup.setAttribute("class", "edges");
  for (const edge of payload.edges) {
    const a = scaled[edge.source];
    const b = scaled[edge.target];
    if (!a || !b) continue;
    const line = doc.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", a.px.toFixed(1));
    line.setAttribute("y1", a.py.toFixed(1));
    line.setAttribute("x2", b.px.toFixed(1));
    line.setAttribute("y2", b.py.toFixed(1));
    line.setAttribute("stroke", "#b9b9b9");
    line.setAttribute("stroke-width", edgeWidth(edge.weight).toFixed(2));
    edgeGroup.appendChild(line);
  }
  svg.appendChild(edgeGroup);

  const nodeGroup = doc.createElementNS(SVG_NS, "g");
  nodeGroup.setAttribute("class", "nodes");
  for (const s of scaled) {
    nodeGroup.appendChild(renderNode(doc, s, handlers));
  }
  svg.appendChild(nodeGroup);
  return svg;
}

function edgeWidth(weight: number): number {
  const w = Math.max(0, Math.min(1, weight));
  return 0.6 + 3.0 * w;
}

function renderNode(doc: Document, s: ScaledNode, handlers: RenderHandlers): SVGGElement {
  const g = doc.createElementNS(SVG_NS, "g") as SVGGElement;
  g.setAttribute("class", s.node.is_query ? "node query" : `node ${s.node.kind}`);
  g.setAttribute("data-id", s.node.id);
  g.setAttribute("data-kind", s.node.kind);
  g.setAttribute("tabindex", "0");

  const circle = doc.createElementNS(SVG_NS, "circle");
  circle.setAttribute("cx", s.px.toFixed(1));
  circle.setAttribute("cy", s.py.toFixed(1));
  circle.setAttribute("r", String(NODE_RADIUS + (s.node.is_query ? 2 : 0)));
  circle.setAttribute("fill", nodeColor(s.node.kind, s.node.is_query));
  circle.setAttribute("stroke", "#444");
  circle.setAttribute("stroke-width", "1");

  const title = doc.createElementNS(SVG_NS, "title");
  title.textContent =
    `${s.node.kind}: ${s.node.label}\n` +
    `similarity ${s.node.similarity.toFixed(3)}, specificity ${s.node.specificity.toFixed(2)}`;
  circle.appendChild(title);
  g.appendChild(circle);

  const text = doc.createElementNS(SVG_NS, "text");
  text.setAttribute("x", (s.px + NODE_RADIUS + 3).toFixed(1));
  text.setAttribute("y", (s.py + 4).toFixed(1));
  text.setAttribute("class", "label");
  text.textContent = s.node.label;
  g.appendChild(text);

  if (handlers.onNodeClick) {
    const fire = () => handlers.onNodeClick!(s.node);
    g.addEventListener("click", fire);
    g.addEventListener("keydown", (ev: Event) => {
      if ((ev as KeyboardEvent).key === "Enter") fire();
    });
  }
  return g;
}
