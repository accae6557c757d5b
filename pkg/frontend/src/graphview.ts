// Background-knowledge graph: literal nodes (green positive, red negative),
// boxed rule junctions, dashed priority edges. Read-only; clicking a rule
// node or any of its edges asks the editor to select that rule's statement.

import type { GraphDocument } from "./types.js";

const SVG = "http://www.w3.org/2000/svg";
const STEP_X = 130;
const CONCEPT_Y = 50;
const RULE_Y = 190;

export type SelectRule = (label: string) => void;

export function renderGraph(doc: GraphDocument, root: HTMLElement, onSelect: SelectRule): void {
  root.textContent = "";
  if (doc.concept_nodes.length === 0 && doc.rule_nodes.length === 0) {
    return; // empty story, empty canvas
  }
  const width = Math.max(doc.concept_nodes.length, doc.rule_nodes.length) * STEP_X + STEP_X;
  const svg = document.createElementNS(SVG, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} 260`);
  svg.setAttribute("class", "bk-graph");

  const pos = new Map<string, { x: number; y: number }>();
  doc.concept_nodes.forEach((node, index) => {
    pos.set(node.id, { x: STEP_X * (index + 1), y: CONCEPT_Y });
  });
  doc.rule_nodes.forEach((node, index) => {
    // duplicate labels share one junction position, matching the drawing
    if (!pos.has(node.id)) pos.set(node.id, { x: STEP_X * (index + 1), y: RULE_Y });
  });

  const ruleForEdge = (from: string, to: string): string | null => {
    if (doc.rule_nodes.some((r) => r.id === from)) return from;
    if (doc.rule_nodes.some((r) => r.id === to)) return to;
    return null;
  };

  for (const edge of doc.edges) {
    const a = pos.get(edge.from);
    const b = pos.get(edge.to);
    if (!a || !b) continue;
    const line = document.createElementNS(SVG, "line");
    line.setAttribute("x1", String(a.x));
    line.setAttribute("y1", String(a.y));
    line.setAttribute("x2", String(b.x));
    line.setAttribute("y2", String(b.y));
    line.setAttribute(
      "class",
      edge.style === "dashed" ? "edge edge-dashed" : `edge edge-solid edge-${edge.role}`,
    );
    if (edge.style === "dashed") line.setAttribute("stroke-dasharray", "6 4");
    const target = edge.role === "priority" ? edge.from : ruleForEdge(edge.from, edge.to);
    if (target) {
      line.addEventListener("click", () => onSelect(target));
    }
    svg.appendChild(line);
  }

  for (const node of doc.concept_nodes) {
    const { x, y } = pos.get(node.id)!;
    const g = document.createElementNS(SVG, "g");
    g.setAttribute("class", node.polarity === "+" ? "node concept positive" : "node concept negative");
    const ellipse = document.createElementNS(SVG, "ellipse");
    ellipse.setAttribute("cx", String(x));
    ellipse.setAttribute("cy", String(y));
    ellipse.setAttribute("rx", "55");
    ellipse.setAttribute("ry", "22");
    const label = document.createElementNS(SVG, "text");
    label.setAttribute("x", String(x));
    label.setAttribute("y", String(y + 4));
    label.setAttribute("text-anchor", "middle");
    label.textContent = node.id;
    g.appendChild(ellipse);
    g.appendChild(label);
    svg.appendChild(g);
  }

  for (const node of doc.rule_nodes) {
    const { x, y } = pos.get(node.id)!;
    const g = document.createElementNS(SVG, "g");
    g.setAttribute("class", "node rule");
    g.addEventListener("click", () => onSelect(node.label));
    const box = document.createElementNS(SVG, "rect");
    box.setAttribute("x", String(x - 35));
    box.setAttribute("y", String(y - 16));
    box.setAttribute("width", "70");
    box.setAttribute("height", "32");
    const label = document.createElementNS(SVG, "text");
    label.setAttribute("x", String(x));
    label.setAttribute("y", String(y + 4));
    label.setAttribute("text-anchor", "middle");
    label.textContent = node.label;
    g.appendChild(box);
    g.appendChild(label);
    svg.appendChild(g);
  }

  root.appendChild(svg);
}
