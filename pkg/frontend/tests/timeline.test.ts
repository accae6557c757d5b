// Renders a handcrafted document that walks every value/observed/kind
// combination, then checks the painted classes cell by cell.

import { describe, expect, it } from "vitest";

import { renderTimeline } from "../src/timeline.js";
import type { CellEntry, ModelDocument, Truth } from "../src/types.js";

const VALUES: Truth[] = ["true", "false", "unknown"];
const KINDS = ["action", "fluent", "constant"] as const;

function comboDocument(): ModelDocument {
  // one concept per kind, horizon 5: t 0..2 unobserved, t 3..5 observed
  const cells: CellEntry[] = [];
  for (const kind of KINDS) {
    VALUES.forEach((value, i) => {
      cells.push({ concept: `c_${kind}`, t: i, value, observed: false, provenance: "default" });
      cells.push({ concept: `c_${kind}`, t: i + 3, value, observed: true, provenance: "observation" });
    });
  }
  return {
    schema_version: 1,
    sessions: [
      {
        id: 0,
        horizon: 5,
        concepts: KINDS.map((kind) => ({ name: `c_${kind}`, kind })),
        cells,
        answers: [
          { question: 0, selected: null, values: ["true"] },
          { question: 1, selected: 1, values: ["false", "true"] },
          { question: 2, selected: null, values: ["unknown", "false"] },
        ],
        report: { universal: [], acceptable: [], retracted: [], elaborated: [], qualified: [] },
      },
    ],
  };
}

function cellAt(root: HTMLElement, row: number, t: number): HTMLTableCellElement {
  const tr = root.querySelectorAll("table.timeline tbody tr")[row]!;
  return tr.querySelectorAll("td")[t] as HTMLTableCellElement;
}

describe("renderTimeline", () => {
  it("paints every value, kind, and observation combination", () => {
    const root = document.createElement("div");
    renderTimeline(comboDocument(), root);
    KINDS.forEach((kind, row) => {
      VALUES.forEach((value, i) => {
        for (const [t, observed] of [
          [i, false],
          [i + 3, true],
        ] as const) {
          const td = cellAt(root, row, t);
          expect(td.classList.contains(`cell-${value}`)).toBe(true);
          expect(td.classList.contains(`kind-${kind}`)).toBe(true);
          expect(td.querySelector(".magnifier") !== null).toBe(observed);
        }
      });
    });
  });

  it("shows +, −, and ? glyphs for the three truth values", () => {
    const root = document.createElement("div");
    renderTimeline(comboDocument(), root);
    const texts = [0, 1, 2].map((t) => cellAt(root, 0, t).childNodes[0]!.textContent);
    expect(texts).toEqual(["+", "−", "?"]);
  });

  it("fills absent cells as unknown and unobserved", () => {
    const doc = comboDocument();
    doc.sessions[0]!.cells = doc.sessions[0]!.cells.filter((c) => c.t !== 4);
    const root = document.createElement("div");
    renderTimeline(doc, root);
    const td = cellAt(root, 0, 4);
    expect(td.className).toContain("cell-unknown");
    expect(td.querySelector(".magnifier")).toBeNull();
  });

  it("renders one column per step up to the horizon", () => {
    const root = document.createElement("div");
    renderTimeline(comboDocument(), root);
    const headers = [...root.querySelectorAll("table.timeline thead th")].map((th) => th.textContent);
    expect(headers).toEqual(["", "t=0", "t=1", "t=2", "t=3", "t=4", "t=5"]);
  });

  it("spells out answers, including the unknown ones", () => {
    const root = document.createElement("div");
    renderTimeline(comboDocument(), root);
    const lines = [...root.querySelectorAll(".answers p")].map((p) => p.textContent);
    expect(lines).toEqual([
      "answer q(0) = true",
      "answer q(1) = 1",
      "answer q(2) = unknown",
    ]);
  });

  it("tabs sessions with the latest one active", () => {
    const doc = comboDocument();
    const second = structuredClone(doc.sessions[0]!);
    second.id = 1;
    doc.sessions.push(second);
    const root = document.createElement("div");
    renderTimeline(doc, root);
    const tabs = [...root.querySelectorAll(".session-tabs button")];
    expect(tabs.map((b) => b.textContent)).toEqual(["s(0)", "s(1)"]);
    expect(tabs[1]!.classList.contains("active")).toBe(true);
    const panes = [...root.querySelectorAll(".session-pane")] as HTMLElement[];
    expect(panes.map((p) => p.hidden)).toEqual([true, false]);
    // clicking an older tab brings its pane forward
    (tabs[0] as HTMLButtonElement).click();
    expect(panes.map((p) => p.hidden)).toEqual([false, true]);
    expect(tabs[0]!.classList.contains("active")).toBe(true);
    expect(tabs[1]!.classList.contains("active")).toBe(false);
  });
});
