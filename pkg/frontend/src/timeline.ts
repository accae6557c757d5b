// Timeline grid: one table per session (tabbed), concepts down, time across.
// Every value shown comes straight from the ModelDocument.

import { cellPresentation } from "./legend.js";
import type { CellEntry, ModelDocument, SessionDocument } from "./types.js";

function cellElement(cell: CellEntry, kind: Parameters<typeof cellPresentation>[2]): HTMLTableCellElement {
  const td = document.createElement("td");
  const look = cellPresentation(cell.value, cell.observed, kind);
  td.className = `cell ${look.valueClass} ${look.kindClass}`;
  td.textContent = cell.value === "unknown" ? "?" : cell.value === "true" ? "+" : "−";
  if (look.magnifier) {
    const mark = document.createElement("span");
    mark.className = "magnifier";
    mark.textContent = "\u{1F50D}";
    td.appendChild(mark);
  }
  td.title = `${cell.concept} at t=${cell.t}: ${cell.value} (${cell.rule ?? cell.provenance})`;
  return td;
}

function sessionTable(session: SessionDocument): HTMLTableElement {
  const kinds = new Map(session.concepts.map((c) => [c.name, c.kind]));
  const byConcept = new Map<string, Map<number, CellEntry>>();
  for (const cell of session.cells) {
    let row = byConcept.get(cell.concept);
    if (!row) {
      row = new Map();
      byConcept.set(cell.concept, row);
    }
    row.set(cell.t, cell);
  }
  const table = document.createElement("table");
  table.className = "timeline";
  const head = table.createTHead().insertRow();
  head.appendChild(document.createElement("th"));
  for (let t = 0; t <= session.horizon; t++) {
    const th = document.createElement("th");
    th.textContent = `t=${t}`;
    head.appendChild(th);
  }
  const body = table.createTBody();
  for (const concept of session.concepts) {
    const row = body.insertRow();
    const name = document.createElement("th");
    name.textContent = concept.name;
    name.className = "concept-name";
    row.appendChild(name);
    const cells = byConcept.get(concept.name);
    for (let t = 0; t <= session.horizon; t++) {
      const cell = cells?.get(t);
      if (cell) {
        row.appendChild(cellElement(cell, concept.kind));
      } else {
        // absent cells are unknown and unobserved by construction
        row.appendChild(
          cellElement(
            { concept: concept.name, t, value: "unknown", observed: false, provenance: "none" },
            concept.kind,
          ),
        );
      }
    }
  }
  return table;
}

function answersBlock(session: SessionDocument): HTMLElement {
  const div = document.createElement("div");
  div.className = "answers";
  for (const a of session.answers) {
    const p = document.createElement("p");
    const shown =
      a.values.length === 1
        ? a.values[0]
        : a.selected === null
          ? "unknown"
          : String(a.selected);
    p.textContent = `answer q(${a.question}) = ${shown}`;
    div.appendChild(p);
  }
  return div;
}

export function renderTimeline(doc: ModelDocument, root: HTMLElement): void {
  root.textContent = "";
  const tabs = document.createElement("div");
  tabs.className = "session-tabs";
  const panes = document.createElement("div");
  root.appendChild(tabs);
  root.appendChild(panes);
  doc.sessions.forEach((session, index) => {
    const button = document.createElement("button");
    button.textContent = `s(${session.id})`;
    button.className = index === doc.sessions.length - 1 ? "tab active" : "tab";
    const pane = document.createElement("div");
    pane.className = "session-pane";
    pane.hidden = index !== doc.sessions.length - 1; // latest session on top
    pane.appendChild(sessionTable(session));
    pane.appendChild(answersBlock(session));
    button.addEventListener("click", () => {
      for (const b of tabs.querySelectorAll("button")) b.classList.remove("active");
      for (const other of panes.children) (other as HTMLElement).hidden = true;
      button.classList.add("active");
      pane.hidden = false;
    });
    tabs.appendChild(button);
    panes.appendChild(pane);
  });
}
