// The client derives the rule graph from the buffer on its own; the fixture
// is generated from the service's exporter over the shipped stories, so both
// sides must produce the exact same document for the same source.

import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";
import { resolve } from "node:path";

import { buildGraphDocument, parseStatements, statementSpanForLabel } from "../src/statements.js";
import type { GraphDocument } from "../src/types.js";

// vitest runs with the frontend directory as cwd
const fixture: Record<string, GraphDocument> = JSON.parse(
  readFileSync(resolve("tests/fixtures/graphs.json"), "utf-8"),
);

function story(name: string): string {
  return readFileSync(resolve(`../stories/${name}.dmn`), "utf-8");
}

describe("buildGraphDocument", () => {
  for (const name of Object.keys(fixture)) {
    it(`matches the service document for ${name}`, () => {
      expect(buildGraphDocument(story(name))).toEqual(fixture[name]);
    });
  }

  it("keeps one body edge per occurrence, without de-duplication", () => {
    const doc = buildGraphDocument("p(1) :: alpha, alpha implies beta.");
    const body = doc.edges.filter((e) => e.role === "body");
    expect(body).toHaveLength(2);
    expect(body.every((e) => e.from === "alpha" && e.to === "p(1)")).toBe(true);
  });

  it("splits positive and negative polarities into distinct nodes", () => {
    const doc = buildGraphDocument("p(1) :: alpha implies -alpha.");
    expect(doc.concept_nodes).toEqual([
      { id: "alpha", concept: "alpha", polarity: "+" },
      { id: "-alpha", concept: "alpha", polarity: "-" },
    ]);
  });

  it("lists priority edges after all rule edges, stronger first", () => {
    const text = "r1 >> r2.\nr1 :: a implies b.\nr2 :: c implies -b.\n";
    const doc = buildGraphDocument(text);
    const last = doc.edges[doc.edges.length - 1]!;
    expect(last).toEqual({ from: "r(1)", to: "r(2)", style: "dashed", role: "priority" });
    expect(doc.edges.slice(0, -1).every((e) => e.style === "solid")).toBe(true);
  });

  it("produces an empty document for buffers with no rules", () => {
    const doc = buildGraphDocument("s(0) :: alpha at 1.\nq(0) ?? alpha at 2.\n");
    expect(doc).toEqual({ concept_nodes: [], rule_nodes: [], edges: [] });
  });
});

describe("parseStatements", () => {
  it("classifies rules, priorities, and everything else", () => {
    const text = "s(0) :: alpha at 1.\nc2 :: alpha causes beta.\nc(2) >> p(1).\n";
    const kinds = parseStatements(text).map((s) => s.kind);
    expect(kinds).toEqual(["other", "rule", "priority"]);
  });

  it("keeps commas inside terms out of the body split", () => {
    const [stmt] = parseStatements("p(1) :: holds(a,b), other implies goal(c,d).");
    expect(stmt!.kind).toBe("rule");
    if (stmt!.kind !== "rule") return;
    expect(stmt!.body.map((l) => l.atom)).toEqual(["holds(a,b)", "other"]);
    expect(stmt!.head.atom).toBe("goal(c,d)");
  });

  it("treats trailing tokens without a dot as an opaque statement", () => {
    const stmts = parseStatements("p(1) :: alpha implies beta. r2 >> r1");
    expect(stmts.map((s) => s.kind)).toEqual(["rule", "other"]);
  });
});

describe("statementSpanForLabel", () => {
  it("covers the full statement for a compact label", () => {
    const text = story("rule_graph_demo");
    const span = statementSpanForLabel(text, "r(1)");
    expect(span).not.toBeNull();
    const selected = text.slice(span!.start, span!.end);
    expect(selected.startsWith("r01")).toBe(true);
    expect(selected.endsWith(".")).toBe(true);
    expect(selected).toContain("implies");
  });

  it("returns null for labels that are not in the buffer", () => {
    expect(statementSpanForLabel("p(1) :: a implies b.", "c(9)")).toBeNull();
  });
});
