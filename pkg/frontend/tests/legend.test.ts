// Legend fidelity: the cell style is a pure function of
// (value, observed, kind), covering every combination.

import { describe, expect, it } from "vitest";

import { cellPresentation } from "../src/legend.js";
import type { ConceptKind, Truth } from "../src/types.js";

const VALUES: Truth[] = ["true", "false", "unknown"];
const KINDS: ConceptKind[] = ["action", "fluent", "constant"];

describe("cellPresentation", () => {
  it("covers all 18 combinations with the legend mapping", () => {
    for (const value of VALUES) {
      for (const observed of [true, false]) {
        for (const kind of KINDS) {
          const look = cellPresentation(value, observed, kind);
          expect(look.valueClass).toBe(
            value === "true" ? "cell-true" : value === "false" ? "cell-false" : "cell-unknown",
          );
          expect(look.kindClass).toBe(
            kind === "action" ? "kind-action" : kind === "fluent" ? "kind-fluent" : "kind-constant",
          );
          expect(look.magnifier).toBe(observed);
        }
      }
    }
  });

  it("is deterministic", () => {
    expect(cellPresentation("true", true, "fluent")).toEqual(
      cellPresentation("true", true, "fluent"),
    );
  });
});
