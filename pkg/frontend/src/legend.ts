// Timeline cell styling. This is the one place the legend lives: a cell's
// look is a pure function of (value, observed, kind) and nothing else.

import type { ConceptKind, Truth } from "./types.js";

export interface CellPresentation {
  valueClass: "cell-true" | "cell-false" | "cell-unknown";
  kindClass: "kind-action" | "kind-fluent" | "kind-constant";
  magnifier: boolean;
}

const VALUE_CLASS: Record<Truth, CellPresentation["valueClass"]> = {
  true: "cell-true", // green
  false: "cell-false", // red
  unknown: "cell-unknown", // dark grey
};

const KIND_CLASS: Record<ConceptKind, CellPresentation["kindClass"]> = {
  action: "kind-action", // orange background
  fluent: "kind-fluent", // light blue background
  constant: "kind-constant", // purple background
};

export function cellPresentation(
  value: Truth,
  observed: boolean,
  kind: ConceptKind,
): CellPresentation {
  return {
    valueClass: VALUE_CLASS[value],
    kindClass: KIND_CLASS[kind],
    magnifier: observed,
  };
}
