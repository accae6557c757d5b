// "Insert question template" menu action.

import { tokenize } from "./lexer.js";

export interface TemplateResult {
  text: string; // statement to insert
  warning: string | null; // non-null when the buffer could not be scanned for ids
}

const skeleton = (n: number) => `q(${n}) ?? <predicate> at <t>.`;

// Finds q(N) ids lexically: a q ( INT ) token group. Statements too broken
// to scan fall back to q(0) with a warning instead of blocking the menu.
export function insertQuestionTemplate(buffer: string): TemplateResult {
  if (buffer.trim() === "") {
    return { text: skeleton(0), warning: null };
  }
  let ids: number[];
  try {
    const toks = tokenize(buffer).filter((t) => t.kind !== "comment");
    ids = [];
    for (let i = 0; i < toks.length; i++) {
      const t = toks[i]!;
      if (
        t.kind === "name" &&
        t.text === "q" &&
        toks[i + 1]?.kind === "(" &&
        toks[i + 2]?.kind === "int" &&
        toks[i + 3]?.kind === ")"
      ) {
        ids.push(parseInt(toks[i + 2]!.text, 10));
      }
    }
    if (toks.some((t) => t.kind === "error") && ids.length === 0) {
      return {
        text: skeleton(0),
        warning: "could not read existing question ids; starting from q(0)",
      };
    }
  } catch {
    return {
      text: skeleton(0),
      warning: "could not read existing question ids; starting from q(0)",
    };
  }
  if (ids.length === 0) {
    return { text: skeleton(0), warning: null };
  }
  return { text: skeleton(Math.max(...ids) + 1), warning: null };
}
