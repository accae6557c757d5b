// Syntax styling on top of the scanner. Purely lexical with one lookahead
// trick for label groups like p(23); must never throw, whatever the buffer
// holds, because it runs on every keystroke.

import { Token, tokenize } from "./lexer.js";

export type StyleClass =
  | "tok-comment"
  | "tok-operator"
  | "tok-rule-label"
  | "tok-question-label"
  | "tok-session-label"
  | "tok-keyword"
  | "tok-variable"
  | "tok-name"
  | "tok-int"
  | "tok-punct"
  | "tok-plain";

export interface StyledToken {
  token: Token;
  cls: StyleClass;
}

const KEYWORDS = new Set(["implies", "causes", "precludes", "at", "always", "fluents", "session", "all"]);
const LABEL_CLASS: Record<string, StyleClass> = {
  p: "tok-rule-label",
  c: "tok-rule-label",
  r: "tok-rule-label",
  q: "tok-question-label",
  s: "tok-session-label",
};
const COMPACT = /^([pcrqs])\p{Nd}+$/u;

function isStatementEdge(prev: Token | undefined): boolean {
  return prev === undefined || prev.kind === "." || prev.kind === ">>";
}

export function highlight(buffer: string): StyledToken[] {
  const tokens = tokenize(buffer);
  const out: StyledToken[] = [];
  let prevSignificant: Token | undefined;
  for (let i = 0; i < tokens.length; i++) {
    const tok = tokens[i]!;
    if (tok.kind === "comment") {
      out.push({ token: tok, cls: "tok-comment" });
      continue;
    }
    let cls: StyleClass;
    switch (tok.kind) {
      case "::":
      case "??":
      case ">>":
        cls = "tok-operator";
        break;
      case "int":
        cls = "tok-int";
        break;
      case "-":
      case ",":
      case ";":
      case ".":
      case "(":
      case ")":
      case "[":
      case "]":
        cls = "tok-punct";
        break;
      case "error":
        cls = "tok-plain"; // unknown characters stay plain
        break;
      case "name": {
        const group = LABEL_CLASS[tok.text];
        if (
          group &&
          tokens[i + 1]?.kind === "(" &&
          tokens[i + 2]?.kind === "int" &&
          tokens[i + 3]?.kind === ")"
        ) {
          // style the whole label group uniformly: p ( 23 )
          out.push({ token: tok, cls: group });
          out.push({ token: tokens[i + 1]!, cls: group });
          out.push({ token: tokens[i + 2]!, cls: group });
          out.push({ token: tokens[i + 3]!, cls: group });
          prevSignificant = tokens[i + 3];
          i += 3;
          continue;
        }
        const compact = COMPACT.exec(tok.text);
        if (
          compact &&
          (isStatementEdge(prevSignificant) || tokens[i + 1]?.kind === ">>")
        ) {
          cls = LABEL_CLASS[compact[1]!]!;
        } else if (KEYWORDS.has(tok.text)) {
          cls = "tok-keyword";
        } else if (/^\p{Lu}/u.test(tok.text)) {
          cls = "tok-variable";
        } else {
          cls = "tok-name";
        }
        break;
      }
    }
    out.push({ token: tok, cls });
    prevSignificant = tok;
  }
  return out;
}

function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

// Full-buffer HTML for the editor backdrop. Gaps between tokens come from
// the original text, so layout matches the textarea character-for-character.
export function highlightToHtml(buffer: string): string {
  try {
    let html = "";
    let pos = 0;
    for (const { token, cls } of highlight(buffer)) {
      if (token.start > pos) html += escapeHtml(buffer.slice(pos, token.start));
      html += `<span class="${cls}">${escapeHtml(token.text)}</span>`;
      pos = token.end;
    }
    html += escapeHtml(buffer.slice(pos));
    return html;
  } catch {
    return escapeHtml(buffer);
  }
}
