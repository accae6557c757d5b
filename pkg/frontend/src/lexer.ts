// Client-side scanner for STAR sources. Token boundaries must agree with
// the service's lexer exactly (tests/fixtures/tokens.json is generated from
// it); comments are additionally kept here because the highlighter needs
// them, the reference lexer just skips them.

export type TokenKind =
  | "name"
  | "int"
  | "::"
  | "??"
  | ">>"
  | "-"
  | ","
  | ";"
  | "."
  | "("
  | ")"
  | "["
  | "]"
  | "error"
  | "comment";

export interface Token {
  kind: TokenKind;
  text: string;
  line: number; // 1-based
  col: number; // 1-based
  start: number; // offset into the buffer
  end: number;
}

const PUNCT: Record<string, TokenKind> = {
  "(": "(",
  ")": ")",
  "[": "[",
  "]": "]",
  ",": ",",
  ";": ";",
  ".": ".",
  "-": "-",
};

// the reference scanner uses str.isalpha()/isalnum(), i.e. full Unicode
// letter and number categories, not ASCII
const NAME_START = /[\p{L}_]/u;
const NAME_CONT = /[\p{L}\p{N}_]/u;
const DIGIT = /\p{Nd}/u;

export function tokenize(text: string): Token[] {
  const tokens: Token[] = [];
  let line = 1;
  let col = 1;
  let i = 0;
  const n = text.length;
  while (i < n) {
    const ch = text[i]!;
    if (ch === "\n") {
      i += 1;
      line += 1;
      col = 1;
      continue;
    }
    if (ch === " " || ch === "\t" || ch === "\r") {
      i += 1;
      col += 1;
      continue;
    }
    const startLine = line;
    const startCol = col;
    if (ch === "%") {
      let j = i;
      while (j < n && text[j] !== "\n") j += 1;
      tokens.push({
        kind: "comment",
        text: text.slice(i, j),
        line: startLine,
        col: startCol,
        start: i,
        end: j,
      });
      col += j - i;
      i = j;
      continue;
    }
    if (NAME_START.test(ch)) {
      let j = i;
      while (j < n && NAME_CONT.test(text[j]!)) j += 1;
      tokens.push({
        kind: "name",
        text: text.slice(i, j),
        line: startLine,
        col: startCol,
        start: i,
        end: j,
      });
      col += j - i;
      i = j;
      continue;
    }
    if (DIGIT.test(ch)) {
      let j = i;
      while (j < n && DIGIT.test(text[j]!)) j += 1;
      tokens.push({
        kind: "int",
        text: text.slice(i, j),
        line: startLine,
        col: startCol,
        start: i,
        end: j,
      });
      col += j - i;
      i = j;
      continue;
    }
    const two = text.slice(i, i + 2);
    if (two === "::" || two === "??" || two === ">>") {
      tokens.push({
        kind: two,
        text: two,
        line: startLine,
        col: startCol,
        start: i,
        end: i + 2,
      });
      i += 2;
      col += 2;
      continue;
    }
    const punct = PUNCT[ch];
    if (punct) {
      tokens.push({
        kind: punct,
        text: ch,
        line: startLine,
        col: startCol,
        start: i,
        end: i + 1,
      });
      i += 1;
      col += 1;
      continue;
    }
    tokens.push({
      kind: "error",
      text: ch,
      line: startLine,
      col: startCol,
      start: i,
      end: i + 1,
    });
    i += 1;
    col += 1;
  }
  return tokens;
}
