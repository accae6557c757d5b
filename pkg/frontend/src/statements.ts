// Statement-level scan of the buffer: rule/priority extraction for the
// graph view plus span lookup so a graph click can select the statement in
// the editor. Structural only; anything semantic comes from the service.

import { Token, tokenize } from "./lexer.js";
import type { GraphDocument, GraphEdge, ConceptNode, RuleNode } from "./types.js";

export interface Span {
  start: number;
  end: number;
}

export interface LiteralText {
  negated: boolean;
  atom: string; // canonical term text, e.g. wants(Person,open(door))
}

export interface RuleStatement {
  kind: "rule";
  label: string; // canonical p(N)/c(N)/r(N)
  letter: "p" | "c" | "r";
  connective: "implies" | "causes" | "precludes";
  body: LiteralText[];
  head: LiteralText;
  span: Span;
}

export interface PriorityStatement {
  kind: "priority";
  stronger: string;
  weaker: string;
  span: Span;
}

export interface OtherStatement {
  kind: "other";
  span: Span;
}

export type Statement = RuleStatement | PriorityStatement | OtherStatement;

const COMPACT = /^([pcr])(\p{Nd}+)$/u;
const CONNECTIVES = new Set(["implies", "causes", "precludes"]);

// consume a label at toks[i]: either NAME(INT) or compact rNN; returns the
// canonical label text and the next index, or null
function readLabel(toks: Token[], i: number): { label: string; letter: "p" | "c" | "r"; next: number } | null {
  const t = toks[i];
  if (!t || t.kind !== "name") return null;
  const compact = COMPACT.exec(t.text);
  if (compact) {
    return {
      label: `${compact[1]}(${parseInt(compact[2]!, 10)})`,
      letter: compact[1] as "p" | "c" | "r",
      next: i + 1,
    };
  }
  if (
    (t.text === "p" || t.text === "c" || t.text === "r") &&
    toks[i + 1]?.kind === "(" &&
    toks[i + 2]?.kind === "int" &&
    toks[i + 3]?.kind === ")"
  ) {
    return {
      label: `${t.text}(${parseInt(toks[i + 2]!.text, 10)})`,
      letter: t.text,
      next: i + 4,
    };
  }
  return null;
}

// literal list between :: and the dot; commas split only at paren depth 0
function readLiterals(toks: Token[]): { body: LiteralText[]; head: LiteralText; connective: RuleStatement["connective"] } | null {
  let connective: RuleStatement["connective"] | null = null;
  const groups: Token[][] = [[]];
  let headToks: Token[] = [];
  let depth = 0;
  let inHead = false;
  for (const t of toks) {
    if (t.kind === "(") depth += 1;
    if (t.kind === ")") depth -= 1;
    if (depth === 0 && t.kind === "name" && CONNECTIVES.has(t.text) && !inHead) {
      connective = t.text as RuleStatement["connective"];
      inHead = true;
      continue;
    }
    if (depth === 0 && t.kind === "," && !inHead) {
      groups.push([]);
      continue;
    }
    (inHead ? headToks : groups[groups.length - 1]!).push(t);
  }
  if (!connective || headToks.length === 0) return null;
  const toLiteral = (ts: Token[]): LiteralText | null => {
    if (ts.length === 0) return null;
    let negated = false;
    let rest = ts;
    if (ts[0]!.kind === "-") {
      negated = true;
      rest = ts.slice(1);
    }
    if (rest.length === 0 || rest[0]!.kind !== "name") return null;
    return { negated, atom: rest.map((t) => t.text).join("") };
  };
  const head = toLiteral(headToks);
  if (!head) return null;
  const body: LiteralText[] = [];
  for (const g of groups) {
    if (g.length === 0 && groups.length === 1) continue; // empty body
    const lit = toLiteral(g);
    if (!lit) return null;
    body.push(lit);
  }
  return { body, head, connective };
}

export function parseStatements(buffer: string): Statement[] {
  const toks = tokenize(buffer).filter((t) => t.kind !== "comment");
  const out: Statement[] = [];
  let stmt: Token[] = [];
  for (const t of toks) {
    stmt.push(t);
    if (t.kind !== ".") continue;
    const span: Span = { start: stmt[0]!.start, end: t.end };
    out.push(classify(stmt, span));
    stmt = [];
  }
  if (stmt.length > 0) {
    out.push({ kind: "other", span: { start: stmt[0]!.start, end: stmt[stmt.length - 1]!.end } });
  }
  return out;
}

function classify(stmt: Token[], span: Span): Statement {
  const first = readLabel(stmt, 0);
  if (first) {
    const after = stmt[first.next];
    if (after?.kind === "::") {
      const lits = readLiterals(stmt.slice(first.next + 1, stmt.length - 1));
      if (lits) {
        return { kind: "rule", label: first.label, letter: first.letter, span, ...lits };
      }
    }
    if (after?.kind === ">>") {
      const second = readLabel(stmt, first.next + 1);
      if (second && stmt[second.next]?.kind === ".") {
        return { kind: "priority", stronger: first.label, weaker: second.label, span };
      }
    }
  }
  return { kind: "other", span };
}

export function statementSpanForLabel(buffer: string, label: string): Span | null {
  for (const s of parseStatements(buffer)) {
    if (s.kind === "rule" && s.label === label) return s.span;
  }
  return null;
}

// Mirrors the service's background-knowledge graph document: polarity nodes
// per literal, one box per rule, solid body/head edges (one per occurrence,
// so |body| = sum of body lengths), dashed stronger->weaker priority edges.
export function buildGraphDocument(buffer: string): GraphDocument {
  const nodes = new Map<string, ConceptNode>();
  const rules: RuleNode[] = [];
  const edges: GraphEdge[] = [];
  const literalNode = (lit: LiteralText): string => {
    const id = lit.negated ? `-${lit.atom}` : lit.atom;
    if (!nodes.has(id)) {
      nodes.set(id, { id, concept: lit.atom, polarity: lit.negated ? "-" : "+" });
    }
    return id;
  };
  const statements = parseStatements(buffer);
  for (const s of statements) {
    if (s.kind !== "rule") continue;
    rules.push({ id: s.label, label: s.label, kind: s.letter });
    for (const lit of s.body) {
      edges.push({ from: literalNode(lit), to: s.label, style: "solid", role: "body" });
    }
    edges.push({ from: s.label, to: literalNode(s.head), style: "solid", role: "head" });
  }
  for (const s of statements) {
    if (s.kind !== "priority") continue;
    edges.push({ from: s.stronger, to: s.weaker, style: "dashed", role: "priority" });
  }
  return { concept_nodes: [...nodes.values()], rule_nodes: rules, edges };
}
