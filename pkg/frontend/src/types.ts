// JSON shapes produced by the service; the UI renders these verbatim and
// never derives truth values itself.

export type Truth = "true" | "false" | "unknown";
export type ConceptKind = "action" | "fluent" | "constant";

export interface ConceptEntry {
  name: string;
  kind: ConceptKind;
}

export interface CellEntry {
  concept: string;
  t: number;
  value: Truth;
  observed: boolean;
  provenance: string;
  rule?: string;
}

export interface AnswerEntry {
  question: number;
  selected: number | null;
  values: Truth[];
}

export interface ReportSection {
  universal: string[];
  acceptable: string[];
  retracted: string[];
  elaborated: string[];
  qualified: [string, string][];
}

export interface SessionDocument {
  id: number;
  horizon: number;
  concepts: ConceptEntry[];
  cells: CellEntry[];
  answers: AnswerEntry[];
  report: ReportSection;
}

export interface ModelDocument {
  schema_version: number;
  sessions: SessionDocument[];
}

export interface ConceptNode {
  id: string;
  concept: string;
  polarity: "+" | "-";
}

export interface RuleNode {
  id: string;
  label: string;
  kind: "p" | "c" | "r";
}

export interface GraphEdge {
  from: string;
  to: string;
  style: "solid" | "dashed";
  role: "body" | "head" | "priority";
}

export interface GraphDocument {
  concept_nodes: ConceptNode[];
  rule_nodes: RuleNode[];
  edges: GraphEdge[];
}

export interface JobView {
  id: string;
  state: "queued" | "running" | "done" | "failed";
  submitted_at: number;
  started_at?: number;
  finished_at?: number;
  result?: ModelDocument;
  error?: string;
}

export interface StoryView {
  id: string;
  owner: string;
  title: string;
  source: string;
  visibility: "personal" | "public";
  created_at: number;
  updated_at: number;
  comment_count?: number;
}

export interface CommentView {
  id: string;
  story_id: string;
  author: string;
  body: string;
  created_at: number;
}

export interface JobOptions {
  report?: string[];
  session?: number;
  horizon_slack?: number;
  raw_throttle?: number;
}
