// Plain-textarea editor with a highlight backdrop. The textarea stays the
// source of truth and always accepts input; the backdrop re-renders after
// the fact, so a highlighter hiccup can never block typing.

import { highlightToHtml } from "./highlight.js";
import type { Span } from "./statements.js";

export class Editor {
  readonly textarea: HTMLTextAreaElement;
  private backdrop: HTMLPreElement;
  private savedSource: string | null = null;
  storyId: string | null = null;

  constructor(readonly root: HTMLElement) {
    this.backdrop = document.createElement("pre");
    this.backdrop.className = "editor-backdrop";
    this.backdrop.setAttribute("aria-hidden", "true");
    this.textarea = document.createElement("textarea");
    this.textarea.className = "editor-input";
    this.textarea.spellcheck = false;
    root.classList.add("editor");
    root.appendChild(this.backdrop);
    root.appendChild(this.textarea);
    this.textarea.addEventListener("input", () => this.repaint());
    this.textarea.addEventListener("scroll", () => {
      this.backdrop.scrollTop = this.textarea.scrollTop;
      this.backdrop.scrollLeft = this.textarea.scrollLeft;
    });
    this.repaint();
  }

  get value(): string {
    return this.textarea.value;
  }

  set value(text: string) {
    this.textarea.value = text;
    this.repaint();
  }

  get dirty(): boolean {
    return this.savedSource !== null && this.savedSource !== this.value;
  }

  markSaved(source: string): void {
    this.savedSource = source;
  }

  private repaint(): void {
    this.backdrop.innerHTML = highlightToHtml(this.textarea.value);
  }

  select(span: Span): void {
    this.textarea.focus();
    this.textarea.setSelectionRange(span.start, span.end);
  }

  insertAtCursor(text: string): void {
    const at = this.textarea.selectionStart ?? this.value.length;
    const before = this.value.slice(0, at);
    const after = this.value.slice(at);
    const lead = before === "" || before.endsWith("\n") ? "" : "\n";
    this.value = before + lead + text + "\n" + after;
    const pos = (before + lead + text).length;
    this.textarea.setSelectionRange(pos, pos);
  }
}
