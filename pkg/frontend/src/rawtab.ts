// Raw output tab. Lines only ever get appended while a run is in flight;
// clear() is called by the next run before its first line, never during.

export class RawTab {
  private pre: HTMLPreElement;
  private reportBox: HTMLDivElement;

  constructor(readonly root: HTMLElement) {
    this.pre = document.createElement("pre");
    this.pre.className = "raw-lines";
    this.reportBox = document.createElement("div");
    this.reportBox.className = "raw-reports";
    root.appendChild(this.pre);
    root.appendChild(this.reportBox);
  }

  clear(): void {
    this.pre.textContent = "";
    this.reportBox.textContent = "";
  }

  append(line: string): void {
    this.pre.appendChild(document.createTextNode(line + "\n"));
    this.pre.scrollTop = this.pre.scrollHeight;
  }

  get text(): string {
    return this.pre.textContent ?? "";
  }

  // report categories render as collapsible sections below the stream
  appendReportSection(title: string, ids: string[]): void {
    const details = document.createElement("details");
    details.className = "report-section";
    const summary = document.createElement("summary");
    summary.textContent = `${title} (${ids.length})`;
    details.appendChild(summary);
    const body = document.createElement("pre");
    body.textContent = ids.join("\n");
    details.appendChild(body);
    this.reportBox.appendChild(details);
  }
}
