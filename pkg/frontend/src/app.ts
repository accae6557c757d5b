// Page wiring: account controls, editor, run pipeline, tabs, repository.

import { ApiClient, ApiError } from "./api.js";
import { Editor } from "./editor.js";
import { renderGraph } from "./graphview.js";
import { insertQuestionTemplate } from "./qtemplate.js";
import { RawTab } from "./rawtab.js";
import { RepositoryBrowser } from "./repo.js";
import { Runner } from "./runner.js";
import { buildGraphDocument, statementSpanForLabel } from "./statements.js";
import { renderTimeline } from "./timeline.js";
import { clearErrorBanner, errorBanner, toast } from "./toast.js";
import type { ModelDocument } from "./types.js";

const REPORT_CATEGORIES = ["universal", "acceptable", "retracted", "elaborated", "qualified"] as const;

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found as T;
}

// apiBase stays empty when the page is served by the service itself; a
// different origin can be injected when the two are hosted apart.
export function startApp(apiBase = ""): void {
  const api = new ApiClient(apiBase);
  const editor = new Editor(el("editor-root"));
  const rawTab = new RawTab(el("tab-raw"));
  const runner = new Runner();
  const repo = new RepositoryBrowser(api, el("tab-repo"), {
    onOpenCopy(story) {
      editor.value = story.source;
      editor.storyId = story.id;
      editor.markSaved(story.source);
      toast(`copied "${story.title}" to your workspace`);
      selectTab("editor");
    },
  });

  function selectTab(name: string): void {
    for (const button of document.querySelectorAll<HTMLButtonElement>("[data-tab]")) {
      const active = button.dataset.tab === name;
      button.classList.toggle("active", active);
      el(`tab-${button.dataset.tab}`).hidden = !active;
    }
  }
  for (const button of document.querySelectorAll<HTMLButtonElement>("[data-tab]")) {
    button.addEventListener("click", () => {
      selectTab(button.dataset.tab!);
      if (button.dataset.tab === "repo") repo.refresh().catch((e) => toast(String(e), "error"));
      if (button.dataset.tab === "graph") repaintGraph();
    });
  }

  function repaintGraph(): void {
    renderGraph(buildGraphDocument(editor.value), el("tab-graph"), (label) => {
      const span = statementSpanForLabel(editor.value, label);
      if (span) {
        selectTab("editor");
        editor.select(span);
      }
    });
  }

  // account
  const username = el<HTMLInputElement>("username");
  const password = el<HTMLInputElement>("password");
  async function account(action: "register" | "login"): Promise<void> {
    try {
      await (action === "register"
        ? api.register(username.value, password.value)
        : api.login(username.value, password.value));
      toast(`${action} ok, welcome ${username.value}`);
    } catch (err) {
      toast(err instanceof Error ? err.message : String(err), "error");
    }
  }
  el("register").addEventListener("click", () => void account("register"));
  el("login").addEventListener("click", () => void account("login"));

  // run pipeline
  el("run").addEventListener("click", () => {
    const report = REPORT_CATEGORIES.filter(
      (c) => el<HTMLInputElement>(`report-${c}`).checked,
    );
    clearErrorBanner(el("tab-raw"));
    rawTab.clear();
    selectTab("raw");
    void runner.run(api, editor.value, { report: [...report] }, {
      onRaw(line) {
        rawTab.append(line);
      },
      onModel(doc: ModelDocument) {
        renderTimeline(doc, el("tab-timeline"));
        const last = doc.sessions[doc.sessions.length - 1];
        if (last) {
          for (const category of report) {
            const section = last.report[category];
            rawTab.appendReportSection(
              category,
              category === "qualified"
                ? (section as [string, string][]).map(([w, l]) => `${w}>${l}`)
                : (section as string[]),
            );
          }
        }
      },
      onError(message) {
        errorBanner(el("tab-raw"), message);
      },
      onDone() {
        toast("run finished");
      },
    });
  });

  // question template menu action
  el("insert-question").addEventListener("click", () => {
    const result = insertQuestionTemplate(editor.value);
    editor.insertAtCursor(result.text);
    if (result.warning) toast(result.warning, "warning");
  });

  // local file import/export
  el("import").addEventListener("click", () => el<HTMLInputElement>("import-file").click());
  el<HTMLInputElement>("import-file").addEventListener("change", async (ev) => {
    const file = (ev.target as HTMLInputElement).files?.[0];
    if (!file) return;
    editor.value = await file.text();
    toast(`imported ${file.name}`);
  });
  el("export").addEventListener("click", () => {
    const blob = new Blob([editor.value], { type: "text/plain" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "story.dmn";
    a.click();
    URL.revokeObjectURL(a.href);
  });

  // save and share
  el("save").addEventListener("click", async () => {
    try {
      const title = el<HTMLInputElement>("story-title").value || "untitled";
      if (editor.storyId) {
        const story = await api.updateStory(editor.storyId, { title, source: editor.value });
        editor.markSaved(story.source);
      } else {
        const story = await api.saveStory(title, editor.value);
        editor.storyId = story.id;
        editor.markSaved(story.source);
      }
      toast("saved");
    } catch (err) {
      toast(err instanceof ApiError ? err.message : String(err), "error");
    }
  });
  el("share").addEventListener("click", async () => {
    if (!editor.storyId) {
      toast("save the story first", "warning");
      return;
    }
    try {
      await api.shareStory(editor.storyId);
      toast("story shared to the public repository");
    } catch (err) {
      toast(err instanceof ApiError ? err.message : String(err), "error");
    }
  });

  editor.textarea.addEventListener("input", () => {
    if (!el("tab-graph").hidden) repaintGraph();
  });

  selectTab("editor");
}

if (typeof document !== "undefined" && document.getElementById("editor-root")) {
  startApp();
}
