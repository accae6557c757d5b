// HTTP client for the comprehension service. All semantics arrive through
// these calls; the UI itself never reasons about a story.

import { readSseStream, SseFrame } from "./sse.js";
import type {
  CommentView,
  JobOptions,
  JobView,
  ModelDocument,
  StoryView,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  private token: string | null = null;

  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = globalThis.fetch.bind(globalThis),
  ) {}

  get authenticated(): boolean {
    return this.token !== null;
  }

  private headers(json = true): Record<string, string> {
    const h: Record<string, string> = {};
    if (json) h["Content-Type"] = "application/json";
    if (this.token) h["Authorization"] = `Bearer ${this.token}`;
    return h;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(this.base + path, {
      method,
      headers: this.headers(body !== undefined),
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let code = "http-error";
      let message = `${response.status}`;
      try {
        const err = await response.json();
        code = err.error ?? code;
        message = err.message ?? message;
      } catch {
        // non-JSON error body
      }
      throw new ApiError(response.status, code, message);
    }
    return (await response.json()) as T;
  }

  async register(username: string, password: string): Promise<void> {
    const r = await this.request<{ token: string }>("POST", "/api/register", {
      username,
      password,
    });
    this.token = r.token;
  }

  async login(username: string, password: string): Promise<void> {
    const r = await this.request<{ token: string }>("POST", "/api/login", {
      username,
      password,
    });
    this.token = r.token;
  }

  async submitJob(source: string, options: JobOptions = {}): Promise<string> {
    const r = await this.request<{ job_id: string }>("POST", "/api/jobs", {
      source,
      ...options,
    });
    return r.job_id;
  }

  getJob(jobId: string): Promise<JobView> {
    return this.request<JobView>("GET", `/api/jobs/${jobId}`);
  }

  // Async stream of SSE frames; cancel via the signal. afterSeq names the
  // last event id already seen (0 asks for the whole stream, so a job we
  // just submitted can't lose its head to a fast worker); null tails live.
  async *jobEvents(
    jobId: string,
    signal: AbortSignal,
    afterSeq: number | null = 0,
  ): AsyncGenerator<SseFrame> {
    const headers = this.headers(false);
    if (afterSeq !== null) headers["Last-Event-ID"] = String(afterSeq);
    const response = await this.fetchImpl(`${this.base}/api/jobs/${jobId}/events`, {
      method: "GET",
      headers,
      signal,
    });
    if (!response.ok || response.body === null) {
      throw new ApiError(response.status, "stream-failed", "event stream unavailable");
    }
    yield* readSseStream(response.body, signal);
  }

  saveStory(title: string, source: string): Promise<StoryView> {
    return this.request<StoryView>("POST", "/api/stories", { title, source });
  }

  updateStory(id: string, fields: { title?: string; source?: string }): Promise<StoryView> {
    return this.request<StoryView>("PUT", `/api/stories/${id}`, fields);
  }

  getStory(id: string): Promise<StoryView> {
    return this.request<StoryView>("GET", `/api/stories/${id}`);
  }

  listStories(): Promise<StoryView[]> {
    return this.request<StoryView[]>("GET", "/api/stories");
  }

  listPublicStories(): Promise<StoryView[]> {
    return this.request<StoryView[]>("GET", "/api/public-stories");
  }

  shareStory(id: string): Promise<StoryView> {
    return this.request<StoryView>("POST", `/api/stories/${id}/share`);
  }

  copyStory(id: string): Promise<StoryView> {
    return this.request<StoryView>("POST", `/api/stories/${id}/copy`);
  }

  addComment(storyId: string, body: string): Promise<CommentView> {
    return this.request<CommentView>("POST", `/api/stories/${storyId}/comments`, { body });
  }

  listComments(storyId: string): Promise<CommentView[]> {
    return this.request<CommentView[]>("GET", `/api/stories/${storyId}/comments`);
  }
}

export function parseModelDocument(data: string): ModelDocument {
  return JSON.parse(data) as ModelDocument;
}
