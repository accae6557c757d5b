// Run loop. One active job stream at a time: starting a run aborts the
// previous stream before anything is submitted.

import { ApiClient } from "./api.js";
import type { JobOptions, ModelDocument } from "./types.js";

export interface RunCallbacks {
  onStatus?(state: string): void;
  onRaw?(line: string): void;
  onModel?(doc: ModelDocument): void;
  onError?(message: string): void;
  onDone?(): void;
}

export class Runner {
  private controller: AbortController | null = null;
  private generation = 0;

  get running(): boolean {
    return this.controller !== null;
  }

  cancel(): void {
    this.controller?.abort();
    this.controller = null;
  }

  async run(
    api: ApiClient,
    source: string,
    options: JobOptions,
    callbacks: RunCallbacks,
  ): Promise<void> {
    this.cancel();
    const generation = ++this.generation;
    const controller = new AbortController();
    this.controller = controller;
    // a frame is live only while its run is still the current one
    const live = () => this.generation === generation && !controller.signal.aborted;
    try {
      const jobId = await api.submitJob(source, options);
      if (!live()) return;
      for await (const frame of api.jobEvents(jobId, controller.signal)) {
        if (!live()) return;
        switch (frame.event) {
          case "status":
            callbacks.onStatus?.(frame.data);
            break;
          case "raw":
            callbacks.onRaw?.(frame.data);
            break;
          case "model":
            callbacks.onModel?.(JSON.parse(frame.data) as ModelDocument);
            break;
          case "error":
            callbacks.onError?.(frame.data);
            break;
          case "done":
            callbacks.onDone?.();
            break;
        }
      }
    } catch (err) {
      if (controller.signal.aborted) return; // cancelled by a newer run
      if (live()) {
        callbacks.onError?.(err instanceof Error ? err.message : String(err));
      }
    } finally {
      if (this.controller === controller) this.controller = null;
    }
  }
}
