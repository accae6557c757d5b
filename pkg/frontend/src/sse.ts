// Minimal text/event-stream reader over a streaming fetch body. Used
// instead of EventSource so the same code runs in the browser and in node
// tests, and so an AbortController can cancel a run cleanly.

export interface SseFrame {
  id: number | null;
  event: string;
  data: string;
}

// Parses complete frames out of `buffer`, returning the unconsumed tail.
export function feedSse(buffer: string, out: SseFrame[]): string {
  let start = 0;
  for (;;) {
    const split = buffer.indexOf("\n\n", start);
    if (split < 0) break;
    const block = buffer.slice(start, split);
    start = split + 2;
    if (block.trim() === "") continue;
    let id: number | null = null;
    let event = "message";
    const data: string[] = [];
    for (const line of block.split("\n")) {
      if (line.startsWith("id: ")) id = parseInt(line.slice(4), 10);
      else if (line.startsWith("event: ")) event = line.slice(7);
      else if (line.startsWith("data: ")) data.push(line.slice(6));
      else if (line === "data:") data.push("");
    }
    out.push({ id, event, data: data.join("\n") });
  }
  return buffer.slice(start);
}

export async function* readSseStream(
  body: ReadableStream<Uint8Array>,
  signal?: AbortSignal,
): AsyncGenerator<SseFrame> {
  const reader = body.getReader();
  const decoder = new TextDecoder();
  let buffer = "";
  try {
    for (;;) {
      if (signal?.aborted) return;
      const { done, value } = await reader.read();
      if (done) break;
      buffer += decoder.decode(value, { stream: true });
      const frames: SseFrame[] = [];
      buffer = feedSse(buffer, frames);
      for (const frame of frames) yield frame;
    }
  } finally {
    reader.releaseLock();
    try {
      await body.cancel();
    } catch {
      // stream already closed
    }
  }
}
