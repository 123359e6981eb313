/** Newline-delimited JSON event stream with Last-Seq resume.
 *
 * The gateway's sequence numbers are contiguous from 1, so reconnecting
 * with the last seen seq in the Last-Seq header is lossless: the server
 * replays everything after it and nothing before.
 */

import type { FetchLike } from './api.js';
import type { SessionEventWire } from './types.js';

export type StreamStatus = 'connecting' | 'live' | 'retrying' | 'stopped' | 'ended';

export interface StreamOptions {
  url: string;
  onEvent: (event: SessionEventWire) => void;
  onStatus?: (status: StreamStatus) => void;
  lastSeq?: number;
  retryMs?: number;
  fetchImpl?: FetchLike;
}

export interface StreamHandle {
  stop(): void;
  done: Promise<void>;
  lastSeq(): number;
}

/** Split an incoming byte stream into parsed JSON lines. Carries partial
 * lines across chunk boundaries; a trailing unterminated line is parsed
 * when the stream closes. */
export async function readNdjson(
  body: ReadableStream<Uint8Array>,
  onLine: (value: unknown) => void,
): Promise<void> {
  const reader = body.getReader();
  const decoder = new TextDecoder();
  let buffer = '';
  for (;;) {
    const { done, value } = await reader.read();
    if (done) {
      break;
    }
    buffer += decoder.decode(value, { stream: true });
    let newline = buffer.indexOf('\n');
    while (newline >= 0) {
      const line = buffer.slice(0, newline).trim();
      buffer = buffer.slice(newline + 1);
      if (line.length > 0) {
        onLine(JSON.parse(line));
      }
      newline = buffer.indexOf('\n');
    }
  }
  const tail = (buffer + decoder.decode()).trim();
  if (tail.length > 0) {
    onLine(JSON.parse(tail));
  }
}

export function openEventStream(options: StreamOptions): StreamHandle {
  const fetchImpl: FetchLike = options.fetchImpl ?? ((url, init) => fetch(url, init));
  const retryMs = options.retryMs ?? 1000;
  let lastSeq = options.lastSeq ?? 0;
  let stopped = false;
  let sawSessionEnd = false;

  const setStatus = (status: StreamStatus) => options.onStatus?.(status);

  const done = (async () => {
    while (!stopped && !sawSessionEnd) {
      setStatus('connecting');
      try {
        const resp = await fetchImpl(options.url, {
          headers: { 'Last-Seq': String(lastSeq) },
        });
        if (!resp.ok || resp.body === null) {
          throw new Error(`stream HTTP ${resp.status}`);
        }
        setStatus('live');
        await readNdjson(resp.body, (value) => {
          const event = value as SessionEventWire;
          if (event.seq > lastSeq) {
            lastSeq = event.seq;
            options.onEvent(event);
          }
          if (event.kind === 'session_end') {
            sawSessionEnd = true;
          }
        });
        if (sawSessionEnd) {
          break;
        }
      } catch {
        // fall through to the retry delay below
      }
      if (stopped || sawSessionEnd) {
        break;
      }
      setStatus('retrying');
      await new Promise((resolve) => setTimeout(resolve, retryMs));
    }
    setStatus(sawSessionEnd ? 'ended' : 'stopped');
  })();

  return {
    stop() {
      stopped = true;
    },
    done,
    lastSeq: () => lastSeq,
  };
}
