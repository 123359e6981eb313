import { describe, expect, it } from 'vitest';

import { openEventStream, readNdjson } from '../src/stream.js';
import type { SessionEventWire } from '../src/types.js';
import { alertEvent, endEvent, ndjsonResponse, startEvent, updateEvent } from './helpers.js';

function chunkedBody(chunks: string[]): ReadableStream<Uint8Array> {
  const encoder = new TextEncoder();
  return new ReadableStream<Uint8Array>({
    start(controller) {
      for (const chunk of chunks) {
        controller.enqueue(encoder.encode(chunk));
      }
      controller.close();
    },
  });
}

describe('readNdjson', () => {
  it('parses one JSON value per line across arbitrary chunk boundaries', async () => {
    const lines: unknown[] = [];
    await readNdjson(
      chunkedBody(['{"a":1}\n{"b"', ':2}\n', '{"c":3}', '\n']),
      (value) => lines.push(value),
    );
    expect(lines).toEqual([{ a: 1 }, { b: 2 }, { c: 3 }]);
  });

  it('parses a trailing line without a final newline', async () => {
    const lines: unknown[] = [];
    await readNdjson(chunkedBody(['{"a":1}\n{"b":2}']), (value) => lines.push(value));
    expect(lines).toEqual([{ a: 1 }, { b: 2 }]);
  });

  it('skips blank lines', async () => {
    const lines: unknown[] = [];
    await readNdjson(chunkedBody(['\n\n{"a":1}\n\n']), (value) => lines.push(value));
    expect(lines).toEqual([{ a: 1 }]);
  });
});

describe('openEventStream', () => {
  it('delivers every event once and resumes with the Last-Seq header', async () => {
    const firstBatch = [startEvent(), updateEvent(2, 60_000, 'neutral'), alertEvent(3, 180_000)];
    const secondBatch = [
      alertEvent(3, 180_000), // server overlap on resume
      updateEvent(4, 240_000, 'sad'),
      endEvent(5, 300_000),
    ];
    const lastSeqHeaders: string[] = [];
    let calls = 0;
    const fetchImpl = async (_url: string, init?: RequestInit): Promise<Response> => {
      const headers = init?.headers as Record<string, string>;
      lastSeqHeaders.push(headers['Last-Seq'] ?? '');
      calls += 1;
      return ndjsonResponse(calls === 1 ? firstBatch : secondBatch);
    };

    const seen: SessionEventWire[] = [];
    const handle = openEventStream({
      url: '/sessions/s-1/stream',
      onEvent: (event) => seen.push(event),
      retryMs: 1,
      fetchImpl,
    });
    await handle.done;

    expect(lastSeqHeaders).toEqual(['0', '3']);
    expect(seen.map((e) => e.seq)).toEqual([1, 2, 3, 4, 5]);
    expect(handle.lastSeq()).toBe(5);
  });

  it('stops cleanly on session_end', async () => {
    const statuses: string[] = [];
    const handle = openEventStream({
      url: '/x',
      onEvent: () => undefined,
      onStatus: (s) => statuses.push(s),
      retryMs: 1,
      fetchImpl: async () => ndjsonResponse([startEvent(), endEvent(2, 60_000)]),
    });
    await handle.done;
    expect(statuses.at(-1)).toBe('ended');
  });

  it('retries after a failed connection and can be stopped', async () => {
    let attempts = 0;
    const handle = openEventStream({
      url: '/x',
      onEvent: () => undefined,
      retryMs: 1,
      fetchImpl: async () => {
        attempts += 1;
        if (attempts >= 3) {
          handle.stop();
        }
        throw new Error('connection refused');
      },
    });
    await handle.done;
    expect(attempts).toBeGreaterThanOrEqual(3);
  });

  it('starts from a caller-provided resume point', async () => {
    const headers: string[] = [];
    const handle = openEventStream({
      url: '/x',
      lastSeq: 7,
      onEvent: () => undefined,
      retryMs: 1,
      fetchImpl: async (_url, init) => {
        headers.push((init?.headers as Record<string, string>)['Last-Seq'] ?? '');
        return ndjsonResponse([endEvent(8, 300_000)]);
      },
    });
    await handle.done;
    expect(headers).toEqual(['7']);
  });
});
