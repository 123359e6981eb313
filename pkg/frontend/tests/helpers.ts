/** Wire-event builders mirroring what the gateway logs. */

import type { SessionEventWire } from '../src/types.js';

export function startEvent(seq = 1, intervalMs = 60_000): SessionEventWire {
  return {
    seq,
    t_ms: 0,
    kind: 'session_start',
    payload: {
      config: {
        session_id: 's-1',
        modality: 'speech_only',
        consent: { speech: true, ppg: true },
        counselor_id: 'c-1',
        client_pseudonym: 'p-77',
        fusion: {
          lambda_: 0.5,
          theta: 0.3,
          delta1: 1.0,
          alpha_high: 0.7,
          alpha_low: 0.3,
          sad_override_epsilon: 0.0,
          interval_ms: intervalMs,
        },
      },
    },
  };
}

export function updateEvent(
  seq: number,
  tMs: number,
  label: string,
  extra: Partial<{ trend: string; s_p: number; stale: boolean }> = {},
): SessionEventWire {
  const valence = label === 'sad' ? -1 : label === 'positive' ? 1 : 0;
  return {
    seq,
    t_ms: tMs,
    kind: 'emotion_update',
    payload: {
      t_ms: tMs,
      mode: 'speech_only',
      label,
      valence,
      trend: extra.trend ?? 'flat',
      s_p: extra.s_p ?? 0,
      dist: [0.1, 0.8, 0.1],
      stale: extra.stale ?? false,
    },
  };
}

export function alertEvent(
  seq: number,
  tMs: number,
  kind = 'sustained_low_valence',
): SessionEventWire {
  return {
    seq,
    t_ms: tMs,
    kind: 'alert',
    payload: {
      alert_id: `${kind}:${tMs}`,
      t_ms: tMs,
      kind,
      evidence_t_ms: [tMs - 120_000, tMs - 60_000, tMs],
      acknowledged: false,
    },
  };
}

export function ackEvent(seq: number, tMs: number, alertId: string): SessionEventWire {
  return {
    seq,
    t_ms: tMs,
    kind: 'alert_ack',
    payload: { alert_id: alertId, t_ms: tMs },
  };
}

export function endEvent(seq: number, tMs: number): SessionEventWire {
  return { seq, t_ms: tMs, kind: 'session_end', payload: {} };
}

export function ndjsonResponse(events: SessionEventWire[]): Response {
  const body = events.map((e) => JSON.stringify(e) + '\n').join('');
  return new Response(body, {
    status: 200,
    headers: { 'Content-Type': 'application/x-ndjson' },
  });
}
