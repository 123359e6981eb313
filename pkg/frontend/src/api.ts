/** Thin typed client over the documented gateway endpoints. */

import type {
  AlertWire,
  ApiErrorBody,
  FollowupMessageWire,
  SessionConfigInput,
  SessionEventWire,
  SessionSummary,
  StructuredReportWire,
  TranscriptTurnWire,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly detail: string | null = null,
    readonly status = 0,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function asApiError(resp: Response): Promise<ApiError> {
  try {
    const body = (await resp.json()) as ApiErrorBody;
    return new ApiError(
      body.error.code,
      body.error.message,
      body.error.detail ?? null,
      resp.status,
    );
  } catch {
    return new ApiError('unknown', `HTTP ${resp.status}`, null, resp.status);
  }
}

export interface IngestResult {
  events: SessionEventWire[];
  last_seq: number;
}

export class GatewayClient {
  constructor(
    readonly baseUrl = '',
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { 'Content-Type': 'application/json' };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    if (!resp.ok) {
      throw await asApiError(resp);
    }
    return (await resp.json()) as T;
  }

  createSession(config: SessionConfigInput): Promise<{ session: SessionConfigInput; last_seq: number }> {
    return this.request('POST', '/sessions', config);
  }

  endSession(sessionId: string, endTMs?: number): Promise<{ summary: SessionSummary }> {
    const body = endTMs === undefined ? {} : { end_t_ms: endTMs };
    return this.request('POST', `/sessions/${encodeURIComponent(sessionId)}/end`, body);
  }

  getUpdates(sessionId: string, sinceSeq = 0): Promise<{ updates: SessionEventWire[]; last_seq: number }> {
    return this.request(
      'GET',
      `/sessions/${encodeURIComponent(sessionId)}/updates?since_seq=${sinceSeq}`,
    );
  }

  getAlerts(sessionId: string): Promise<{ alerts: AlertWire[] }> {
    return this.request('GET', `/sessions/${encodeURIComponent(sessionId)}/alerts`);
  }

  ackAlert(sessionId: string, alertId: string): Promise<{ alert: AlertWire }> {
    return this.request(
      'POST',
      `/sessions/${encodeURIComponent(sessionId)}/alerts/${encodeURIComponent(alertId)}/ack`,
    );
  }

  buildReport(
    sessionId: string,
    transcript: TranscriptTurnWire[],
    priorSummary?: SessionSummary,
  ): Promise<{ report: StructuredReportWire; markdown: string }> {
    return this.request('POST', `/sessions/${encodeURIComponent(sessionId)}/report`, {
      transcript,
      prior_summary: priorSummary,
    });
  }

  pollOutbox(pseudonym: string): Promise<{ messages: FollowupMessageWire[] }> {
    return this.request('GET', `/clients/${encodeURIComponent(pseudonym)}/outbox`);
  }

  streamUrl(sessionId: string): string {
    return `${this.baseUrl}/sessions/${encodeURIComponent(sessionId)}/stream`;
  }
}
