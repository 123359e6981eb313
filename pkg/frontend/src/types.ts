/** Wire types exchanged with the gateway. The dashboard is a pure consumer:
 * every shape here mirrors what the server emits, nothing is derived. */

export type EmotionLabel = 'sad' | 'neutral' | 'positive';
export type Trend = 'up' | 'down' | 'flat';
export type Modality = 'speech_only' | 'ppg_only' | 'multimodal';
export type Quality = 'high' | 'low';

export type EventKind =
  | 'session_start'
  | 'ppg_features'
  | 'speech_emotion'
  | 'emotion_update'
  | 'alert'
  | 'alert_ack'
  | 'session_end';

export interface SessionEventWire {
  seq: number;
  t_ms: number;
  kind: EventKind;
  payload: Record<string, unknown>;
}

export interface EmotionUpdateWire {
  t_ms: number;
  mode: string;
  label: string;
  valence: number;
  trend: Trend;
  s_p: number;
  dist: [number, number, number] | null;
  stale: boolean;
}

export interface AlertWire {
  alert_id: string;
  t_ms: number;
  kind: string;
  evidence_t_ms: number[];
  acknowledged: boolean;
}

export interface ConsentFlags {
  speech: boolean;
  ppg: boolean;
}

export interface SessionConfigInput {
  session_id: string;
  modality: Modality;
  consent: ConsentFlags;
  counselor_id: string;
  client_pseudonym: string;
  start_t_ms?: number;
}

export interface SessionSummary {
  session_id: string;
  counselor_id: string;
  client_pseudonym: string;
  modality: Modality;
  start_t_ms: number;
  end_t_ms: number;
  duration_ms: number;
  n_updates: number;
  label_counts: Record<string, number>;
  alert_counts: Record<string, number>;
  final_s_p: number;
}

export interface StructuredReportWire {
  session_context: string;
  exploration_highlights: string;
  observed_progress: string;
  followup_suggestions: string;
  summary: string;
  /** Display titles in render order, e.g. "Session Context". */
  section_order: string[];
  provenance: Record<string, unknown>;
  emotional_markers: Array<[number, string]>;
}

export interface TranscriptTurnWire {
  t_ms: number;
  role: 'counselor' | 'client';
  text: string;
}

export interface FollowupMessageWire {
  message_id: string;
  client_pseudonym: string;
  text: string;
  created_at_ms: number;
  trigger: string;
  delivery_status: string;
  tts_request: { voice: string; text: string };
  provenance: Record<string, unknown>;
}

export interface ApiErrorBody {
  error: { code: string; message: string; detail?: string | null };
}
