/** Single store for one open session view.
 *
 * All UI state is a fold over received events, applied in sequence order;
 * the dashboard computes no emotion labels of its own. Replaying the same
 * log into a fresh store therefore reconstructs exactly the same view,
 * which is what makes stream resume safe: an acknowledged alert comes back
 * as an alert event plus an alert_ack event and never re-opens a popup.
 */

import { colorFor, trendArrow } from './colors.js';
import type {
  AlertWire,
  EmotionUpdateWire,
  SessionEventWire,
} from './types.js';

export interface SparklinePoint {
  t_ms: number;
  s_p: number;
}

export interface DashboardView {
  sessionId: string | null;
  closed: boolean;
  label: string | null;
  color: string;
  trend: string;
  trendArrow: string;
  sP: number | null;
  sparkline: SparklinePoint[];
  lastUpdateTMs: number | null;
  stale: boolean;
  openPopups: AlertWire[];
  unackedCount: number;
}

const DEFAULT_INTERVAL_MS = 60_000;

export class DashboardStore {
  lastSeq = 0;

  private sessionId: string | null = null;
  private intervalMs = DEFAULT_INTERVAL_MS;
  private closed = false;
  private lastUpdate: EmotionUpdateWire | null = null;
  private lastUpdateReceivedAt: number | null = null;
  private sparkline: SparklinePoint[] = [];
  private alerts = new Map<string, AlertWire>();
  private pendingAcks = new Set<string>();
  private listeners = new Set<() => void>();

  subscribe(listener: () => void): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) {
      listener();
    }
  }

  /** Fold one wire event into the view state. receivedAtMs is the local
   * receipt clock, used only for staleness. */
  apply(event: SessionEventWire, receivedAtMs: number): void {
    if (event.seq > this.lastSeq) {
      this.lastSeq = event.seq;
    }
    switch (event.kind) {
      case 'session_start': {
        const config = event.payload['config'] as
          | { session_id?: string; fusion?: { interval_ms?: number } }
          | undefined;
        this.sessionId = config?.session_id ?? this.sessionId;
        this.intervalMs = config?.fusion?.interval_ms ?? DEFAULT_INTERVAL_MS;
        break;
      }
      case 'emotion_update': {
        const update = event.payload as unknown as EmotionUpdateWire;
        this.lastUpdate = update;
        this.lastUpdateReceivedAt = receivedAtMs;
        this.sparkline.push({ t_ms: update.t_ms, s_p: update.s_p });
        break;
      }
      case 'alert': {
        const alert = event.payload as unknown as AlertWire;
        const known = this.alerts.get(alert.alert_id);
        // Keep an acknowledgment we already know about even if the alert
        // event itself is replayed unacknowledged.
        this.alerts.set(alert.alert_id, {
          ...alert,
          acknowledged: alert.acknowledged || known?.acknowledged === true,
        });
        break;
      }
      case 'alert_ack': {
        const alertId = event.payload['alert_id'] as string;
        const known = this.alerts.get(alertId);
        if (known !== undefined) {
          this.alerts.set(alertId, { ...known, acknowledged: true });
        }
        this.pendingAcks.delete(alertId);
        break;
      }
      case 'session_end': {
        this.closed = true;
        break;
      }
      default:
        break;
    }
    this.notify();
  }

  applyAll(events: SessionEventWire[], receivedAtMs: number): void {
    for (const event of events) {
      this.apply(event, receivedAtMs);
    }
  }

  /** Hide a popup while its ack request is in flight. */
  markAckPending(alertId: string): void {
    this.pendingAcks.add(alertId);
    this.notify();
  }

  /** Re-show the popup if the ack request failed. */
  clearAckPending(alertId: string): void {
    this.pendingAcks.delete(alertId);
    this.notify();
  }

  isStale(nowMs: number): boolean {
    if (this.lastUpdateReceivedAt === null) {
      return false;
    }
    return nowMs - this.lastUpdateReceivedAt > 2 * this.intervalMs;
  }

  view(nowMs: number): DashboardView {
    const open = [...this.alerts.values()]
      .filter((a) => !a.acknowledged && !this.pendingAcks.has(a.alert_id))
      .sort((a, b) => a.t_ms - b.t_ms);
    const unacked = [...this.alerts.values()].filter((a) => !a.acknowledged);
    return {
      sessionId: this.sessionId,
      closed: this.closed,
      label: this.lastUpdate?.label ?? null,
      color: this.lastUpdate ? colorFor(this.lastUpdate.label) : 'gray',
      trend: this.lastUpdate?.trend ?? 'flat',
      trendArrow: trendArrow(this.lastUpdate?.trend ?? 'flat'),
      sP: this.lastUpdate?.s_p ?? null,
      sparkline: [...this.sparkline],
      lastUpdateTMs: this.lastUpdate?.t_ms ?? null,
      stale: !this.closed && this.isStale(nowMs),
      openPopups: open,
      unackedCount: unacked.length,
    };
  }
}
