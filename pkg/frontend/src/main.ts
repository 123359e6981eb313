/** Dashboard entry point: wires the store, the stream, and the panels. */

import { ApiError, GatewayClient } from './api.js';
import { DashboardStore } from './state.js';
import { openEventStream, type StreamHandle } from './stream.js';
import type { SessionConfigInput, TranscriptTurnWire } from './types.js';
import {
  buildStartForm,
  renderOutbox,
  renderPopups,
  renderReport,
  renderSparkline,
  renderStatusBar,
  showFormError,
} from './ui.js';

const client = new GatewayClient('');
const store = new DashboardStore();

const el = (id: string): HTMLElement => {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing #${id}`);
  }
  return node;
};

const statusBar = el('status');
const sparkline = el('sparkline');
const popups = el('popups');
const startPanel = el('start-panel');
const livePanel = el('live-panel');
const closePanel = el('close-panel');
const reportPanel = el('report');
const outboxPanel = el('outbox');
const endButton = el('end-button') as HTMLButtonElement;
const reportButton = el('report-button') as HTMLButtonElement;
const outboxButton = el('outbox-button') as HTMLButtonElement;
const transcriptInput = el('transcript-input') as HTMLTextAreaElement;
const closeError = el('close-error');

let sessionId: string | null = null;
let clientPseudonym: string | null = null;
let stream: StreamHandle | null = null;

function render(): void {
  const view = store.view(Date.now());
  renderStatusBar(statusBar, view);
  renderSparkline(sparkline, view);
  renderPopups(popups, view, ackAlert);
  endButton.disabled = view.closed;
  reportButton.disabled = !view.closed;
}

store.subscribe(render);
setInterval(render, 1000); // keeps the stale badge honest between events

function ackAlert(alertId: string): void {
  if (sessionId === null) {
    return;
  }
  store.markAckPending(alertId);
  client.ackAlert(sessionId, alertId).catch(() => {
    store.clearAckPending(alertId);
  });
}

const formElements = buildStartForm(startPanel, (config: SessionConfigInput) => {
  void startSession(config);
});

async function startSession(config: SessionConfigInput): Promise<void> {
  try {
    await client.createSession(config);
  } catch (err) {
    showFormError(
      formElements,
      err instanceof ApiError ? `${err.code}: ${err.message}` : String(err),
    );
    return;
  }
  sessionId = config.session_id;
  clientPseudonym = config.client_pseudonym;
  startPanel.hidden = true;
  livePanel.hidden = false;
  closePanel.hidden = false;

  stream = openEventStream({
    url: client.streamUrl(sessionId),
    onEvent: (event) => store.apply(event, Date.now()),
  });
}

endButton.addEventListener('click', () => {
  if (sessionId === null || endButton.disabled) {
    return;
  }
  endButton.disabled = true;
  client.endSession(sessionId).catch((err) => {
    closeError.textContent = err instanceof ApiError ? err.message : String(err);
    endButton.disabled = false;
  });
});

function parseTranscript(raw: string): TranscriptTurnWire[] {
  return raw
    .split('\n')
    .map((line) => line.trim())
    .filter((line) => line.length > 0)
    .map((line) => JSON.parse(line) as TranscriptTurnWire);
}

reportButton.addEventListener('click', () => {
  if (sessionId === null) {
    return;
  }
  let transcript: TranscriptTurnWire[];
  try {
    transcript = parseTranscript(transcriptInput.value);
  } catch {
    closeError.textContent = 'transcript must be one JSON turn per line';
    return;
  }
  client
    .buildReport(sessionId, transcript)
    .then(({ report }) => {
      closeError.textContent = '';
      renderReport(reportPanel, report);
    })
    .catch((err) => {
      closeError.textContent = err instanceof ApiError ? err.message : String(err);
    });
});

outboxButton.addEventListener('click', () => {
  if (clientPseudonym === null) {
    return;
  }
  client
    .pollOutbox(clientPseudonym)
    .then(({ messages }) => renderOutbox(outboxPanel, messages))
    .catch((err) => {
      closeError.textContent = err instanceof ApiError ? err.message : String(err);
    });
});

window.addEventListener('beforeunload', () => {
  stream?.stop();
});

render();
