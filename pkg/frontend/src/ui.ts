/** DOM rendering. Every function takes its target element, so tests can
 * drive these against a detached document. */

import { consentBlockMessage } from './consent.js';
import type { DashboardView } from './state.js';
import type {
  ConsentFlags,
  FollowupMessageWire,
  Modality,
  SessionConfigInput,
  StructuredReportWire,
} from './types.js';

const SECTION_TITLES: Readonly<Record<string, string>> = {
  session_context: 'Session Context',
  exploration_highlights: 'Exploration Highlights',
  observed_progress: 'Observed Progress',
  followup_suggestions: 'Follow-up Suggestions',
  summary: 'Summary',
};

// The gateway's section_order lists display titles; body text lives under the
// snake_case field names. Accept either form per entry.
const SECTION_FIELDS: Readonly<Record<string, string>> = Object.fromEntries(
  Object.entries(SECTION_TITLES).map(([fieldName, title]) => [title, fieldName]),
);

export function renderStatusBar(el: HTMLElement, view: DashboardView): void {
  el.className = `status-bar status-${view.color}`;
  el.style.backgroundColor = view.color;
  el.dataset['label'] = view.label ?? '';
  el.dataset['color'] = view.color;

  const label = view.label ?? 'waiting for updates';
  const score = view.sP === null ? '' : ` s_p ${view.sP.toFixed(2)}`;
  const age = view.lastUpdateTMs === null ? '' : ` @ ${view.lastUpdateTMs} ms`;
  const stale = view.stale ? ' [stale]' : '';
  el.textContent = `${label} ${view.trendArrow}${score}${age}${stale}`;
}

export function renderSparkline(el: HTMLElement, view: DashboardView): void {
  const points = view.sparkline;
  if (points.length === 0) {
    el.innerHTML = '';
    return;
  }
  const width = 240;
  const height = 40;
  const tMin = points[0]!.t_ms;
  const tMax = points[points.length - 1]!.t_ms;
  const tSpan = Math.max(1, tMax - tMin);
  const values = points.map((p) => p.s_p);
  const vMin = Math.min(...values, -1);
  const vMax = Math.max(...values, 1);
  const vSpan = Math.max(1e-9, vMax - vMin);
  const coords = points
    .map((p) => {
      const x = ((p.t_ms - tMin) / tSpan) * width;
      const y = height - ((p.s_p - vMin) / vSpan) * height;
      return `${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(' ');
  el.innerHTML =
    `<svg viewBox="0 0 ${width} ${height}" class="sparkline">` +
    `<polyline fill="none" stroke="currentColor" points="${coords}"/></svg>`;
}

export function renderPopups(
  container: HTMLElement,
  view: DashboardView,
  onAck: (alertId: string) => void,
): void {
  const wanted = new Set(view.openPopups.map((a) => a.alert_id));

  for (const node of [...container.children]) {
    const id = (node as HTMLElement).dataset['alertId'];
    if (id === undefined || !wanted.has(id)) {
      node.remove();
    }
  }

  for (const alert of view.openPopups) {
    const selector = `[data-alert-id="${alert.alert_id}"]`;
    if (container.querySelector(selector) !== null) {
      continue;
    }
    const popup = container.ownerDocument.createElement('div');
    popup.className = 'alert-popup';
    popup.dataset['alertId'] = alert.alert_id;

    const text = container.ownerDocument.createElement('span');
    text.textContent = `${alert.kind.replaceAll('_', ' ')} at ${alert.t_ms} ms`;
    popup.appendChild(text);

    const button = container.ownerDocument.createElement('button');
    button.className = 'ack-button';
    button.textContent = 'Acknowledge';
    button.addEventListener('click', () => onAck(alert.alert_id));
    popup.appendChild(button);

    container.appendChild(popup);
  }
}

export interface StartFormElements {
  form: HTMLFormElement;
  sessionId: HTMLInputElement;
  counselorId: HTMLInputElement;
  clientPseudonym: HTMLInputElement;
  modality: HTMLSelectElement;
  speechConsent: HTMLInputElement;
  ppgConsent: HTMLInputElement;
  submit: HTMLButtonElement;
  error: HTMLElement;
}

function field(
  doc: Document,
  labelText: string,
  input: HTMLElement,
): HTMLLabelElement {
  const label = doc.createElement('label');
  label.textContent = labelText + ' ';
  label.appendChild(input);
  return label;
}

/** Build the start-session form. Consent-violating combinations disable the
 * submit button and explain why; server-side errors are shown verbatim. */
export function buildStartForm(
  root: HTMLElement,
  onSubmit: (config: SessionConfigInput) => void,
): StartFormElements {
  const doc = root.ownerDocument;
  const form = doc.createElement('form');
  form.className = 'start-form';

  const sessionId = doc.createElement('input');
  sessionId.name = 'session_id';
  sessionId.required = true;

  const counselorId = doc.createElement('input');
  counselorId.name = 'counselor_id';
  counselorId.required = true;

  const clientPseudonym = doc.createElement('input');
  clientPseudonym.name = 'client_pseudonym';
  clientPseudonym.required = true;

  const modality = doc.createElement('select');
  modality.name = 'modality';
  for (const value of ['multimodal', 'speech_only', 'ppg_only']) {
    const option = doc.createElement('option');
    option.value = value;
    option.textContent = value;
    modality.appendChild(option);
  }

  const speechConsent = doc.createElement('input');
  speechConsent.type = 'checkbox';
  speechConsent.name = 'consent_speech';
  speechConsent.checked = true;

  const ppgConsent = doc.createElement('input');
  ppgConsent.type = 'checkbox';
  ppgConsent.name = 'consent_ppg';
  ppgConsent.checked = true;

  const submit = doc.createElement('button');
  submit.type = 'submit';
  submit.textContent = 'Start session';

  const error = doc.createElement('p');
  error.className = 'form-error';

  form.appendChild(field(doc, 'Session id', sessionId));
  form.appendChild(field(doc, 'Counselor id', counselorId));
  form.appendChild(field(doc, 'Client pseudonym', clientPseudonym));
  form.appendChild(field(doc, 'Modality', modality));
  form.appendChild(field(doc, 'Speech consent', speechConsent));
  form.appendChild(field(doc, 'PPG consent', ppgConsent));
  form.appendChild(submit);
  form.appendChild(error);

  const consent = (): ConsentFlags => ({
    speech: speechConsent.checked,
    ppg: ppgConsent.checked,
  });

  const revalidate = (): void => {
    const message = consentBlockMessage(modality.value as Modality, consent());
    submit.disabled = message !== null;
    error.textContent = message ?? '';
  };
  modality.addEventListener('change', revalidate);
  speechConsent.addEventListener('change', revalidate);
  ppgConsent.addEventListener('change', revalidate);
  revalidate();

  form.addEventListener('submit', (e) => {
    e.preventDefault();
    if (submit.disabled) {
      return;
    }
    onSubmit({
      session_id: sessionId.value,
      modality: modality.value as Modality,
      consent: consent(),
      counselor_id: counselorId.value,
      client_pseudonym: clientPseudonym.value,
    });
  });

  root.appendChild(form);
  return {
    form, sessionId, counselorId, clientPseudonym,
    modality, speechConsent, ppgConsent, submit, error,
  };
}

export function showFormError(elements: StartFormElements, message: string): void {
  elements.error.textContent = message;
}

export function renderReport(el: HTMLElement, report: StructuredReportWire): void {
  el.innerHTML = '';
  const doc = el.ownerDocument;

  if (report.provenance['generator'] === 'extractive_fallback') {
    const reason = report.provenance['fallback_reason'];
    const notice = doc.createElement('p');
    notice.className = 'fallback-notice';
    notice.textContent =
      typeof reason === 'string'
        ? `Extractive fallback report (${reason.replaceAll('_', ' ')})`
        : 'Extractive fallback report';
    el.appendChild(notice);
  }

  for (const entry of report.section_order) {
    const fieldName = SECTION_FIELDS[entry] ?? entry;
    const heading = doc.createElement('h2');
    heading.textContent = SECTION_TITLES[entry] ?? entry;
    el.appendChild(heading);
    const body = doc.createElement('pre');
    body.className = 'report-section';
    body.textContent = (report as unknown as Record<string, string>)[fieldName] ?? '';
    el.appendChild(body);
  }

  if (report.emotional_markers.length > 0) {
    const heading = doc.createElement('h3');
    heading.textContent = 'Emotional markers';
    el.appendChild(heading);
    const timeline = doc.createElement('ul');
    timeline.className = 'marker-timeline';
    for (const [tMs, label] of report.emotional_markers) {
      const item = doc.createElement('li');
      item.dataset['tMs'] = String(tMs);
      item.dataset['markerLabel'] = label;
      item.textContent = `[${tMs} ms] ${label}`;
      timeline.appendChild(item);
    }
    el.appendChild(timeline);
  }
}

export function renderOutbox(el: HTMLElement, messages: FollowupMessageWire[]): void {
  el.innerHTML = '';
  const doc = el.ownerDocument;
  if (messages.length === 0) {
    el.textContent = 'No queued follow-up messages.';
    return;
  }
  const list = doc.createElement('ul');
  list.className = 'outbox-list';
  for (const message of messages) {
    const item = doc.createElement('li');
    const trigger = doc.createElement('strong');
    trigger.textContent = `[${message.trigger}] `;
    item.appendChild(trigger);
    const text = doc.createElement('span');
    text.textContent = message.text;
    item.appendChild(text);
    list.appendChild(item);
  }
  el.appendChild(list);
}
