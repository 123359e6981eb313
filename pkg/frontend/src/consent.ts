/** Client-side mirror of the server's consent matrix. The form refuses to
 * submit a combination the server would reject, but the server remains the
 * authority: its consent_violation errors are surfaced verbatim. */

import type { ConsentFlags, Modality } from './types.js';

export const MODALITY_REQUIRES: Readonly<Record<Modality, ReadonlyArray<keyof ConsentFlags>>> = {
  speech_only: ['speech'],
  ppg_only: ['ppg'],
  multimodal: ['speech', 'ppg'],
};

export function missingConsents(
  modality: Modality,
  consent: ConsentFlags,
): Array<keyof ConsentFlags> {
  return MODALITY_REQUIRES[modality].filter((need) => !consent[need]);
}

export function consentAllows(modality: Modality, consent: ConsentFlags): boolean {
  return missingConsents(modality, consent).length === 0;
}

export function consentBlockMessage(
  modality: Modality,
  consent: ConsentFlags,
): string | null {
  const missing = missingConsents(modality, consent);
  if (missing.length === 0) {
    return null;
  }
  return `${modality} requires ${missing.join(' and ')} consent`;
}
