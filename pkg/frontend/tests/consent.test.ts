import { describe, expect, it } from 'vitest';

import {
  MODALITY_REQUIRES,
  consentAllows,
  consentBlockMessage,
  missingConsents,
} from '../src/consent.js';
import type { ConsentFlags, Modality } from '../src/types.js';

const MODALITIES: Modality[] = ['speech_only', 'ppg_only', 'multimodal'];
const COMBOS: ConsentFlags[] = [
  { speech: true, ppg: true },
  { speech: true, ppg: false },
  { speech: false, ppg: true },
  { speech: false, ppg: false },
];

describe('consent matrix', () => {
  it('allows exactly the combinations the matrix permits', () => {
    for (const modality of MODALITIES) {
      for (const consent of COMBOS) {
        const expected = MODALITY_REQUIRES[modality].every((need) => consent[need]);
        expect(consentAllows(modality, consent)).toBe(expected);
      }
    }
  });

  it('permits ppg_only without speech consent', () => {
    expect(consentAllows('ppg_only', { speech: false, ppg: true })).toBe(true);
    expect(consentBlockMessage('ppg_only', { speech: false, ppg: true })).toBeNull();
  });

  it('blocks multimodal when speech consent is missing', () => {
    const consent = { speech: false, ppg: true };
    expect(consentAllows('multimodal', consent)).toBe(false);
    expect(missingConsents('multimodal', consent)).toEqual(['speech']);
    expect(consentBlockMessage('multimodal', consent)).toContain('speech');
  });

  it('names every missing consent', () => {
    const message = consentBlockMessage('multimodal', { speech: false, ppg: false });
    expect(message).toContain('speech');
    expect(message).toContain('ppg');
  });
});
