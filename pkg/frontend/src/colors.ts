/** Status-bar color contract: each emotion label has exactly one color. */

import type { Trend } from './types.js';

export const LABEL_COLORS: Readonly<Record<string, string>> = {
  sad: 'blue',
  neutral: 'green',
  positive: 'yellow',
};

/** Color for a label received on the wire; unknown labels render gray
 * rather than guessing, since the dashboard never invents emotion state. */
export function colorFor(label: string): string {
  return LABEL_COLORS[label] ?? 'gray';
}

const TREND_ARROWS: Readonly<Record<Trend, string>> = {
  up: '↑',
  down: '↓',
  flat: '→',
};

export function trendArrow(trend: string): string {
  return TREND_ARROWS[trend as Trend] ?? TREND_ARROWS.flat;
}
