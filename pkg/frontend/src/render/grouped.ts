/** Grouped KPI bars from a cube roll-up: one group per row (org / interval /
 * technology), one bar per metric. Pure payload -> HTML. */

import type { CubePayload } from '../types.js';
import { METRICS } from '../types.js';
import { emptyState, escapeHtml, formatNumber } from './util.js';

export function renderGroupedBars(payload: CubePayload): string {
  if (payload.rows.length === 0) {
    return emptyState('No performance rows to group.');
  }
  const maxima = new Map<string, number>();
  for (const metric of METRICS) {
    const top = Math.max(0, ...payload.rows.map((r) => Number(r[metric] ?? 0)));
    maxima.set(metric, top);
  }
  const groups = payload.rows.map((row) => {
    const key = payload.by.map((d) => String(row[d] ?? '')).join(' / ') || 'total';
    const bars = METRICS.map((metric) => {
      const value = Number(row[metric] ?? 0);
      const top = maxima.get(metric) ?? 0;
      const width = top > 0 ? (value / top) * 100 : 0;
      return (
        `<div class="bar-row" data-metric="${metric}">` +
        `<span class="bar-label">${metric}</span>` +
        `<span class="bar" style="width:${width.toFixed(1)}%"></span>` +
        `<span class="bar-value">${formatNumber(value)}</span>` +
        `</div>`
      );
    }).join('');
    return (
      `<section class="group" data-key="${escapeHtml(key)}">` +
      `<h3>${escapeHtml(key)}</h3>${bars}</section>`
    );
  });
  return `<div class="grouped-bars" data-by="${escapeHtml(payload.by.join(','))}">${groups.join('')}</div>`;
}
