/** Innovation timeline: one row per landscape technology, one mark per
 * dated event (patent grants, awards). Pure payload -> SVG. */

import type { TimelinePayload } from '../types.js';
import { emptyState, escapeHtml } from './util.js';

const ROW_HEIGHT = 28;
const LABEL_WIDTH = 240;
const PLOT_WIDTH = 640;

function dayNumber(isoDate: string): number {
  return Date.parse(isoDate) / 86_400_000;
}

export function renderTimeline(payload: TimelinePayload): string {
  const rows = payload.rows;
  const allDates = rows.flatMap((r) => r.events.map((e) => dayNumber(e.date)));
  if (allDates.length === 0) {
    return emptyState('No dated events in this landscape.');
  }
  const min = Math.min(...allDates);
  const max = Math.max(...allDates);
  const span = Math.max(1, max - min);
  const height = rows.length * ROW_HEIGHT + 20;
  const parts: string[] = [
    `<svg class="timeline" viewBox="0 0 ${LABEL_WIDTH + PLOT_WIDTH} ${height}" role="img">`,
  ];
  rows.forEach((row, r) => {
    const y = r * ROW_HEIGHT + ROW_HEIGHT / 2 + 10;
    parts.push(
      `<text class="row-label" data-tech="${escapeHtml(row.tech)}" x="4" y="${y + 4}">` +
        `${escapeHtml(row.label)}</text>`,
      `<line class="row-axis" x1="${LABEL_WIDTH}" y1="${y}" ` +
        `x2="${LABEL_WIDTH + PLOT_WIDTH}" y2="${y}" />`,
    );
    for (const event of row.events) {
      const x = LABEL_WIDTH + ((dayNumber(event.date) - min) / span) * (PLOT_WIDTH - 16) + 8;
      parts.push(
        `<circle class="event event-${escapeHtml(event.kind)}" data-ref="${escapeHtml(event.ref)}" ` +
          `cx="${x.toFixed(1)}" cy="${y}" r="5">` +
          `<title>${escapeHtml(event.date)} ${escapeHtml(event.kind)} ` +
          `${escapeHtml(event.ref)} (${event.orgs.map(escapeHtml).join(', ')})</title>` +
          `</circle>`,
      );
    }
  });
  parts.push('</svg>');
  return parts.join('');
}
