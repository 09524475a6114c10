/** Spider (radar) chart: one axis per positive seed concept, one polygon
 * per source, values straight from the payload. Pure payload -> SVG. */

import type { SpiderPayload } from '../types.js';
import { emptyState, escapeHtml, formatNumber } from './util.js';

const SIZE = 420;
const CENTER = SIZE / 2;
const RADIUS = SIZE * 0.36;
const RINGS = 4;

function axisAngle(index: number, count: number): number {
  return (Math.PI * 2 * index) / count - Math.PI / 2;
}

function point(angle: number, radius: number): string {
  const x = CENTER + Math.cos(angle) * radius;
  const y = CENTER + Math.sin(angle) * radius;
  return `${x.toFixed(1)},${y.toFixed(1)}`;
}

export function renderSpider(payload: SpiderPayload): string {
  const { axes, series } = payload;
  if (axes.length === 0) {
    return emptyState('No expansion axes: the query matched no concepts with data.');
  }
  const max = Math.max(1, ...series.flatMap((s) => s.values));
  const parts: string[] = [
    `<svg class="spider" viewBox="0 0 ${SIZE} ${SIZE}" role="img">`,
  ];
  for (let ring = 1; ring <= RINGS; ring += 1) {
    const r = (RADIUS * ring) / RINGS;
    const pts = axes.map((_, i) => point(axisAngle(i, axes.length), r)).join(' ');
    parts.push(`<polygon class="grid" points="${pts}" />`);
  }
  axes.forEach((axis, i) => {
    const angle = axisAngle(i, axes.length);
    parts.push(
      `<line class="axis" x1="${CENTER}" y1="${CENTER}" ` +
        `x2="${point(angle, RADIUS).replace(',', '" y2="')}" />`,
      `<text class="axis-label" data-concept="${escapeHtml(axis.concept)}" ` +
        `x="${point(angle, RADIUS + 18).replace(',', '" y="')}">` +
        `${escapeHtml(axis.label)}</text>`,
    );
  });
  for (const s of series) {
    const pts = s.values
      .map((v, i) => point(axisAngle(i, axes.length), (RADIUS * v) / max))
      .join(' ');
    parts.push(
      `<polygon class="series" data-source="${escapeHtml(s.source)}" points="${pts}">` +
        `<title>${escapeHtml(s.source)}: ${s.values.map(formatNumber).join(', ')}</title>` +
        `</polygon>`,
    );
  }
  parts.push('</svg>');
  const legend = series
    .map(
      (s) =>
        `<li data-source="${escapeHtml(s.source)}">${escapeHtml(s.source)}: ` +
        `${s.values.map(formatNumber).join(' / ')}</li>`,
    )
    .join('');
  return `${parts.join('')}<ul class="spider-legend">${legend}</ul>`;
}
