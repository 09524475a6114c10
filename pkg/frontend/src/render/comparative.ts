/** Comparative gap view: two side-by-side leader panels, one per
 * technology, with the reference organization's distance to each leader.
 * Pure payload -> HTML. */

import type { ComparativePanel, ComparativePayload } from '../types.js';
import { METRICS } from '../types.js';
import { emptyState, escapeHtml, formatNumber } from './util.js';

function renderPanel(panel: ComparativePanel): string {
  if (panel.leaders.length === 0) {
    return (
      `<section class="panel" data-tech="${escapeHtml(panel.tech)}">` +
      `<h3>${escapeHtml(panel.tech)}</h3>` +
      emptyState('No active organizations in this technology.') +
      `</section>`
    );
  }
  const maxima = new Map<string, number>();
  for (const metric of METRICS) {
    maxima.set(metric, Math.max(0, ...panel.leaders.map((l) => l[metric])));
  }
  const bars = panel.leaders
    .map((leader) => {
      const cells = METRICS.map((metric) => {
        const top = maxima.get(metric) ?? 0;
        const width = top > 0 ? (leader[metric] / top) * 100 : 0;
        return (
          `<div class="bar-row" data-metric="${metric}">` +
          `<span class="bar" style="width:${width.toFixed(1)}%"></span>` +
          `<span class="bar-value">${formatNumber(leader[metric])}</span>` +
          `</div>`
        );
      }).join('');
      return (
        `<li class="leader" data-org="${escapeHtml(leader.org)}">` +
        `<span class="org-name">${escapeHtml(leader.org_name)}</span>${cells}</li>`
      );
    })
    .join('');
  const reference =
    `<p class="reference" data-org="${escapeHtml(panel.reference.org)}">` +
    `distance to leader (${escapeHtml(panel.reference.leader ?? 'none')}): ` +
    `${formatNumber(panel.reference.distance_to_leader)}</p>`;
  const gaps = panel.gap_orgs
    .map((o) => `<li>${escapeHtml(o)}</li>`)
    .join('');
  return (
    `<section class="panel" data-tech="${escapeHtml(panel.tech)}">` +
    `<h3>${escapeHtml(panel.tech)}</h3><ol class="leaders">${bars}</ol>` +
    reference +
    (gaps ? `<ul class="gap-orgs">${gaps}</ul>` : '') +
    `</section>`
  );
}

export function renderComparative(payload: ComparativePayload): string {
  const panels = payload.panels.map(renderPanel).join('');
  return (
    `<div class="comparative" data-org="${escapeHtml(payload.org)}">${panels}</div>`
  );
}
