/** Gap view: ranked competitor list with quasi-clique drill-down and the
 * full rule trace behind every decision. Pure payload -> HTML. */

import type { GapEntry, GapReport, GapTraceStep } from '../types.js';
import { emptyState, escapeHtml, formatNumber } from './util.js';

function renderTrace(trace: GapTraceStep[]): string {
  if (trace.length === 0) return '';
  const steps = trace
    .map((step) => {
      const status = step.passed === undefined ? '' : step.passed ? 'pass' : 'fail';
      const note =
        step.note ??
        (step.rule === 'kpi_distance'
          ? `distance ${formatNumber(step.value ?? 0)} vs theta ${formatNumber(step.theta ?? 0)}`
          : '');
      return `<li class="${status}" data-rule="${escapeHtml(step.rule)}">${escapeHtml(note)}</li>`;
    })
    .join('');
  return `<ol class="trace">${steps}</ol>`;
}

function renderEntry(entry: GapEntry, rank: number): string {
  const kpis = Object.entries(entry.kpis)
    .map(
      ([metric, value]) =>
        `<span class="kpi" data-metric="${escapeHtml(metric)}">` +
        `${escapeHtml(metric)}: ${formatNumber(value)}</span>`,
    )
    .join('');
  const cliques = entry.cliques
    .map((clique, i) => {
      const techs = clique.technologies
        .map((t) => `<li class="tech">${escapeHtml(t)}</li>`)
        .join('');
      const orgs = clique.organizations
        .map((o) => `<li class="org">${escapeHtml(o)}</li>`)
        .join('');
      const newest = clique.newest_activity
        ? `<span class="newest">latest activity ${escapeHtml(clique.newest_activity)}</span>`
        : '';
      return (
        `<details class="clique" data-index="${i}">` +
        `<summary>clique of ${clique.nodes.length} (gamma ${clique.gamma}) ${newest}</summary>` +
        `<ul class="clique-techs">${techs}</ul><ul class="clique-orgs">${orgs}</ul>` +
        `</details>`
      );
    })
    .join('');
  return (
    `<li class="gap-entry" data-org="${escapeHtml(entry.org)}">` +
    `<span class="rank">${rank}</span>` +
    `<span class="org-name">${escapeHtml(entry.org_name)}</span>` +
    `<span class="distance">${formatNumber(entry.distance)}</span>` +
    `<div class="kpis">${kpis}</div>${cliques}${renderTrace(entry.trace)}</li>`
  );
}

export function renderGap(report: GapReport): string {
  if (report.results.length === 0) {
    const theta = report.query['theta'];
    const excluded = report.excluded
      .map(
        (x) =>
          `<li data-org="${escapeHtml(x.org)}">${escapeHtml(x.org)}: ` +
          `${escapeHtml(x.reason)}</li>`,
      )
      .join('');
    return (
      emptyState(
        `No organizations beyond theta=${String(theta)}. ` +
          `Lower the threshold or relax the condition rules.`,
      ) + (excluded ? `<ul class="excluded">${excluded}</ul>` : '')
    );
  }
  const entries = report.results.map((entry, i) => renderEntry(entry, i + 1)).join('');
  const excluded = report.excluded
    .map(
      (x) =>
        `<li data-org="${escapeHtml(x.org)}">${escapeHtml(x.org)}: ` +
        `${escapeHtml(x.reason)}${renderTrace(x.trace)}</li>`,
    )
    .join('');
  return (
    `<ol class="gap-results">${entries}</ol>` +
    `<details class="excluded-panel"><summary>${report.excluded.length} excluded</summary>` +
    `<ul class="excluded">${excluded}</ul></details>`
  );
}
