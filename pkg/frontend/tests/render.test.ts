/** Payload-echo tests: render each recorded API payload and check that
 * every datum in the payload appears in the rendered output, then pin the
 * full output with a snapshot. */

import { readFileSync } from 'node:fs';
import { describe, expect, it } from 'vitest';

import { renderComparative } from '../src/render/comparative.js';
import { renderGap } from '../src/render/gap.js';
import { renderGroupedBars } from '../src/render/grouped.js';
import { renderSpider } from '../src/render/spider.js';
import { renderTimeline } from '../src/render/timeline.js';
import { escapeHtml, formatNumber } from '../src/render/util.js';
import { METRICS } from '../src/types.js';
import type {
  ComparativePayload,
  CubePayload,
  GapReport,
  SpiderPayload,
  TimelinePayload,
} from '../src/types.js';

function fixture<T>(name: string): T {
  const path = new URL(`./fixtures/${name}.json`, import.meta.url);
  return JSON.parse(readFileSync(path, 'utf8')) as T;
}

describe('spider view', () => {
  const payload = fixture<SpiderPayload>('spider');
  const html = renderSpider(payload);

  it('echoes every axis and every series value', () => {
    for (const axis of payload.axes) {
      expect(html).toContain(`data-concept="${escapeHtml(axis.concept)}"`);
      expect(html).toContain(escapeHtml(axis.label));
    }
    for (const series of payload.series) {
      expect(html).toContain(`data-source="${escapeHtml(series.source)}"`);
      for (const value of series.values) {
        expect(html).toContain(formatNumber(value));
      }
    }
  });

  it('matches the pinned snapshot', () => {
    expect(html).toMatchSnapshot();
  });
});

describe('timeline view', () => {
  const payload = fixture<TimelinePayload>('timeline');
  const html = renderTimeline(payload);

  it('echoes every row and every event', () => {
    for (const row of payload.rows) {
      expect(html).toContain(`data-tech="${escapeHtml(row.tech)}"`);
      expect(html).toContain(escapeHtml(row.label));
      for (const event of row.events) {
        expect(html).toContain(`data-ref="${escapeHtml(event.ref)}"`);
        expect(html).toContain(escapeHtml(event.date));
        for (const org of event.orgs) {
          expect(html).toContain(escapeHtml(org));
        }
      }
    }
  });

  it('renders one mark per event', () => {
    const total = payload.rows.reduce((n, row) => n + row.events.length, 0);
    expect(html.match(/<circle /g)?.length).toBe(total);
  });

  it('matches the pinned snapshot', () => {
    expect(html).toMatchSnapshot();
  });
});

describe('grouped bars view', () => {
  for (const name of ['cube_by_org', 'cube_by_tech'] as const) {
    const payload = fixture<CubePayload>(name);
    const html = renderGroupedBars(payload);

    it(`echoes every row of ${name}`, () => {
      for (const row of payload.rows) {
        const key = payload.by.map((d) => String(row[d] ?? '')).join(' / ');
        expect(html).toContain(`data-key="${escapeHtml(key)}"`);
        for (const metric of METRICS) {
          expect(html).toContain(formatNumber(Number(row[metric] ?? 0)));
        }
      }
    });

    it(`matches the pinned snapshot for ${name}`, () => {
      expect(html).toMatchSnapshot();
    });
  }
});

describe('comparative view', () => {
  const payload = fixture<ComparativePayload>('compare');
  const html = renderComparative(payload);

  it('echoes both panels: leaders, metrics, reference distances, gap orgs', () => {
    expect(payload.panels.length).toBe(2);
    expect(html).toContain(`data-org="${escapeHtml(payload.org)}"`);
    for (const panel of payload.panels) {
      expect(html).toContain(`data-tech="${escapeHtml(panel.tech)}"`);
      for (const leader of panel.leaders) {
        expect(html).toContain(`data-org="${escapeHtml(leader.org)}"`);
        expect(html).toContain(escapeHtml(leader.org_name));
        for (const metric of METRICS) {
          expect(html).toContain(formatNumber(leader[metric]));
        }
      }
      expect(html).toContain(formatNumber(panel.reference.distance_to_leader));
      for (const org of panel.gap_orgs) {
        expect(html).toContain(escapeHtml(org));
      }
    }
  });

  it('matches the pinned snapshot', () => {
    expect(html).toMatchSnapshot();
  });
});

describe('gap view', () => {
  const report = fixture<GapReport>('gap');
  const html = renderGap(report);

  it('echoes every result: org, distance, KPIs, cliques, trace', () => {
    for (const entry of report.results) {
      expect(html).toContain(`data-org="${escapeHtml(entry.org)}"`);
      expect(html).toContain(escapeHtml(entry.org_name));
      expect(html).toContain(formatNumber(entry.distance));
      for (const [metric, value] of Object.entries(entry.kpis)) {
        expect(html).toContain(`${escapeHtml(metric)}: ${formatNumber(value)}`);
      }
      for (const clique of entry.cliques) {
        for (const tech of clique.technologies) {
          expect(html).toContain(escapeHtml(tech));
        }
        for (const org of clique.organizations) {
          expect(html).toContain(escapeHtml(org));
        }
        if (clique.newest_activity) {
          expect(html).toContain(escapeHtml(clique.newest_activity));
        }
      }
      for (const step of entry.trace) {
        expect(html).toContain(`data-rule="${escapeHtml(step.rule)}"`);
      }
    }
  });

  it('lists every excluded organization with its reason', () => {
    for (const exclusion of report.excluded) {
      expect(html).toContain(escapeHtml(exclusion.org));
      expect(html).toContain(escapeHtml(exclusion.reason));
    }
  });

  it('matches the pinned snapshot', () => {
    expect(html).toMatchSnapshot();
  });

  it('explains an empty result instead of showing a blank panel', () => {
    const empty = fixture<GapReport>('gap_empty');
    const emptyHtml = renderGap(empty);
    expect(empty.results.length).toBe(0);
    expect(emptyHtml).toContain('empty-state');
    expect(emptyHtml).toContain(String(empty.query['theta']));
    for (const exclusion of empty.excluded) {
      expect(emptyHtml).toContain(escapeHtml(exclusion.org));
    }
    expect(emptyHtml).toMatchSnapshot();
  });
});
