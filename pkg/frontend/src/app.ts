/** Single-page wiring: query panel -> landscape job -> chart views.
 *
 * All rendering goes through the pure functions in render/; this module
 * only moves payloads around, keeps the URL in sync with the session, and
 * discards stale responses via the sequence gate. */

import { ApiClient, ApiRequestError, SequenceGate } from './api.js';
import { DEFAULT_STATE, parseState, serializeState, type SessionState } from './state.js';
import { renderComparative } from './render/comparative.js';
import { renderGap } from './render/gap.js';
import { renderGroupedBars } from './render/grouped.js';
import { renderSpider } from './render/spider.js';
import { renderTimeline } from './render/timeline.js';
import { errorState } from './render/util.js';

interface Elements {
  pos: HTMLInputElement;
  neg: HTMLInputElement;
  me: HTMLInputElement;
  theta: HTMLInputElement;
  thetaValue: HTMLElement;
  cond: HTMLTextAreaElement;
  chart: HTMLSelectElement;
  groupBy: HTMLSelectElement;
  techA: HTMLInputElement;
  techB: HTMLInputElement;
  submit: HTMLButtonElement;
  status: HTMLElement;
  queryError: HTMLElement;
  view: HTMLElement;
  gapView: HTMLElement;
}

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

function splitTerms(raw: string): string[] {
  return raw
    .split(',')
    .map((t) => t.trim())
    .filter((t) => t.length > 0);
}

export class App {
  private state: SessionState;
  private readonly gate = new SequenceGate();

  constructor(
    private readonly api: ApiClient,
    private readonly el: Elements,
  ) {
    this.state = parseState(window.location.search);
  }

  start(): void {
    this.applyStateToControls();
    this.el.submit.addEventListener('click', () => void this.submitQuery());
    this.el.pos.addEventListener('input', () => this.syncSubmitEnabled());
    this.el.chart.addEventListener('change', () => {
      this.update({ chart: this.el.chart.value as SessionState['chart'] });
      void this.refreshView();
    });
    this.el.groupBy.addEventListener('change', () => {
      this.update({ groupBy: this.el.groupBy.value as SessionState['groupBy'] });
      void this.refreshView();
    });
    this.el.theta.addEventListener('change', () => {
      const theta = Number(this.el.theta.value);
      if (Number.isFinite(theta) && theta >= 0) {
        this.update({ theta });
        this.el.thetaValue.textContent = String(theta);
        void this.refreshGap();
      }
    });
    window.addEventListener('popstate', () => {
      this.state = parseState(window.location.search);
      this.applyStateToControls();
      void this.refreshView();
      void this.refreshGap();
    });
    this.syncSubmitEnabled();
    if (this.state.landscapeId) {
      void this.refreshView();
      void this.refreshGap();
    }
  }

  private applyStateToControls(): void {
    this.el.pos.value = this.state.pos.join(', ');
    this.el.neg.value = this.state.neg.join(', ');
    this.el.me.value = this.state.me ?? '';
    this.el.theta.value = String(this.state.theta);
    this.el.thetaValue.textContent = String(this.state.theta);
    this.el.cond.value = Object.keys(this.state.cond).length
      ? JSON.stringify(this.state.cond, null, 2)
      : '';
    this.el.chart.value = this.state.chart;
    this.el.groupBy.value = this.state.groupBy;
    this.el.techA.value = this.state.techA ?? '';
    this.el.techB.value = this.state.techB ?? '';
  }

  private update(patch: Partial<SessionState>): void {
    this.state = { ...this.state, ...patch };
    const query = serializeState(this.state);
    const url = query ? `?${query}` : window.location.pathname;
    window.history.replaceState(null, '', url);
  }

  private syncSubmitEnabled(): void {
    this.el.submit.disabled = splitTerms(this.el.pos.value).length === 0;
  }

  private showQueryError(message: string): void {
    this.el.queryError.textContent = message;
    this.el.queryError.hidden = message === '';
  }

  /** Submit the seed terms as a new landscape job and wait for it. */
  async submitQuery(): Promise<void> {
    const pos = splitTerms(this.el.pos.value);
    const neg = splitTerms(this.el.neg.value);
    if (pos.length === 0) return;
    this.showQueryError('');
    this.update({ pos, neg, me: this.el.me.value.trim() || null });
    const ticket = this.gate.begin('landscape');
    this.el.status.textContent = 'building landscape…';
    try {
      const job = await this.api.submitLandscape(pos, neg, {});
      const settled = await this.api.awaitJob(job.job_id);
      if (!this.gate.isCurrent('landscape', ticket)) return;
      if (settled.state === 'failed' || !settled.result) {
        this.el.status.textContent = '';
        this.showQueryError(settled.error?.message ?? 'landscape job failed');
        return;
      }
      this.el.status.textContent = '';
      this.update({ landscapeId: settled.result.landscape_id });
      await Promise.all([this.refreshView(), this.refreshGap()]);
    } catch (err) {
      if (!this.gate.isCurrent('landscape', ticket)) return;
      this.el.status.textContent = '';
      // Bad seed terms are a user-fixable input problem: surface them inline
      // next to the query field instead of retrying.
      if (err instanceof ApiRequestError) {
        this.showQueryError(`${err.code}: ${err.message}`);
      } else {
        this.showQueryError(String(err));
      }
    }
  }

  /** Re-render the main chart panel for the current state. */
  async refreshView(): Promise<void> {
    const landscapeId = this.state.landscapeId;
    const ticket = this.gate.begin('view');
    try {
      let html: string;
      if (this.state.chart === 'comparative') {
        if (!this.state.me || !this.state.techA || !this.state.techB) {
          html = errorState('IncompleteQuery', 'comparative view needs me, tech A and tech B');
        } else {
          const payload = await this.api.compare({
            org: this.state.me,
            tech_a: this.state.techA,
            tech_b: this.state.techB,
            theta: this.state.theta,
          });
          html = renderComparative(payload);
        }
      } else if (!landscapeId) {
        return;
      } else if (this.state.chart === 'spider') {
        html = renderSpider(await this.api.spider(landscapeId));
      } else if (this.state.chart === 'timeline') {
        html = renderTimeline(await this.api.timeline(landscapeId));
      } else {
        html = renderGroupedBars(await this.api.cube(landscapeId, this.state.groupBy));
      }
      if (!this.gate.isCurrent('view', ticket)) return;
      this.el.view.innerHTML = html;
    } catch (err) {
      if (!this.gate.isCurrent('view', ticket)) return;
      this.el.view.innerHTML =
        err instanceof ApiRequestError
          ? errorState(err.code, err.message)
          : errorState('Error', String(err));
    }
  }

  /** Re-run the gap query (the theta slider and condition editor feed here). */
  async refreshGap(): Promise<void> {
    const { landscapeId, me } = this.state;
    if (!landscapeId || !me) return;
    const ticket = this.gate.begin('gap');
    try {
      const report = await this.api.gap({
        landscape_id: landscapeId,
        me,
        theta: this.state.theta,
        cond: this.state.cond,
      });
      if (!this.gate.isCurrent('gap', ticket)) return;
      this.el.gapView.innerHTML = renderGap(report);
    } catch (err) {
      if (!this.gate.isCurrent('gap', ticket)) return;
      this.el.gapView.innerHTML =
        err instanceof ApiRequestError
          ? errorState(err.code, err.message)
          : errorState('Error', String(err));
    }
  }
}

export function bootstrap(baseUrl = ''): App {
  const app = new App(new ApiClient(baseUrl), {
    pos: byId<HTMLInputElement>('pos'),
    neg: byId<HTMLInputElement>('neg'),
    me: byId<HTMLInputElement>('me'),
    theta: byId<HTMLInputElement>('theta'),
    thetaValue: byId<HTMLElement>('theta-value'),
    cond: byId<HTMLTextAreaElement>('cond'),
    chart: byId<HTMLSelectElement>('chart'),
    groupBy: byId<HTMLSelectElement>('group-by'),
    techA: byId<HTMLInputElement>('tech-a'),
    techB: byId<HTMLInputElement>('tech-b'),
    submit: byId<HTMLButtonElement>('submit'),
    status: byId<HTMLElement>('status'),
    queryError: byId<HTMLElement>('query-error'),
    view: byId<HTMLElement>('view'),
    gapView: byId<HTMLElement>('gap-view'),
  });
  app.start();
  return app;
}

export { DEFAULT_STATE };
