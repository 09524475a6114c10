/** Session state, serializable to the URL query string so a reload (or a
 * shared link) restores the session exactly. */

export interface SessionState {
  pos: string[];
  neg: string[];
  landscapeId: string | null;
  me: string | null;
  theta: number;
  /** JSON-encoded condition set, empty object when unset. */
  cond: Record<string, unknown>;
  chart: 'spider' | 'timeline' | 'grouped' | 'comparative';
  groupBy: 'org' | 'interval' | 'tech';
  techA: string | null;
  techB: string | null;
}

export const DEFAULT_STATE: SessionState = {
  pos: [],
  neg: [],
  landscapeId: null,
  me: null,
  theta: 0.5,
  cond: {},
  chart: 'spider',
  groupBy: 'org',
  techA: null,
  techB: null,
};

const CHARTS = new Set(['spider', 'timeline', 'grouped', 'comparative']);
const GROUPS = new Set(['org', 'interval', 'tech']);

/** Encode only the fields that differ from the defaults. */
export function serializeState(state: SessionState): string {
  const params = new URLSearchParams();
  if (state.pos.length) params.set('pos', state.pos.join(','));
  if (state.neg.length) params.set('neg', state.neg.join(','));
  if (state.landscapeId) params.set('landscape', state.landscapeId);
  if (state.me) params.set('me', state.me);
  if (state.theta !== DEFAULT_STATE.theta) params.set('theta', String(state.theta));
  if (Object.keys(state.cond).length) params.set('cond', JSON.stringify(state.cond));
  if (state.chart !== DEFAULT_STATE.chart) params.set('chart', state.chart);
  if (state.groupBy !== DEFAULT_STATE.groupBy) params.set('by', state.groupBy);
  if (state.techA) params.set('tech_a', state.techA);
  if (state.techB) params.set('tech_b', state.techB);
  return params.toString();
}

function splitTerms(value: string | null): string[] {
  if (!value) return [];
  return value
    .split(',')
    .map((t) => t.trim())
    .filter((t) => t.length > 0);
}

export function parseState(query: string): SessionState {
  const params = new URLSearchParams(query);
  const state: SessionState = { ...DEFAULT_STATE, pos: [], neg: [], cond: {} };
  state.pos = splitTerms(params.get('pos'));
  state.neg = splitTerms(params.get('neg'));
  state.landscapeId = params.get('landscape');
  state.me = params.get('me');
  const theta = params.get('theta');
  if (theta !== null && Number.isFinite(Number(theta)) && Number(theta) >= 0) {
    state.theta = Number(theta);
  }
  const cond = params.get('cond');
  if (cond) {
    try {
      const parsed: unknown = JSON.parse(cond);
      if (typeof parsed === 'object' && parsed !== null && !Array.isArray(parsed)) {
        state.cond = parsed as Record<string, unknown>;
      }
    } catch {
      // malformed condition in the URL: fall back to no conditions
    }
  }
  const chart = params.get('chart');
  if (chart && CHARTS.has(chart)) state.chart = chart as SessionState['chart'];
  const by = params.get('by');
  if (by && GROUPS.has(by)) state.groupBy = by as SessionState['groupBy'];
  state.techA = params.get('tech_a');
  state.techB = params.get('tech_b');
  return state;
}
