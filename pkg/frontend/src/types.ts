/** Shapes of the HTTP API payloads the dashboard renders. The dashboard
 * performs no analytics: every number shown comes from one of these fields. */

export interface SpiderAxis {
  concept: string;
  label: string;
}

export interface SpiderSeries {
  source: string;
  values: number[];
}

export interface SpiderPayload {
  chart: 'spider';
  axes: SpiderAxis[];
  series: SpiderSeries[];
}

export interface TimelineEvent {
  date: string;
  kind: string;
  ref: string;
  orgs: string[];
}

export interface TimelineRow {
  tech: string;
  label: string;
  events: TimelineEvent[];
}

export interface TimelinePayload {
  chart: 'timeline';
  rows: TimelineRow[];
}

export type MetricName =
  | 'patent_count'
  | 'publication_count'
  | 'award_total'
  | 'news_mentions';

export const METRICS: MetricName[] = [
  'patent_count',
  'publication_count',
  'award_total',
  'news_mentions',
];

export interface LeaderRow {
  org: string;
  org_name: string;
  patent_count: number;
  publication_count: number;
  award_total: number;
  news_mentions: number;
}

export interface ComparativePanel {
  tech: string;
  landscape_id: string;
  leaders: LeaderRow[];
  reference: { org: string; distance_to_leader: number; leader: string | null };
  gap_orgs: string[];
}

export interface ComparativePayload {
  chart: 'comparative_bars';
  org: string;
  panels: ComparativePanel[];
}

export interface GapClique {
  nodes: string[];
  gamma: number;
  organizations: string[];
  technologies: string[];
  newest_activity: string | null;
}

export interface GapTraceStep {
  rule: string;
  passed?: boolean;
  note?: string;
  value?: number;
  theta?: number;
  [key: string]: unknown;
}

export interface GapEntry {
  org: string;
  org_name: string;
  kpis: Record<string, number>;
  distance: number;
  cliques: GapClique[];
  trace: GapTraceStep[];
}

export interface GapExclusion {
  org: string;
  reason: string;
  trace: GapTraceStep[];
}

export interface GapReport {
  query: Record<string, unknown>;
  results: GapEntry[];
  excluded: GapExclusion[];
}

/** One roll-up row: the selected group-by keys plus the four metric sums. */
export type CubeRow = Record<string, string | number>;

export interface CubePayload {
  by: string[];
  rows: CubeRow[];
}

export interface JobTicket {
  job_id: string;
  kind: string;
  state: 'queued' | 'running' | 'done' | 'failed';
  progress: number;
  result: { landscape_id: string } | null;
  error: { code: string; message: string } | null;
}

export interface ExpandPayload {
  concepts: string[];
}

export interface ApiError {
  error: { code: string; message: string };
}

export function isApiError(body: unknown): body is ApiError {
  return typeof body === 'object' && body !== null && 'error' in body;
}
