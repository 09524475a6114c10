/** Thin client for the techgap HTTP JSON API, plus the staleness guard.
 *
 * Concurrent in-flight requests are allowed; each logical slot (for
 * example "gap view") tracks a sequence number, and a response is applied
 * only if no newer request for the same slot started after it. */

import type {
  ComparativePayload,
  CubePayload,
  ExpandPayload,
  GapReport,
  JobTicket,
  SpiderPayload,
  TimelinePayload,
} from './types.js';
import { isApiError } from './types.js';

/** Latest-wins gate: begin() hands out increasing tickets per slot and
 * isCurrent() tells whether a ticket is still the newest one. */
export class SequenceGate {
  private counters = new Map<string, number>();

  begin(slot: string): number {
    const next = (this.counters.get(slot) ?? 0) + 1;
    this.counters.set(slot, next);
    return next;
  }

  isCurrent(slot: string, ticket: number): boolean {
    return this.counters.get(slot) === ticket;
  }
}

export class ApiRequestError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

async function parse<T>(response: Response): Promise<T> {
  const body: unknown = await response.json();
  if (!response.ok) {
    if (isApiError(body)) {
      throw new ApiRequestError(body.error.code, body.error.message, response.status);
    }
    throw new ApiRequestError('HttpError', `status ${response.status}`, response.status);
  }
  return body as T;
}

export class ApiClient {
  constructor(
    private readonly base: string = '',
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private get(path: string): Promise<Response> {
    return this.fetchImpl(`${this.base}${path}`);
  }

  private post(path: string, payload: unknown): Promise<Response> {
    return this.fetchImpl(`${this.base}${path}`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(payload),
    });
  }

  async expand(pos: string[], neg: string[]): Promise<ExpandPayload> {
    return parse(await this.post('/expand', { pos, neg }));
  }

  async submitLandscape(
    pos: string[],
    neg: string[],
    params: Record<string, unknown>,
  ): Promise<JobTicket> {
    return parse(await this.post('/landscape', { pos, neg, params }));
  }

  async job(jobId: string): Promise<JobTicket> {
    return parse(await this.get(`/jobs/${jobId}`));
  }

  /** Poll a landscape job until it settles. */
  async awaitJob(jobId: string, intervalMs = 250): Promise<JobTicket> {
    for (;;) {
      const ticket = await this.job(jobId);
      if (ticket.state === 'done' || ticket.state === 'failed') return ticket;
      await new Promise((resolve) => setTimeout(resolve, intervalMs));
    }
  }

  async spider(landscapeId: string): Promise<SpiderPayload> {
    return parse(await this.get(`/chart/${landscapeId}/spider`));
  }

  async timeline(landscapeId: string): Promise<TimelinePayload> {
    return parse(await this.get(`/chart/${landscapeId}/timeline`));
  }

  async cube(landscapeId: string, by: string): Promise<CubePayload> {
    return parse(await this.get(`/landscape/${landscapeId}/cube?by=${encodeURIComponent(by)}`));
  }

  async gap(query: {
    landscape_id: string;
    me: string;
    theta: number;
    cond?: Record<string, unknown>;
  }): Promise<GapReport> {
    return parse(await this.post('/gap', query));
  }

  async compare(query: {
    org: string;
    tech_a: string;
    tech_b: string;
    context?: string[];
    theta?: number;
    params?: Record<string, unknown>;
  }): Promise<ComparativePayload> {
    return parse(await this.post('/compare', query));
  }
}
