/** Thin HTTP client for the EHCP query service.
 *
 * The fetch implementation is injected so tests can serve canned payloads;
 * nothing here inspects or transforms the numbers in a response. What-if
 * submissions share one AbortController slot: submitting again cancels the
 * request still in flight, so at most one is ever pending.
 */

import type {
  FieldError,
  PlayDetail,
  PlayIndex,
  TrajectoryReport,
  WhatIfRequestBody,
  WhatIfResponse,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

/** 422 with the service's per-field detail list attached. */
export class ValidationError extends ApiError {
  constructor(readonly fields: FieldError[]) {
    super("request rejected by the service", 422);
  }

  /** Inline messages keyed by the field path, e.g. "pinning.air_seconds". */
  byField(): Record<string, string> {
    const out: Record<string, string> = {};
    for (const field of this.fields) {
      const path = field.loc
        .filter((part) => part !== "body" && part !== "query")
        .join(".");
      out[path || "request"] = field.msg;
    }
    return out;
  }
}

async function parseError(response: Response): Promise<never> {
  let detail: unknown;
  try {
    detail = (await response.json()).detail;
  } catch {
    detail = undefined;
  }
  if (response.status === 422 && Array.isArray(detail)) {
    throw new ValidationError(detail as FieldError[]);
  }
  const message = typeof detail === "string"
    ? detail
    : `request failed with status ${response.status}`;
  throw new ApiError(message, response.status);
}

export interface TrajectoryQuery {
  step?: number;
  M?: number;
  mode?: string;
  seed?: number;
}

export class ApiClient {
  private whatIfController: AbortController | null = null;

  constructor(private readonly baseUrl: string,
              private readonly fetchImpl: FetchLike) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path);
    if (!response.ok) {
      await parseError(response);
    }
    return (await response.json()) as T;
  }

  listPlays(): Promise<PlayIndex> {
    return this.getJson<PlayIndex>("/plays");
  }

  getPlay(gameId: string, playId: string): Promise<PlayDetail> {
    const game = encodeURIComponent(gameId);
    const play = encodeURIComponent(playId);
    return this.getJson<PlayDetail>(`/plays/${game}/${play}`);
  }

  getTrajectories(gameId: string, playId: string,
                  query: TrajectoryQuery = {}): Promise<TrajectoryReport> {
    const game = encodeURIComponent(gameId);
    const play = encodeURIComponent(playId);
    const params = new URLSearchParams();
    for (const [name, value] of Object.entries(query)) {
      if (value !== undefined) {
        params.set(name, String(value));
      }
    }
    const suffix = params.size > 0 ? `?${params.toString()}` : "";
    return this.getJson<TrajectoryReport>(
      `/plays/${game}/${play}/trajectories${suffix}`);
  }

  /** POST the what-if body, aborting any submission still in flight. */
  async submitWhatIf(body: WhatIfRequestBody): Promise<WhatIfResponse> {
    this.whatIfController?.abort();
    const controller = new AbortController();
    this.whatIfController = controller;
    try {
      const response = await this.fetchImpl(this.baseUrl + "/whatif", {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
        signal: controller.signal,
      });
      if (!response.ok) {
        await parseError(response);
      }
      return (await response.json()) as WhatIfResponse;
    } finally {
      if (this.whatIfController === controller) {
        this.whatIfController = null;
      }
    }
  }

  /** True while a what-if submission has not settled or been cancelled. */
  get whatIfPending(): boolean {
    return this.whatIfController !== null;
  }
}

export function isAbort(err: unknown): boolean {
  return err instanceof DOMException
    ? err.name === "AbortError"
    : err instanceof Error && err.name === "AbortError";
}
