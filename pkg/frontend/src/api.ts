// Typed client for the atlas JSON API. The fetch implementation is
// injectable so tests can run against canned responses.

import type {
  ApiErrorBody,
  DocumentsResponse,
  HeatmapResponse,
  InstitutionsResponse,
  ShoeboxCreateBody,
  ShoeboxEntry,
  TimelineResponse,
} from "./types.js";

export class ApiRequestError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(body: ApiErrorBody) {
    super(body.message);
    this.code = body.code;
    this.status = body.status;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function parseOrThrow<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let body: ApiErrorBody;
    try {
      body = (await response.json()) as ApiErrorBody;
    } catch {
      body = { status: response.status, code: "bad_response", message: response.statusText };
    }
    throw new ApiRequestError(body);
  }
  if (response.status === 204) {
    return undefined as T;
  }
  return (await response.json()) as T;
}

export interface YearWindow {
  yearFrom: number | null;
  yearTo: number | null;
}

export class AtlasApi {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private url(path: string, params: Record<string, string | number | null | undefined>): string {
    const search = new URLSearchParams();
    for (const [key, value] of Object.entries(params)) {
      if (value !== null && value !== undefined && value !== "") {
        search.set(key, String(value));
      }
    }
    const query = search.toString();
    return `${this.baseUrl}${path}${query ? `?${query}` : ""}`;
  }

  timeline(q: string): Promise<TimelineResponse> {
    return this.get(this.url("/api/timeline", { q }));
  }

  heatmap(q: string, window: YearWindow, cells = 1): Promise<HeatmapResponse> {
    return this.get(
      this.url("/api/heatmap", {
        q,
        year_from: window.yearFrom,
        year_to: window.yearTo,
        cells,
      }),
    );
  }

  institutions(q: string, window: YearWindow, limit = 300): Promise<InstitutionsResponse> {
    return this.get(
      this.url("/api/institutions", {
        q,
        year_from: window.yearFrom,
        year_to: window.yearTo,
        limit,
      }),
    );
  }

  documents(
    q: string,
    institution: string,
    window: YearWindow,
    limit = 20,
  ): Promise<DocumentsResponse> {
    return this.get(
      this.url("/api/documents", {
        q,
        institution,
        year_from: window.yearFrom,
        year_to: window.yearTo,
        limit,
      }),
    );
  }

  shoeboxList(): Promise<{ entries: ShoeboxEntry[] }> {
    return this.get(`${this.baseUrl}/api/shoebox`);
  }

  async shoeboxAdd(body: ShoeboxCreateBody): Promise<ShoeboxEntry> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/shoebox`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    return parseOrThrow(response);
  }

  async shoeboxUpdateNotes(entryId: string, notes: string): Promise<ShoeboxEntry> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/shoebox/${entryId}`, {
      method: "PATCH",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ notes }),
    });
    return parseOrThrow(response);
  }

  async shoeboxDelete(entryId: string): Promise<void> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/shoebox/${entryId}`, {
      method: "DELETE",
    });
    await parseOrThrow(response);
  }

  private async get<T>(url: string): Promise<T> {
    const response = await this.fetchImpl(url);
    return parseOrThrow<T>(response);
  }
}

/**
 * Latest-wins guard: in-flight responses superseded by a newer request on
 * the same channel resolve to undefined and must be dropped by the caller.
 */
export class LatestWins {
  private readonly tokens = new Map<string, number>();

  async run<T>(channel: string, work: () => Promise<T>): Promise<T | undefined> {
    const token = (this.tokens.get(channel) ?? 0) + 1;
    this.tokens.set(channel, token);
    const result = await work();
    return this.tokens.get(channel) === token ? result : undefined;
  }
}
