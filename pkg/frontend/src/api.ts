/** Thin typed client for the HTTP API. All reads go through here; the UI
 * never filters or re-ranks hits itself. */

import type {
  AutocompleteResponse,
  GeoResponse,
  HistoryEntry,
  ImageResponse,
  MetaResponse,
  SearchOptions,
  SearchResponse,
  SubmitResponse,
  SummariesResponse,
  TemporalResponse,
} from "./types.js";

export class ApiRequestError extends Error {
  constructor(
    message: string,
    public readonly status: number,
    public readonly position: number | null = null,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + path, init);
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      const err = body?.error;
      throw new ApiRequestError(
        err?.message ?? `request failed with status ${response.status}`,
        response.status,
        err?.position ?? null,
      );
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  meta(): Promise<MetaResponse> {
    return this.request("/api/meta");
  }

  search(q: string, options?: Partial<SearchOptions>): Promise<SearchResponse> {
    const params = new URLSearchParams({ q });
    if (options?.score !== undefined) params.set("score", String(options.score));
    if (options?.limit !== undefined) params.set("limit", String(options.limit));
    if (options?.reduced !== undefined) params.set("reduced", String(options.reduced));
    if (options?.sort !== undefined) params.set("sort", options.sort);
    return this.request(`/api/search?${params}`);
  }

  searchTemporal(
    stages: string[],
    options?: Partial<SearchOptions> & { max_span_s?: number; same_day?: boolean },
  ): Promise<TemporalResponse> {
    return this.post("/api/search/temporal", { stages, ...options });
  }

  summaries(params: {
    page?: number;
    page_size?: number;
    weekday?: string;
    sort?: string;
    images_per_day?: number;
  }): Promise<SummariesResponse> {
    const search = new URLSearchParams();
    for (const [key, value] of Object.entries(params)) {
      if (value !== undefined && value !== "") search.set(key, String(value));
    }
    return this.request(`/api/summaries?${search}`);
  }

  autocomplete(fragment: string, kind?: string, max = 8): Promise<AutocompleteResponse> {
    const params = new URLSearchParams({ fragment, max: String(max) });
    if (kind) params.set("kind", kind);
    return this.request(`/api/autocomplete?${params}`);
  }

  image(id: string): Promise<ImageResponse> {
    return this.request(`/api/image/${encodeURIComponent(id)}`);
  }

  geo(lat: number, lon: number, radiusKm: number): Promise<GeoResponse> {
    const params = new URLSearchParams({
      center_lat: String(lat),
      center_lon: String(lon),
      radius_km: String(radiusKm),
    });
    return this.request(`/api/geo?${params}`);
  }

  submit(id: string): Promise<SubmitResponse> {
    return this.post("/api/submit", { id });
  }

  thumbUrl(id: string): string {
    return `${this.base}/api/thumb/${encodeURIComponent(id)}`;
  }

  historyRecordQuery(q: string, options?: Partial<SearchOptions>): Promise<{ entry: HistoryEntry }> {
    return this.post("/api/history", { query: q, ...options });
  }

  historyRecordStages(stages: string[]): Promise<{ entry: HistoryEntry }> {
    return this.post("/api/history", { stages });
  }

  historyView(entryId: string, recordId: string, viewMs: number): Promise<{ entry: HistoryEntry }> {
    return this.post("/api/history", {
      view: { entry_id: entryId, record_id: recordId, view_ms: viewMs },
    });
  }

  historyClear(): Promise<{ cleared: boolean }> {
    return this.request("/api/history", { method: "DELETE" });
  }
}
