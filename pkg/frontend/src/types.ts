/** Shapes of the service's JSON responses (see ../docs/api.md). */

export interface SearchOptions {
  score: number;
  limit: number;
  reduced: boolean;
  sort: "date" | "confidence" | "objects";
}

export interface Canonical {
  text: string;
  digest: string;
}

export interface SearchHit {
  id: string;
  ts: string;
  score: number;
  matched_terms: string[];
  cluster_id: number;
  loc: string | null;
}

export interface SearchResponse {
  canonical: Canonical;
  options: SearchOptions;
  total: number;
  hits: SearchHit[];
}

export interface TemporalResponse {
  canonical: Canonical;
  stages: string[];
  total: number;
  chains: { ids: string[]; ts: string[] }[];
}

export interface DaySummary {
  date: string;
  weekday: string;
  image_count: number;
  representatives: string[];
  top_locations: [string, number][];
  top_concepts: [string, number][];
  top_objects: [string, number][];
}

export interface SummariesResponse {
  total: number;
  page: number;
  page_size: number;
  days: DaySummary[];
}

export interface Suggestion {
  kind: string;
  term: string;
  count: number;
  examples: string[];
  window: string | null;
}

export interface KeywordInfo {
  long: string;
  alias: string;
  domain: string;
}

export type AutocompleteResponse =
  | { suggestions: Suggestion[]; keywords?: undefined }
  | { keywords: KeywordInfo[]; suggestions?: undefined };

export interface Detection {
  kind: string;
  term: string;
  score: number;
  bbox: [number, number, number, number] | null;
}

export interface ImageRecord {
  id: string;
  ts: string;
  date: string;
  weekday: string;
  lat: number | null;
  lon: number | null;
  loc: string | null;
  cluster_id: number;
  cluster_size: number;
  detections: Detection[];
}

export interface ImageResponse {
  record: ImageRecord;
  neighbors: { id: string; similarity: number }[];
  links: Record<string, string>;
}

export interface GeoResponse {
  total: number;
  hits: { id: string; ts: string; distance_km: number }[];
}

export interface SubmitResponse {
  id: string;
  submitted_at: string;
  outcome: "accepted" | "rejected" | "unreachable";
}

export interface HistoryEntry {
  id: string;
  query: string | string[];
  issued_at: number;
  first_viewed: string | null;
  last_viewed: string | null;
  longest_viewed: string | null;
  longest_view_ms: number;
}

export interface MetaResponse {
  records: number;
  first_date: string | null;
  last_date: string | null;
  feature_dim: number | null;
  timenames: Record<string, string>;
  defaults: SearchOptions;
}

export interface ApiError {
  error: { message: string; position: number | null };
}
