/** View state and the stale-response guard.
 *
 * At most one search result may be displayed per issue sequence: every
 * issued search takes a ticket, and a response is applied only if its
 * ticket is still the newest (slow responses from superseded queries are
 * discarded).
 */

import type { SearchHit, SearchOptions } from "./types.js";

export type ViewName = "calendar" | "filter";

export interface CalendarControls {
  page: number;
  pageSize: number;
  weekday: string; // "" = all
  sort: string; // "date" or "term:<kind>:<term>"
  imagesPerDay: number;
}

/** Novice-friendly startup preset; expert mode unlocks the advanced controls. */
export const DEFAULT_OPTIONS: SearchOptions = {
  score: 0.1,
  limit: 1000,
  reduced: true,
  sort: "date",
};

export interface ResultSet {
  hits: SearchHit[];
  total: number;
  entryId: string | null; // history entry the results belong to
  kind: "filter" | "temporal" | "geo";
  chains?: string[][]; // temporal only: full chain per grid item
}

export class ViewState {
  view: ViewName = "filter";
  stages: string[] = [""]; // >= 1 query inputs (temporal when > 1)
  options: SearchOptions = { ...DEFAULT_OPTIONS };
  calendar: CalendarControls = {
    page: 0,
    pageSize: 10,
    weekday: "",
    sort: "date",
    imagesPerDay: 8,
  };
  expert = false;
  results: ResultSet = { hits: [], total: 0, entryId: null, kind: "filter" };
  openImage: string | null = null;
  private seq = 0;

  ticket(): number {
    return ++this.seq;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.seq;
  }

  addStage(): void {
    this.stages.push("");
  }

  removeStage(index: number): void {
    if (this.stages.length > 1) this.stages.splice(index, 1);
  }

  moveStage(index: number, delta: -1 | 1): void {
    const target = index + delta;
    if (target < 0 || target >= this.stages.length) return;
    [this.stages[index], this.stages[target]] = [this.stages[target], this.stages[index]];
  }

  gridIndexOf(id: string): number {
    return this.results.hits.findIndex((h) => h.id === id);
  }

  /** Neighbouring grid item for arrow-key navigation, or null at the edge. */
  neighborInGrid(id: string, delta: -1 | 1): string | null {
    const index = this.gridIndexOf(id);
    if (index < 0) return null;
    const next = index + delta;
    if (next < 0 || next >= this.results.hits.length) return null;
    return this.results.hits[next].id;
  }
}
