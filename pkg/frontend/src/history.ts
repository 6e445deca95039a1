/** Local-storage mirror of the query history.
 *
 * The stored document is exactly the server's history export format (see
 * docs/formats.md), so entries round-trip between the sidebar, local
 * storage and the service without translation. Corrupt storage resets to
 * empty and reports it, rather than breaking the session.
 */

import type { HistoryEntry } from "./types.js";

export const STORAGE_KEY = "lifegrep.history.v1";

export class HistoryMirror {
  private entries: HistoryEntry[] = [];
  public corrupted = false;

  constructor(
    private readonly storage: Storage,
    private readonly capacity = 200,
    private readonly now: () => number = Date.now,
  ) {
    this.entries = this.restore();
  }

  private restore(): HistoryEntry[] {
    const raw = this.storage.getItem(STORAGE_KEY);
    if (raw === null) return [];
    try {
      const doc = JSON.parse(raw);
      if (!Array.isArray(doc)) throw new Error("not an array");
      for (const e of doc) {
        if (typeof e?.id !== "string") throw new Error("entry without id");
        if (typeof e.query !== "string" && !Array.isArray(e.query)) {
          throw new Error("entry without query");
        }
      }
      return doc as HistoryEntry[];
    } catch {
      this.corrupted = true;
      this.storage.removeItem(STORAGE_KEY);
      return [];
    }
  }

  private persist(): void {
    this.storage.setItem(STORAGE_KEY, JSON.stringify(this.entries));
  }

  list(): HistoryEntry[] {
    return this.entries;
  }

  get(id: string): HistoryEntry | undefined {
    return this.entries.find((e) => e.id === id);
  }

  /** Insert at the front, or move an existing entry to the front. */
  record(id: string, query: string | string[]): HistoryEntry {
    const existing = this.entries.findIndex((e) => e.id === id);
    let entry: HistoryEntry;
    if (existing >= 0) {
      entry = this.entries.splice(existing, 1)[0];
      entry.issued_at = this.now() / 1000;
    } else {
      entry = {
        id,
        query,
        issued_at: this.now() / 1000,
        first_viewed: null,
        last_viewed: null,
        longest_viewed: null,
        longest_view_ms: 0,
      };
    }
    this.entries.unshift(entry);
    this.entries = this.entries.slice(0, this.capacity);
    this.persist();
    return entry;
  }

  view(id: string, recordId: string, viewMs: number): HistoryEntry | undefined {
    const entry = this.get(id);
    if (!entry) return undefined;
    if (entry.first_viewed === null) {
      entry.first_viewed = recordId;
      entry.longest_viewed = recordId;
      entry.longest_view_ms = viewMs;
    } else if (viewMs > entry.longest_view_ms) {
      entry.longest_viewed = recordId;
      entry.longest_view_ms = viewMs;
    }
    entry.last_viewed = recordId;
    this.persist();
    return entry;
  }

  clear(): void {
    this.entries = [];
    this.storage.removeItem(STORAGE_KEY);
  }
}
