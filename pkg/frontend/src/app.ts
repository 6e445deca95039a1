/** Application shell: tabs, view routing, search execution, image overlay
 * lifecycle (with view-duration tracking), and history synchronization
 * (browser local storage + server session store). */

import { ApiClient, ApiRequestError } from "./api.js";
import { queryFromUrl } from "./dsl.js";
import { HistoryMirror } from "./history.js";
import { ViewState } from "./state.js";
import type { HistoryEntry, SearchHit } from "./types.js";
import { renderCalendarData, renderCalendarView } from "./views/calendar.js";
import { clear, h } from "./views/dom.js";
import { renderFilterView } from "./views/filter.js";
import { renderHistorySidebar } from "./views/historybar.js";
import { renderImageOverlay, renderOverlayError } from "./views/image.js";

export interface AppOptions {
  apiBase?: string;
  now?: () => number;
  storage?: Storage;
  win?: Window;
}

export interface AppContext {
  api: ApiClient;
  state: ViewState;
  history: HistoryMirror;
  track<T>(promise: Promise<T>): Promise<T>;
  runFilterSearch(scrollTo?: string): Promise<void>;
  runQueryText(q: string, scrollTo?: string): Promise<void>;
  runGeoSearch(lat: number, lon: number, radiusKm: number): Promise<void>;
  refreshCalendar(): Promise<void>;
  openImage(id: string): Promise<void>;
  closeImage(): Promise<void>;
  addStage(): void;
  removeStage(index: number): void;
  reorderStage(index: number, delta: -1 | 1): void;
  reissueEntry(entry: HistoryEntry, scrollTo?: string): Promise<void>;
  clearHistory(): Promise<void>;
  baseHref(): string;
}

export class App implements AppContext {
  readonly api: ApiClient;
  readonly state = new ViewState();
  readonly history: HistoryMirror;

  private readonly now: () => number;
  private readonly win: Window;
  private readonly pending = new Set<Promise<unknown>>();
  private viewRoot!: HTMLElement;
  private sidebar!: HTMLElement;
  private overlay!: HTMLElement;
  private openedAt: number | null = null;

  constructor(private readonly container: HTMLElement, options: AppOptions = {}) {
    this.api = new ApiClient(options.apiBase ?? "");
    this.now = options.now ?? Date.now;
    this.win = options.win ?? window;
    this.history = new HistoryMirror(options.storage ?? this.win.localStorage, 200, this.now);
    this.buildSkeleton();
  }

  /** Fetch server defaults, restore any ?q= query, and render. */
  async init(): Promise<void> {
    try {
      const meta = await this.track(this.api.meta());
      this.state.options = { ...meta.defaults, reduced: true };
    } catch {
      // offline render still works; searches will surface the error
    }
    const fromUrl = queryFromUrl(this.win.location.href);
    this.render();
    if (fromUrl !== null) {
      this.state.stages = [fromUrl];
      await this.runFilterSearch();
    }
  }

  track<T>(promise: Promise<T>): Promise<T> {
    this.pending.add(promise);
    const drop = () => this.pending.delete(promise);
    promise.then(drop, drop);
    return promise;
  }

  /** Settles when every in-flight request has finished (test hook). */
  async whenIdle(): Promise<void> {
    while (this.pending.size) {
      await Promise.allSettled([...this.pending]);
    }
  }

  baseHref(): string {
    return this.win.location.href;
  }

  // -- layout -----------------------------------------------------------------

  private buildSkeleton(): void {
    clear(this.container);
    const tabFilter = h(
      "button",
      { class: "tab tab-filter", click: () => this.switchView("filter") },
      "Filter",
    );
    const tabCalendar = h(
      "button",
      { class: "tab tab-calendar", click: () => this.switchView("calendar") },
      "Calendar",
    );
    const expert = h("input", { class: "expert-toggle", type: "checkbox", title: "expert mode" }) as HTMLInputElement;
    expert.addEventListener("change", () => {
      this.state.expert = expert.checked;
      this.render();
    });
    const historyToggle = h(
      "button",
      {
        class: "history-toggle",
        title: "open or close the query history",
        click: () => this.sidebar.classList.toggle("open"),
      },
      "History",
    );

    this.viewRoot = h("main", { class: "view-root" });
    this.sidebar = h("aside", { class: "history-sidebar open" });
    this.overlay = h("div", { class: "image-overlay" });

    this.container.append(
      h(
        "header",
        { class: "topbar" },
        h("span", { class: "brand" }, "lifegrep"),
        tabCalendar,
        tabFilter,
        h("label", { class: "expert-label" }, expert, " expert"),
        historyToggle,
      ),
      h("div", { class: "columns" }, this.viewRoot, this.sidebar),
      this.overlay,
    );

    this.win.addEventListener("keydown", (event) => this.onKeydown(event as KeyboardEvent));
  }

  private switchView(view: "filter" | "calendar"): void {
    this.state.view = view;
    this.render();
  }

  private render(): void {
    this.container.querySelector(".tab-filter")?.classList.toggle("active", this.state.view === "filter");
    this.container.querySelector(".tab-calendar")?.classList.toggle("active", this.state.view === "calendar");
    if (this.state.view === "filter") {
      renderFilterView(this.viewRoot, this);
    } else {
      renderCalendarView(this.viewRoot, this);
      void this.refreshCalendar();
    }
    renderHistorySidebar(this.sidebar, this);
  }

  private showError(message: string): void {
    const line = this.viewRoot.querySelector(".error-line");
    if (line) line.textContent = message;
  }

  // -- searching ---------------------------------------------------------------

  async runFilterSearch(scrollTo?: string): Promise<void> {
    const ticket = this.state.ticket();
    const stages = this.state.stages;
    const options = { ...this.state.options };
    try {
      if (stages.length === 1) {
        const response = await this.track(this.api.search(stages[0], options));
        if (!this.state.isCurrent(ticket)) return;
        this.state.results = {
          hits: response.hits,
          total: response.total,
          entryId: response.canonical.digest,
          kind: "filter",
        };
        this.history.record(response.canonical.digest, response.canonical.text);
        void this.track(this.api.historyRecordQuery(stages[0], options)).catch(() => undefined);
      } else {
        const response = await this.track(this.api.searchTemporal(stages, options));
        if (!this.state.isCurrent(ticket)) return;
        const hits: SearchHit[] = response.chains.map((chain) => ({
          id: chain.ids[0],
          ts: chain.ts[0],
          score: 1,
          matched_terms: [],
          cluster_id: -1,
          loc: null,
        }));
        this.state.results = {
          hits,
          total: response.total,
          entryId: response.canonical.digest,
          kind: "temporal",
          chains: response.chains.map((c) => c.ids),
        };
        this.history.record(response.canonical.digest, response.stages);
        void this.track(this.api.historyRecordStages(stages)).catch(() => undefined);
      }
    } catch (error) {
      if (!this.state.isCurrent(ticket)) return;
      if (error instanceof ApiRequestError) {
        const at = error.position !== null ? ` (at position ${error.position})` : "";
        this.showError(error.message + at);
        return;
      }
      this.showError((error as Error).message);
      return;
    }
    if (this.state.view !== "filter") {
      this.state.view = "filter";
    }
    this.render();
    this.showError("");
    if (scrollTo) this.scrollToHit(scrollTo);
  }

  async runQueryText(q: string, scrollTo?: string): Promise<void> {
    if (this.state.openImage) await this.closeImage();
    this.state.stages = [q];
    this.state.view = "filter";
    await this.runFilterSearch(scrollTo);
  }

  async runGeoSearch(lat: number, lon: number, radiusKm: number): Promise<void> {
    if (this.state.openImage) await this.closeImage();
    const ticket = this.state.ticket();
    try {
      const response = await this.track(this.api.geo(lat, lon, radiusKm));
      if (!this.state.isCurrent(ticket)) return;
      this.state.results = {
        hits: response.hits.map((hit) => ({
          id: hit.id,
          ts: hit.ts,
          score: hit.distance_km,
          matched_terms: [],
          cluster_id: -1,
          loc: null,
        })),
        total: response.total,
        entryId: null, // geo searches are an Image-view tool, not history entries
        kind: "geo",
      };
      this.state.view = "filter";
      this.render();
    } catch (error) {
      this.showError((error as Error).message);
    }
  }

  async refreshCalendar(): Promise<void> {
    const cal = this.state.calendar;
    try {
      const response = await this.track(
        this.api.summaries({
          page: cal.page,
          page_size: cal.pageSize,
          weekday: cal.weekday || undefined,
          sort: cal.sort !== "date" ? cal.sort : undefined,
          images_per_day: cal.imagesPerDay,
        }),
      );
      renderCalendarData(this.viewRoot, this, response.days, response.total);
    } catch (error) {
      this.showError((error as Error).message);
    }
  }

  private scrollToHit(id: string): void {
    const item = this.viewRoot.querySelector(`.grid-item[data-id="${CSS.escape(id)}"]`);
    if (item) {
      (item as HTMLElement).scrollIntoView?.({ block: "center" });
      item.classList.add("highlight");
    }
  }

  // -- image overlay -----------------------------------------------------------

  async openImage(id: string): Promise<void> {
    if (this.state.openImage && this.state.openImage !== id) {
      this.reportView();
    }
    try {
      const detail = await this.track(this.api.image(id));
      this.state.openImage = id;
      this.openedAt = this.now();
      renderImageOverlay(this.overlay, this, detail);
    } catch (error) {
      this.state.openImage = null;
      this.openedAt = null;
      renderOverlayError(this.overlay, this, (error as Error).message);
    }
  }

  async closeImage(): Promise<void> {
    this.reportView();
    this.state.openImage = null;
    this.openedAt = null;
    this.overlay.classList.remove("open");
    clear(this.overlay);
    renderHistorySidebar(this.sidebar, this);
  }

  /** Report how long the open image was viewed, to mirror and server. */
  private reportView(): void {
    const id = this.state.openImage;
    const entryId = this.state.results.entryId;
    if (!id || !entryId || this.openedAt === null) return;
    const viewMs = Math.max(0, Math.round(this.now() - this.openedAt));
    this.history.view(entryId, id, viewMs);
    void this.track(this.api.historyView(entryId, id, viewMs)).catch(() => undefined);
    this.openedAt = this.now();
  }

  private onKeydown(event: KeyboardEvent): void {
    if (!this.state.openImage) return;
    if (event.key === "Escape") {
      event.preventDefault();
      void this.closeImage();
      return;
    }
    if (event.key !== "ArrowRight" && event.key !== "ArrowLeft") return;
    event.preventDefault();
    const next = this.state.neighborInGrid(this.state.openImage, event.key === "ArrowRight" ? 1 : -1);
    if (next) void this.openImage(next);
  }

  // -- stages, history ----------------------------------------------------------

  addStage(): void {
    this.state.addStage();
    this.render();
  }

  removeStage(index: number): void {
    this.state.removeStage(index);
    this.render();
  }

  reorderStage(index: number, delta: -1 | 1): void {
    this.state.moveStage(index, delta);
    this.render();
  }

  async reissueEntry(entry: HistoryEntry, scrollTo?: string): Promise<void> {
    if (this.state.openImage) await this.closeImage();
    this.state.stages = Array.isArray(entry.query) ? [...entry.query] : [entry.query];
    this.state.view = "filter";
    await this.runFilterSearch(scrollTo);
  }

  async clearHistory(): Promise<void> {
    this.history.clear();
    renderHistorySidebar(this.sidebar, this);
    await this.track(this.api.historyClear()).catch(() => undefined);
  }
}

export function mount(container: HTMLElement, options: AppOptions = {}): App {
  const app = new App(container, options);
  void app.init();
  return app;
}
