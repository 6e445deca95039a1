/** Filter view: autocompleting multi-stage query inputs, option controls,
 * and the result grid. Result data always comes verbatim from one API
 * response; this view never filters or reorders hits locally. */

import { activeKind, fragmentAt, insertSuggestion } from "../dsl.js";
import type { AppContext } from "../app.js";
import { clear, h } from "./dom.js";

export function renderFilterView(root: HTMLElement, ctx: AppContext): void {
  clear(root);
  root.append(renderStages(ctx), renderControls(ctx), h("div", { class: "error-line" }));

  const status = h("div", { class: "status-line" });
  const grid = h("div", { class: "result-grid" });
  root.append(status, grid);
  renderResults(root, ctx);
}

function renderStages(ctx: AppContext): HTMLElement {
  const { state } = ctx;
  const wrap = h("div", { class: "stage-list" });
  state.stages.forEach((text, index) => {
    const input = h("input", {
      class: "stage-input",
      type: "text",
      value: text,
      placeholder:
        index === 0 ? "e.g. --concepts airport_terminal -t morning" : "then ...",
      "data-index": index,
    }) as HTMLInputElement;
    input.value = text;
    input.addEventListener("input", () => {
      state.stages[index] = input.value;
      void showSuggestions(ctx, row, input);
    });
    input.addEventListener("keydown", (event) => {
      if ((event as KeyboardEvent).key === "Enter") {
        event.preventDefault();
        void ctx.runFilterSearch();
      }
    });

    const row = h("div", { class: "stage-row" }, input);
    if (state.expert) {
      row.append(
        h("button", { class: "stage-up", title: "move up", click: () => ctx.reorderStage(index, -1) }, "↑"),
        h("button", { class: "stage-down", title: "move down", click: () => ctx.reorderStage(index, 1) }, "↓"),
        h("button", { class: "stage-remove", title: "remove stage", click: () => ctx.removeStage(index) }, "✕"),
      );
    }
    row.append(h("div", { class: "suggestion-list" }));
    wrap.append(row);
  });

  if (state.expert) {
    wrap.append(
      h(
        "button",
        { class: "stage-add", title: "add a temporally chained query", click: () => ctx.addStage() },
        "+ temporal stage",
      ),
    );
  }
  return wrap;
}

async function showSuggestions(
  ctx: AppContext,
  row: HTMLElement,
  input: HTMLInputElement,
): Promise<void> {
  const list = row.querySelector(".suggestion-list") as HTMLElement;
  const cursor = input.selectionStart ?? input.value.length;
  const fragment = fragmentAt(input.value, cursor);
  if (!fragment) {
    clear(list);
    return;
  }
  const kind = fragment.startsWith("-") ? undefined : activeKind(input.value, cursor);
  const response = await ctx.track(ctx.api.autocomplete(fragment, kind));
  clear(list);
  if (response.keywords) {
    for (const kw of response.keywords) {
      list.append(
        h(
          "div",
          {
            class: "suggestion keyword",
            "data-term": kw.long,
            mousedown: (event: Event) => {
              event.preventDefault();
              applySuggestion(ctx, input, kw.long + " ");
            },
          },
          `${kw.long} (${kw.alias})  ${kw.domain}`,
        ),
      );
    }
    return;
  }
  for (const s of response.suggestions ?? []) {
    const label = s.window ? `${s.term}  ${s.window}  ${s.count}` : `${s.term}  ${s.count}`;
    const item = h(
      "div",
      {
        class: "suggestion",
        "data-term": s.term,
        "data-kind": s.kind,
        mousedown: (event: Event) => {
          event.preventDefault();
          applySuggestion(ctx, input, s.term);
        },
      },
      h("span", { class: "suggestion-label" }, label),
    );
    for (const example of s.examples.slice(0, 3)) {
      item.append(h("img", { class: "suggestion-example", src: ctx.api.thumbUrl(example), alt: example }));
    }
    list.append(item);
  }
}

function applySuggestion(ctx: AppContext, input: HTMLInputElement, term: string): void {
  const cursor = input.selectionStart ?? input.value.length;
  const next = insertSuggestion(input.value, cursor, term);
  input.value = next.text;
  input.setSelectionRange?.(next.cursor, next.cursor);
  const index = Number(input.getAttribute("data-index"));
  ctx.state.stages[index] = next.text;
  const list = input.parentElement?.querySelector(".suggestion-list");
  if (list) clear(list as HTMLElement);
  input.focus?.();
}

function renderControls(ctx: AppContext): HTMLElement {
  const { state } = ctx;
  const score = h("input", {
    class: "score-slider",
    type: "range",
    min: "0",
    max: "1",
    step: "0.01",
    value: String(state.options.score),
    title: "Score",
  }) as HTMLInputElement;
  score.addEventListener("input", () => {
    state.options.score = Number(score.value);
    scoreLabel.textContent = `Score ${Math.round(state.options.score * 100)}%`;
  });
  const scoreLabel = h("span", { class: "score-label" }, `Score ${Math.round(state.options.score * 100)}%`);

  const limit = h("input", {
    class: "limit-slider",
    type: "range",
    min: "1",
    max: "5000",
    step: "1",
    value: String(state.options.limit),
    title: "Limit",
  }) as HTMLInputElement;
  limit.addEventListener("input", () => {
    state.options.limit = Number(limit.value);
    limitLabel.textContent = `Limit ${state.options.limit}`;
  });
  const limitLabel = h("span", { class: "limit-label" }, `Limit ${state.options.limit}`);

  const reduced = h("input", {
    class: "reduced-switch",
    type: "checkbox",
    title: "Reduced: one image per near-duplicate cluster",
  }) as HTMLInputElement;
  reduced.checked = state.options.reduced;
  reduced.addEventListener("change", () => {
    state.options.reduced = reduced.checked;
  });

  const controls = h(
    "div",
    { class: "filter-controls" },
    scoreLabel,
    score,
    limitLabel,
    limit,
    h("label", { class: "reduced-label" }, reduced, " Reduced"),
  );

  if (state.expert) {
    const sort = h("select", { class: "sort-select", title: "Sort results" }) as HTMLSelectElement;
    for (const [value, label] of [
      ["date", "by date"],
      ["confidence", "by confidence"],
      ["objects", "by object count"],
    ]) {
      sort.append(h("option", { value }, label));
    }
    sort.value = state.options.sort;
    sort.addEventListener("change", () => {
      state.options.sort = sort.value as typeof state.options.sort;
    });
    controls.append(sort);
  }

  controls.append(h("button", { class: "run-button", click: () => void ctx.runFilterSearch() }, "Search"));
  return controls;
}

export function renderResults(root: HTMLElement, ctx: AppContext): void {
  const { state } = ctx;
  const status = root.querySelector(".status-line") as HTMLElement | null;
  const grid = root.querySelector(".result-grid") as HTMLElement | null;
  if (!status || !grid) return;

  const shown = state.results.hits.length;
  const label =
    state.results.kind === "geo"
      ? `${shown} images within radius (of ${state.results.total})`
      : `${shown} hits shown, ${state.results.total} total`;
  status.textContent = label;

  clear(grid);
  state.results.hits.forEach((hit, index) => {
    const chain = state.results.chains?.[index];
    const caption =
      chain && chain.length > 1
        ? `${hit.ts.slice(0, 16).replace("T", " ")}  ⛓ ${chain.join(" → ")}`
        : `${hit.ts.slice(0, 16).replace("T", " ")} ${hit.loc ?? ""}`;
    const item = h(
      "figure",
      {
        class: "grid-item",
        "data-id": hit.id,
        tabindex: "0",
        click: () => void ctx.openImage(hit.id),
      },
      h("img", { src: ctx.api.thumbUrl(hit.id), alt: hit.id, loading: "lazy" }),
      h("figcaption", {}, caption),
    );
    grid.append(item);
  });
}
