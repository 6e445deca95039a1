/** History sidebar: most-recent-first query entries with the first, last
 * and longest viewed images. Entries re-issue on click; thumbnails
 * re-issue and scroll to their image once results load. */

import type { AppContext } from "../app.js";
import type { HistoryEntry } from "../types.js";
import { clear, h } from "./dom.js";

export function renderHistorySidebar(root: HTMLElement, ctx: AppContext): void {
  clear(root);
  root.append(
    h(
      "div",
      { class: "history-head" },
      h("strong", {}, "Query history"),
      h(
        "button",
        { class: "history-clear", title: "delete history, start a new session", click: () => void ctx.clearHistory() },
        "clear",
      ),
    ),
  );
  if (ctx.history.corrupted) {
    root.append(
      h("div", { class: "history-notice" }, "stored history was unreadable and has been reset"),
    );
  }

  const list = h("div", { class: "history-list" });
  for (const entry of ctx.history.list()) {
    list.append(renderEntry(ctx, entry));
  }
  if (!ctx.history.list().length) {
    list.append(h("div", { class: "empty-state" }, "no queries yet"));
  }
  root.append(list);
}

function renderEntry(ctx: AppContext, entry: HistoryEntry): HTMLElement {
  const text = Array.isArray(entry.query) ? entry.query.join("  ~>  ") : entry.query;
  const node = h(
    "div",
    { class: "history-entry", "data-id": entry.id },
    h(
      "div",
      {
        class: "history-query",
        title: "run this query again",
        click: () => void ctx.reissueEntry(entry),
      },
      text || "(empty query)",
    ),
  );

  const thumbs = h("div", { class: "history-thumbs" });
  for (const [role, recordId] of [
    ["first", entry.first_viewed],
    ["last", entry.last_viewed],
    ["longest", entry.longest_viewed],
  ] as const) {
    if (!recordId) continue;
    thumbs.append(
      h(
        "figure",
        {
          class: "history-thumb",
          "data-role": role,
          "data-record": recordId,
          title: `${role} viewed — rerun and scroll to it`,
          click: () => void ctx.reissueEntry(entry, recordId),
        },
        h("img", { src: ctx.api.thumbUrl(recordId), alt: recordId }),
        h("figcaption", {}, role),
      ),
    );
  }
  if (thumbs.childNodes.length) node.append(thumbs);
  return node;
}
