/** Calendar view: paginated day-summary cards with weekday filtering,
 * term-frequency sorting and adjustable images per day. Clicking a card
 * opens that date in the Filter view. */

import type { AppContext } from "../app.js";
import type { DaySummary } from "../types.js";
import { clear, h } from "./dom.js";

const WEEKDAYS = ["monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"];

export function renderCalendarView(root: HTMLElement, ctx: AppContext): void {
  clear(root);
  root.append(renderControls(ctx), h("div", { class: "error-line" }));
  const cards = h("div", { class: "day-cards" });
  const pager = h("div", { class: "paginator" });
  root.append(cards, pager);
}

function renderControls(ctx: AppContext): HTMLElement {
  const cal = ctx.state.calendar;

  const weekday = h("select", { class: "weekday-filter", title: "Filter by weekday" }) as HTMLSelectElement;
  weekday.append(h("option", { value: "" }, "all weekdays"));
  for (const name of WEEKDAYS) weekday.append(h("option", { value: name }, name));
  weekday.value = cal.weekday;
  weekday.addEventListener("change", () => {
    cal.weekday = weekday.value;
    cal.page = 0;
    void ctx.refreshCalendar();
  });

  const pageSize = h("select", { class: "page-size", title: "Days per page" }) as HTMLSelectElement;
  for (const n of [3, 6, 10, 20]) pageSize.append(h("option", { value: String(n) }, `${n} days`));
  pageSize.value = String(cal.pageSize);
  pageSize.addEventListener("change", () => {
    cal.pageSize = Number(pageSize.value);
    cal.page = 0;
    void ctx.refreshCalendar();
  });

  const images = h("input", {
    class: "images-per-day",
    type: "number",
    min: "1",
    max: "24",
    value: String(cal.imagesPerDay),
    title: "Images per day summary",
  }) as HTMLInputElement;
  images.addEventListener("change", () => {
    cal.imagesPerDay = Math.max(1, Number(images.value) || 1);
    void ctx.refreshCalendar();
  });

  const controls = h(
    "div",
    { class: "calendar-controls" },
    weekday,
    pageSize,
    h("label", {}, "images/day ", images),
  );

  if (ctx.state.expert) {
    const sortKind = h("select", { class: "cal-sort-kind" }) as HTMLSelectElement;
    for (const [value, label] of [
      ["date", "by date"],
      ["concept", "by concept freq."],
      ["object", "by object freq."],
      ["location", "by location freq."],
    ]) {
      sortKind.append(h("option", { value }, label));
    }
    const sortTerm = h("input", {
      class: "cal-sort-term",
      type: "text",
      placeholder: "term, e.g. car",
    }) as HTMLInputElement;
    const apply = () => {
      cal.sort =
        sortKind.value === "date" || !sortTerm.value.trim()
          ? "date"
          : `term:${sortKind.value}:${sortTerm.value.trim().toLowerCase()}`;
      cal.page = 0;
      void ctx.refreshCalendar();
    };
    sortKind.addEventListener("change", apply);
    sortTerm.addEventListener("change", apply);
    controls.append(sortKind, sortTerm);
  }
  return controls;
}

export function renderCalendarData(
  root: HTMLElement,
  ctx: AppContext,
  days: DaySummary[],
  total: number,
): void {
  const cards = root.querySelector(".day-cards") as HTMLElement | null;
  const pager = root.querySelector(".paginator") as HTMLElement | null;
  if (!cards || !pager) return;

  clear(cards);
  if (days.length === 0) {
    cards.append(h("div", { class: "empty-state" }, "no days match"));
  }
  for (const day of days) {
    cards.append(renderDayCard(ctx, day));
  }

  const cal = ctx.state.calendar;
  const pages = Math.max(1, Math.ceil(total / cal.pageSize));
  clear(pager);
  pager.append(
    h(
      "button",
      {
        class: "paginator-prev",
        disabled: cal.page <= 0,
        click: () => {
          cal.page -= 1;
          void ctx.refreshCalendar();
        },
      },
      "‹ prev",
    ),
    h("span", { class: "paginator-label" }, ` page ${cal.page + 1} / ${pages} — ${total} days `),
    h(
      "button",
      {
        class: "paginator-next",
        disabled: cal.page >= pages - 1,
        click: () => {
          cal.page += 1;
          void ctx.refreshCalendar();
        },
      },
      "next ›",
    ),
  );
}

function renderDayCard(ctx: AppContext, day: DaySummary): HTMLElement {
  const thumbs = h("div", { class: "day-thumbs" });
  for (const id of day.representatives) {
    thumbs.append(h("img", { src: ctx.api.thumbUrl(id), alt: id, title: id }));
  }

  const openDate = () => {
    const dsl = `--date ${day.date.split("-").join("/")}`;
    void ctx.runQueryText(dsl);
  };

  const card = h(
    "article",
    { class: "day-card", "data-date": day.date },
    h(
      "header",
      { click: openDate, title: "open this day in the Filter view" },
      h("strong", {}, `${day.date} (${day.weekday})`),
      h("span", { class: "day-count" }, ` ${day.image_count} images`),
    ),
    thumbs,
  );

  for (const [label, cls, items] of [
    ["locations", "top-locations", day.top_locations],
    ["concepts", "top-concepts", day.top_concepts],
    ["objects", "top-objects", day.top_objects],
  ] as const) {
    const list = h("ul", { class: cls });
    for (const [term, count] of items) {
      list.append(h("li", {}, `${term} (${count})`));
    }
    card.append(h("details", { class: "day-panel" }, h("summary", {}, `top ${label}`), list));
  }
  return card;
}
