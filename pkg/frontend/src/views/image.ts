/** Image view: overlay with the enlarged image, bounding boxes with a
 * transparency slider, metadata, expandable detection panels, similar
 * images, clickable follow-up links, radius geo search, and the
 * paper-plane submission control. */

import { queryUrl } from "../dsl.js";
import type { AppContext } from "../app.js";
import type { ImageResponse } from "../types.js";
import { clear, h } from "./dom.js";

export function renderImageOverlay(
  overlay: HTMLElement,
  ctx: AppContext,
  detail: ImageResponse,
): void {
  const rec = detail.record;
  clear(overlay);
  overlay.classList.add("open");

  const boxes = h("div", { class: "bbox-layer" });
  for (const det of rec.detections) {
    if (!det.bbox) continue;
    const [x, y, w, hgt] = det.bbox;
    boxes.append(
      h(
        "div",
        {
          class: "bbox",
          title: `${det.term} ${det.score.toFixed(2)}`,
          style: `left:${x * 100}%;top:${y * 100}%;width:${w * 100}%;height:${hgt * 100}%;`,
        },
        h("span", { class: "bbox-label" }, det.term),
      ),
    );
  }

  const alpha = h("input", {
    class: "alpha-slider",
    type: "range",
    min: "0",
    max: "1",
    step: "0.05",
    value: "0.7",
    title: "bounding box opacity",
  }) as HTMLInputElement;
  alpha.addEventListener("input", () => {
    boxes.style.opacity = alpha.value;
  });

  const frame = h(
    "div",
    { class: "image-frame" },
    h("img", { class: "overlay-image", src: ctx.api.thumbUrl(rec.id), alt: rec.id }),
    boxes,
  );

  const meta = h(
    "div",
    { class: "image-meta" },
    h("div", { class: "meta-id" }, rec.id),
    h("div", {}, `${rec.date} (${rec.weekday}) ${rec.ts.slice(11, 19)}`),
    h("div", {}, rec.loc ? `location: ${rec.loc}` : "location: unknown"),
    h("div", {}, `cluster ${rec.cluster_id} (${rec.cluster_size} similar captures)`),
  );

  const panels = h("div", { class: "detection-panels" });
  for (const kind of ["concept", "object", "attribute"]) {
    const dets = rec.detections.filter((d) => d.kind === kind);
    if (!dets.length) continue;
    const list = h("ul", {});
    for (const det of [...dets].sort((a, b) => b.score - a.score)) {
      list.append(
        h(
          "li",
          {
            class: "detection-term",
            "data-term": det.term,
            click: () => void ctx.runQueryText(`--${kind}s ${det.term}`),
            title: "search for this term",
          },
          `${det.term}  ${(det.score * 100).toFixed(0)}%`,
        ),
      );
    }
    panels.append(h("details", { open: true }, h("summary", {}, `${kind}s (${dets.length})`), list));
  }

  const links = h("div", { class: "link-queries" });
  for (const [name, dsl] of Object.entries(detail.links)) {
    links.append(
      h(
        "a",
        {
          class: "link-query",
          "data-name": name,
          href: queryUrl(ctx.baseHref(), dsl),
          title: "run in this window; open in a new window via middle-click",
          click: (event: Event) => {
            event.preventDefault();
            void ctx.runQueryText(dsl);
          },
        },
        `${name}: ${dsl}`,
      ),
    );
  }

  const similar = h("div", { class: "similar-panel" });
  if (detail.neighbors.length) {
    similar.append(h("h4", {}, "similar images"));
    for (const n of detail.neighbors) {
      similar.append(
        h(
          "figure",
          {
            class: "neighbor",
            "data-id": n.id,
            click: () => void ctx.openImage(n.id),
          },
          h("img", { src: ctx.api.thumbUrl(n.id), alt: n.id }),
          h("figcaption", {}, `${(n.similarity * 100).toFixed(1)}%`),
        ),
      );
    }
  }

  const radius = h("input", {
    class: "radius-input",
    type: "number",
    min: "1",
    max: "500",
    value: "30",
    title: "radius in km",
  }) as HTMLInputElement;
  const geoRow = h(
    "div",
    { class: "geo-row" },
    radius,
    h("span", {}, " km "),
    h(
      "button",
      {
        class: "radius-go",
        title: "search images around this one",
        disabled: rec.lat === null,
        click: () => {
          if (rec.lat !== null && rec.lon !== null) {
            void ctx.runGeoSearch(rec.lat, rec.lon, Number(radius.value) || 30);
          }
        },
      },
      "🔍 radius search",
    ),
  );

  const receipt = h("div", { class: "receipt" });
  const submitRow = h(
    "div",
    { class: "submit-row" },
    h(
      "button",
      {
        class: "submit-button",
        title: "submit this image",
        click: async () => {
          receipt.textContent = "submitting…";
          try {
            const r = await ctx.track(ctx.api.submit(rec.id));
            receipt.textContent = `submission ${r.outcome} at ${r.submitted_at}`;
            receipt.setAttribute("data-outcome", r.outcome);
          } catch (error) {
            receipt.textContent = `submission failed: ${(error as Error).message}`;
            receipt.setAttribute("data-outcome", "error");
          }
        },
      },
      "✈ submit",
    ),
    receipt,
  );

  overlay.append(
    h(
      "div",
      { class: "overlay-panel" },
      h(
        "div",
        { class: "overlay-head" },
        alpha,
        h("button", { class: "overlay-close", title: "close", click: () => void ctx.closeImage() }, "✕"),
      ),
      frame,
      meta,
      submitRow,
      geoRow,
      panels,
      links,
      similar,
    ),
  );
}

export function renderOverlayError(overlay: HTMLElement, ctx: AppContext, message: string): void {
  clear(overlay);
  overlay.classList.add("open");
  overlay.append(
    h(
      "div",
      { class: "overlay-panel overlay-error" },
      h("div", { class: "error-line" }, message),
      h("button", { class: "overlay-close", click: () => void ctx.closeImage() }, "close"),
    ),
  );
}
