/** DOM bindings: translate view models into elements. Browser-only. */

import type { CardPanel } from "./cards.js";
import type { TimelineModel } from "./timeline.js";
import type { WhatIfPanel } from "./whatif.js";
import type { OrderRow } from "./types.js";

const LANE_HEIGHT = 46;
const STORAGE_HEIGHT = 30;

export function renderTimeline(model: TimelineModel, root: HTMLElement): void {
  root.textContent = "";
  const header = document.createElement("div");
  header.className = "timeline-header";
  header.textContent =
    `objective ${(model.objectiveMilli / 1000).toFixed(3)} · scheduled: `
    + (model.scheduledOrderIds.join(", ") || "none");
  root.appendChild(header);

  for (const lane of model.lanes) {
    const wrap = document.createElement("div");
    wrap.className = "lane";
    const label = document.createElement("div");
    label.className = "lane-label";
    label.textContent = lane.satelliteId;
    wrap.appendChild(label);

    const svgNs = "http://www.w3.org/2000/svg";
    const svg = document.createElementNS(svgNs, "svg");
    svg.setAttribute("width", String(model.widthPx));
    svg.setAttribute("height", String(LANE_HEIGHT + STORAGE_HEIGHT));

    for (const bar of lane.bars) {
      const rect = document.createElementNS(svgNs, "rect");
      rect.setAttribute("x", bar.startPx.toFixed(1));
      rect.setAttribute("y", bar.kind === "downlink" ? "24" : "4");
      rect.setAttribute("width", bar.widthPx.toFixed(1));
      rect.setAttribute("height", "18");
      rect.setAttribute("class", [
        "pass", bar.kind,
        bar.scheduled ? "selected" : bar.active ? "idle" : "filtered",
        bar.highlighted ? "highlight" : "",
      ].join(" ").trim());
      const title = document.createElementNS(svgNs, "title");
      title.textContent = bar.label;
      rect.appendChild(title);
      svg.appendChild(rect);
    }

    const poly = document.createElementNS(svgNs, "polyline");
    poly.setAttribute("class", "storage");
    poly.setAttribute("points", lane.storage
      .map((p) => `${p.xPx.toFixed(1)},${(LANE_HEIGHT + STORAGE_HEIGHT
        - p.yFrac * STORAGE_HEIGHT).toFixed(1)}`)
      .join(" "));
    svg.appendChild(poly);

    wrap.appendChild(svg);
    root.appendChild(wrap);
  }
}

export function renderOrderList(orders: OrderRow[], root: HTMLElement,
                                onSelect: (orderId: string) => void): void {
  root.textContent = "";
  for (const order of orders) {
    const row = document.createElement("button");
    row.className = `order-row badge-${order.status}`;
    row.textContent = `${order.order_id} · ${order.status} · `
      + `${(order.value_milli / 1000).toFixed(1)} value · ${order.data_mb} MB`;
    row.addEventListener("click", () => onSelect(order.order_id));
    root.appendChild(row);
  }
}

export function renderCards(panel: CardPanel, root: HTMLElement): void {
  root.textContent = "";
  const heading = document.createElement("h3");
  heading.textContent = `${panel.orderId}: ${panel.caseLabel}`;
  root.appendChild(heading);
  if (panel.joiner) {
    const joiner = document.createElement("div");
    joiner.className = "joiner";
    joiner.textContent = panel.joiner;
    root.appendChild(joiner);
  }
  for (const card of panel.cards) {
    const el = document.createElement("div");
    el.className = `cause-card kind-${card.kind}`;
    const title = document.createElement("strong");
    title.textContent = card.title;
    const body = document.createElement("p");
    body.textContent = card.body;
    el.append(title, body);
    if (card.constraints.length) {
      const refs = document.createElement("code");
      refs.textContent = card.constraints.join(", ");
      el.appendChild(refs);
    }
    root.appendChild(el);
  }
  if (panel.footnote) {
    const note = document.createElement("small");
    note.textContent = panel.footnote;
    root.appendChild(note);
  }
}

export function renderWhatIf(panel: WhatIfPanel, root: HTMLElement,
                             onApply: (optionIndex: number) => void): void {
  root.textContent = "";
  const heading = document.createElement("h3");
  heading.textContent = `What would make ${panel.orderId} schedulable?`;
  root.appendChild(heading);
  if (panel.state === "none") {
    const msg = document.createElement("p");
    msg.textContent = panel.emptyMessage ?? "No correction found.";
    root.appendChild(msg);
    return;
  }
  panel.options.forEach((option, index) => {
    const el = document.createElement("div");
    el.className = "correction-option";
    const desc = document.createElement("p");
    desc.textContent = `${option.labels.join(" + ")} `
      + `(cost ${(option.costMilli / 1000).toFixed(3)})`;
    const apply = document.createElement("button");
    apply.textContent = index === 0 ? "Apply minimal correction" : "Apply";
    apply.addEventListener("click", () => onApply(index));
    el.append(desc, apply);
    root.appendChild(el);
  });
  if (!panel.validated) {
    const warn = document.createElement("p");
    warn.className = "warn";
    warn.textContent = "validation re-solve did not confirm this correction";
    root.appendChild(warn);
  }
}
