/** Browser bootstrap: wires the store to the page. */

import { ApiClient } from "./api.js";
import { certificateToCards } from "./cards.js";
import { renderCards, renderOrderList, renderTimeline, renderWhatIf } from "./dom.js";
import { ConsoleStore } from "./state.js";
import { buildTimeline } from "./timeline.js";
import { buildWhatIfPanel } from "./whatif.js";

declare global {
  interface Window {
    CERTSCHED_API?: string;
  }
}

function el(id: string): HTMLElement {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found;
}

export function boot(): void {
  const api = new ApiClient(window.CERTSCHED_API ?? "");
  const store = new ConsoleStore(api);

  const timelineRoot = el("timeline");
  const ordersRoot = el("orders");
  const cardsRoot = el("cards");
  const whatifRoot = el("whatif");
  const statusBar = el("status");

  function note(text: string): void {
    statusBar.textContent = text;
  }

  function refresh(highlight: string[] = []): void {
    const { schedule, orders } = store.state;
    if (!schedule) return;
    renderTimeline(buildTimeline(schedule, { highlightOrders: highlight }),
                   timelineRoot);
    renderOrderList(orders, ordersRoot, onSelectOrder);
  }

  async function onSelectOrder(orderId: string): Promise<void> {
    const status = store.statusOf(orderId);
    try {
      const kind = status === "scheduled" ? "why" : "whynot";
      const cert = await store.query(kind, orderId);
      renderCards(certificateToCards(cert), cardsRoot);
      if (status !== "scheduled") {
        const whatif = await store.query("whatif", orderId);
        const panel = buildWhatIfPanel(whatif);
        renderWhatIf(panel, whatifRoot, (index) => {
          store.stageCorrection(panel.options[index].atoms);
          void applyStaged();
        });
      } else {
        whatifRoot.textContent = "";
      }
    } catch (err) {
      note(String(err));
    }
  }

  async function applyStaged(): Promise<void> {
    try {
      const diff = await store.applyPendingCorrection();
      refresh(diff.newly_scheduled);
      note(`correction applied: +${diff.newly_scheduled.join(", ") || "none"}`
        + (diff.newly_unscheduled.length
           ? ` / -${diff.newly_unscheduled.join(", ")}` : ""));
      cardsRoot.textContent = "";
      whatifRoot.textContent = "";
    } catch (err) {
      note(String(err));
    }
  }

  el("upload-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const input = el("scenario-input") as HTMLTextAreaElement;
    void (async () => {
      try {
        await store.uploadScenario(JSON.parse(input.value));
        refresh();
        note(`session ${store.state.sessionId} ready`);
      } catch (err) {
        note(String(err));
      }
    })();
  });
}

if (typeof document !== "undefined" && document.getElementById("timeline")) {
  boot();
}
