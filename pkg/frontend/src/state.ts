/**
 * Console view state. Every field derives from service responses; nothing is
 * re-derived client side, and mutations always come from a re-fetch.
 */

import type { ApiClient } from "./api.js";
import type {
  CertificateDoc,
  CorrectionAtomDoc,
  CorrectionDiff,
  OrderRow,
  ScheduleSummary,
} from "./types.js";

export interface ViewState {
  sessionId: string | null;
  schedule: ScheduleSummary | null;
  orders: OrderRow[];
  activeCertificate: CertificateDoc | null;
  pendingCorrection: CorrectionAtomDoc[];
  lastDiff: CorrectionDiff | null;
  error: string | null;
}

export function initialState(): ViewState {
  return {
    sessionId: null,
    schedule: null,
    orders: [],
    activeCertificate: null,
    pendingCorrection: [],
    lastDiff: null,
    error: null,
  };
}

export class ConsoleStore {
  state: ViewState = initialState();

  constructor(private readonly api: ApiClient) {}

  async uploadScenario(doc: unknown): Promise<ViewState> {
    const schedule = await this.api.createSession(doc);
    this.state = {
      ...initialState(),
      sessionId: schedule.session_id,
      schedule,
    };
    this.state.orders = await this.api.getOrders(schedule.session_id);
    return this.state;
  }

  private requireSession(): string {
    if (!this.state.sessionId) {
      throw new Error("no session: upload a scenario first");
    }
    return this.state.sessionId;
  }

  async query(kind: "why" | "whynot" | "whatif",
              orderId: string): Promise<CertificateDoc> {
    const cert = await this.api.explain(this.requireSession(), kind, orderId);
    this.state = { ...this.state, activeCertificate: cert, error: null };
    if (cert.case === "correction") {
      this.state.pendingCorrection = cert.corrections;
    }
    return cert;
  }

  stageCorrection(atoms: CorrectionAtomDoc[]): void {
    this.state = { ...this.state, pendingCorrection: atoms };
  }

  async applyPendingCorrection(): Promise<CorrectionDiff> {
    const sid = this.requireSession();
    const response = await this.api.applyCorrection(
      sid, this.state.pendingCorrection);
    // Always re-fetch dependent views after a mutation.
    const orders = await this.api.getOrders(sid);
    this.state = {
      ...this.state,
      schedule: response.schedule,
      orders,
      activeCertificate: null,
      pendingCorrection: [],
      lastDiff: response.diff,
    };
    return response.diff;
  }

  statusOf(orderId: string): string | undefined {
    return this.state.orders.find((o) => o.order_id === orderId)?.status;
  }
}
