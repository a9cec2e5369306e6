/** Thin client over the scheduling service's HTTP API — the only backend. */

import type {
  CertificateDoc,
  CorrectionAtomDoc,
  CorrectionResponse,
  ExplainKind,
  OrderRow,
  ScheduleSummary,
  ServiceErrorBody,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly body: ServiceErrorBody;

  constructor(status: number, body: ServiceErrorBody) {
    super(`${body.code}: ${body.message}`);
    this.status = status;
    this.body = body;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(base = "", fetchFn: FetchLike = (...args) => fetch(...args)) {
    this.base = base.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchFn(this.base + path, init);
    const payload = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, payload as ServiceErrorBody);
    }
    return payload as T;
  }

  createSession(scenario: unknown): Promise<ScheduleSummary> {
    return this.request("POST", "/sessions", scenario);
  }

  getSchedule(sessionId: string): Promise<ScheduleSummary> {
    return this.request("GET", `/sessions/${sessionId}/schedule`);
  }

  async getOrders(sessionId: string): Promise<OrderRow[]> {
    const body = await this.request<{ orders: OrderRow[] }>(
      "GET", `/sessions/${sessionId}/orders`);
    return body.orders;
  }

  explain(sessionId: string, kind: ExplainKind, orderId: string,
          params?: { changes?: CorrectionAtomDoc[]; max_atoms?: number }):
      Promise<CertificateDoc> {
    return this.request(
      "POST", `/sessions/${sessionId}/explain/${kind}/${orderId}`, params);
  }

  applyCorrection(sessionId: string,
                  atoms: CorrectionAtomDoc[]): Promise<CorrectionResponse> {
    return this.request("POST", `/sessions/${sessionId}/corrections`, { atoms });
  }

  getReport(sessionId: string): Promise<Record<string, unknown>> {
    return this.request("GET", `/sessions/${sessionId}/report`);
  }
}
